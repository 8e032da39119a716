#pragma once

#include <memory>
#include <string>
#include <vector>

#include "lma/features.hpp"
#include "lma/motion.hpp"

namespace lma {

/// Feature matrix with labels and window provenance. Class indices follow
/// the sorted order of the distinct label strings.
struct Dataset {
    std::shared_ptr<const FeatureSchema> schema;
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;  // -1 when the source window was unlabeled
    std::vector<std::string> class_names;
    std::vector<std::string> sequence_ids;
    std::vector<int> start_frames;

    std::size_t size() const { return rows.size(); }
    int n_classes() const { return static_cast<int>(class_names.size()); }
    int class_index(const std::string& name) const;
};

/// Windows every sequence and extracts one feature row per window, in input
/// order. Parallel across sequences when jobs != 1.
Dataset extract_dataset(const std::vector<MotionSequence>& sequences,
                        const WindowSpec& spec, const ThresholdPolicy& policy,
                        int jobs = 1);

void save_dataset_csv(const Dataset& ds, const std::string& path);
Dataset load_dataset_csv(const std::string& path);

}  // namespace lma
