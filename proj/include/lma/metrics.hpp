#pragma once

#include <string>
#include <vector>

#include "lma/cv.hpp"
#include "lma/dataset.hpp"

namespace lma {

struct ConfusionMatrix {
    std::vector<std::string> class_names;
    std::vector<std::vector<long>> counts;  // rows = true, cols = predicted

    static ConfusionMatrix from_predictions(const std::vector<int>& truth,
                                            const std::vector<int>& predicted,
                                            const std::vector<std::string>& class_names);
    int n_classes() const { return static_cast<int>(class_names.size()); }
    long total() const;
    long trace() const;
};

struct ClassMetrics {
    double precision = 0.0, recall = 0.0, f1 = 0.0;
    bool precision_defined = true;  // false when the class was never predicted
    bool recall_defined = true;     // false when the class never occurs
};

struct MetricsReport {
    std::vector<ClassMetrics> per_class;
    double macro_precision = 0.0, macro_recall = 0.0, macro_f1 = 0.0;
    double accuracy = 0.0;
};

/// Precision/recall/F1 per class plus unweighted macro averages. Zero
/// denominators yield 0 with the matching `*_defined` flag cleared.
MetricsReport per_class_metrics(const ConfusionMatrix& cm);

struct SweepRow {
    int length = 0;
    double mean_accuracy = 0.0;
    bool feasible = false;
};

/// Re-extracts features and re-runs grouped CV at each window length under
/// identical seeds. Duplicate lengths collapse to one row; lengths no
/// sequence can fill are marked infeasible.
std::vector<SweepRow> window_sweep(const std::vector<MotionSequence>& sequences,
                                   std::vector<int> lengths, const WindowSpec& base_spec,
                                   const ThresholdPolicy& policy, ModelFamily family,
                                   const ParamMap& params, int k_folds,
                                   std::uint64_t seed, int jobs = 1);

void save_confusion_csv(const ConfusionMatrix& cm, const std::string& path);
void save_metrics_csv(const ConfusionMatrix& cm, const MetricsReport& report,
                      const std::string& path);
void save_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);

}  // namespace lma
