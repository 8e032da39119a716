#include "lma/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "lma/io.hpp"
#include "lma/parallel.hpp"

namespace lma {

namespace {

std::string fmt_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace

int Dataset::class_index(const std::string& name) const {
    auto it = std::find(class_names.begin(), class_names.end(), name);
    return it == class_names.end() ? -1 : static_cast<int>(it - class_names.begin());
}

Dataset extract_dataset(const std::vector<MotionSequence>& sequences,
                        const WindowSpec& spec, const ThresholdPolicy& policy,
                        int jobs) {
    Dataset ds;
    ds.schema = default_schema();

    std::vector<std::vector<FeatureVector>> per_seq(sequences.size());
    parallel_for(sequences.size(), jobs, [&](std::size_t s) {
        const auto& seq = sequences[s];
        const Skeleton& skeleton = seq.skeleton;
        for (const auto& window : make_windows(seq, spec))
            per_seq[s].push_back(extract_features(window, skeleton, policy));
    });

    std::set<std::string> label_set;
    for (const auto& seq : sequences)
        if (seq.label) label_set.insert(*seq.label);
    ds.class_names.assign(label_set.begin(), label_set.end());

    for (auto& fvs : per_seq) {
        for (auto& fv : fvs) {
            ds.rows.push_back(std::move(fv.values));
            ds.labels.push_back(fv.label ? ds.class_index(*fv.label) : -1);
            ds.sequence_ids.push_back(fv.sequence_id);
            ds.start_frames.push_back(fv.start_frame);
        }
    }
    return ds;
}

void save_dataset_csv(const Dataset& ds, const std::string& path) {
    std::ostringstream out;
    for (std::size_t i = 0; i < ds.schema->names.size(); ++i)
        out << ds.schema->names[i] << ",";
    out << "label,sequence_id,start_frame\n";
    for (std::size_t r = 0; r < ds.rows.size(); ++r) {
        for (double v : ds.rows[r]) out << fmt_double(v) << ",";
        out << (ds.labels[r] >= 0 ? ds.class_names[ds.labels[r]] : "") << ","
            << ds.sequence_ids[r] << "," << ds.start_frames[r] << "\n";
    }
    atomic_write(path, out.str());
}

Dataset load_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);

    Dataset ds;
    ds.schema = default_schema();
    const std::size_t n_features = ds.schema->size();

    std::string line;
    // leading '#' lines carry run metadata (e.g. the root seed)
    do {
        if (!std::getline(in, line)) throw ParseError(path + ": empty file");
    } while (!line.empty() && line[0] == '#');
    {
        std::istringstream ss(line);
        std::string cell;
        std::vector<std::string> header;
        while (std::getline(ss, cell, ',')) header.push_back(cell);
        if (header.size() != n_features + 3)
            throw ParseError(path + ": expected " + std::to_string(n_features + 3) +
                             " columns, got " + std::to_string(header.size()));
        for (std::size_t i = 0; i < n_features; ++i)
            if (header[i] != ds.schema->names[i])
                throw ParseError(path + ": column " + std::to_string(i) + " is '" +
                                 header[i] + "', expected '" + ds.schema->names[i] + "'");
    }

    std::set<std::string> label_set;
    std::vector<std::string> raw_labels;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.push_back("");
        if (cells.size() != n_features + 3)
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected " +
                             std::to_string(n_features + 3) + " cells, got " +
                             std::to_string(cells.size()));
        std::vector<double> row(n_features);
        for (std::size_t i = 0; i < n_features; ++i) {
            auto res = std::from_chars(cells[i].data(), cells[i].data() + cells[i].size(), row[i]);
            if (res.ec != std::errc{})
                throw ParseError(path + ":" + std::to_string(lineno) + ": bad number '" +
                                 cells[i] + "'");
        }
        ds.rows.push_back(std::move(row));
        raw_labels.push_back(cells[n_features]);
        if (!cells[n_features].empty()) label_set.insert(cells[n_features]);
        ds.sequence_ids.push_back(cells[n_features + 1]);
        ds.start_frames.push_back(std::stoi(cells[n_features + 2]));
    }
    ds.class_names.assign(label_set.begin(), label_set.end());
    for (const auto& l : raw_labels)
        ds.labels.push_back(l.empty() ? -1 : ds.class_index(l));
    return ds;
}

}  // namespace lma
