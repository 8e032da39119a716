#include "lma/metrics.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "lma/io.hpp"

namespace lma {

ConfusionMatrix ConfusionMatrix::from_predictions(const std::vector<int>& truth,
                                                  const std::vector<int>& predicted,
                                                  const std::vector<std::string>& class_names) {
    if (truth.size() != predicted.size())
        throw std::invalid_argument("confusion matrix: size mismatch");
    ConfusionMatrix cm;
    cm.class_names = class_names;
    const int n = cm.n_classes();
    cm.counts.assign(n, std::vector<long>(n, 0));
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] < 0 || truth[i] >= n || predicted[i] < 0 || predicted[i] >= n)
            throw std::invalid_argument("confusion matrix: class index out of range");
        ++cm.counts[truth[i]][predicted[i]];
    }
    return cm;
}

long ConfusionMatrix::total() const {
    long t = 0;
    for (const auto& row : counts)
        for (long c : row) t += c;
    return t;
}

long ConfusionMatrix::trace() const {
    long t = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) t += counts[i][i];
    return t;
}

MetricsReport per_class_metrics(const ConfusionMatrix& cm) {
    const long total = cm.total();
    if (total == 0) throw std::invalid_argument("metrics: empty confusion matrix");
    const int n = cm.n_classes();

    MetricsReport rep;
    rep.per_class.resize(n);
    for (int c = 0; c < n; ++c) {
        long tp = cm.counts[c][c], fp = 0, fn = 0;
        for (int o = 0; o < n; ++o) {
            if (o == c) continue;
            fp += cm.counts[o][c];
            fn += cm.counts[c][o];
        }
        ClassMetrics& m = rep.per_class[c];
        if (tp + fp == 0) {
            m.precision = 0.0;
            m.precision_defined = false;
        } else {
            m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
        }
        if (tp + fn == 0) {
            m.recall = 0.0;
            m.recall_defined = false;
        } else {
            m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
        }
        m.f1 = (m.precision + m.recall) > 0.0
                   ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                   : 0.0;
        rep.macro_precision += m.precision;
        rep.macro_recall += m.recall;
        rep.macro_f1 += m.f1;
    }
    rep.macro_precision /= n;
    rep.macro_recall /= n;
    rep.macro_f1 /= n;
    rep.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(total);
    return rep;
}

std::vector<SweepRow> window_sweep(const std::vector<MotionSequence>& sequences,
                                   std::vector<int> lengths, const WindowSpec& base_spec,
                                   const ThresholdPolicy& policy, ModelFamily family,
                                   const ParamMap& params, int k_folds,
                                   std::uint64_t seed, int jobs) {
    std::sort(lengths.begin(), lengths.end());
    lengths.erase(std::unique(lengths.begin(), lengths.end()), lengths.end());

    std::vector<SweepRow> rows;
    for (int length : lengths) {
        SweepRow row;
        row.length = length;
        WindowSpec spec = base_spec;
        spec.length_frames = length;
        if (spec.sub_window >= length) spec.sub_window = std::max(1, length - 1);

        bool any_fits = std::any_of(sequences.begin(), sequences.end(), [&](const auto& s) {
            return static_cast<int>(s.frames.size()) >= length;
        });
        if (!any_fits) {
            rows.push_back(row);
            continue;
        }
        Dataset ds = extract_dataset(sequences, spec, policy, jobs);
        if (ds.size() == 0 || ds.n_classes() < 2) {
            rows.push_back(row);
            continue;
        }
        auto plan = CvPlan::grouped(ds.sequence_ids, k_folds, seed);
        auto pred = cv_predict(ds.rows, ds.labels, ds.n_classes(), family, params, plan,
                               seed, jobs);
        int correct = 0;
        for (std::size_t i = 0; i < pred.size(); ++i)
            if (pred[i] == ds.labels[i]) ++correct;
        row.mean_accuracy = static_cast<double>(correct) / static_cast<double>(pred.size());
        row.feasible = true;
        rows.push_back(row);
    }
    return rows;
}

void save_confusion_csv(const ConfusionMatrix& cm, const std::string& path) {
    std::ostringstream out;
    out << "true\\pred";
    for (const auto& c : cm.class_names) out << "," << c;
    out << "\n";
    for (int r = 0; r < cm.n_classes(); ++r) {
        out << cm.class_names[r];
        for (int c = 0; c < cm.n_classes(); ++c) out << "," << cm.counts[r][c];
        out << "\n";
    }
    atomic_write(path, out.str());
}

void save_metrics_csv(const ConfusionMatrix& cm, const MetricsReport& rep,
                      const std::string& path) {
    std::ostringstream out;
    out << "class,precision,recall,f1,flags\n";
    for (int c = 0; c < cm.n_classes(); ++c) {
        const auto& m = rep.per_class[c];
        out << cm.class_names[c] << "," << m.precision << "," << m.recall << "," << m.f1
            << ",";
        if (!m.precision_defined) out << "never_predicted;";
        if (!m.recall_defined) out << "never_true;";
        out << "\n";
    }
    out << "macro," << rep.macro_precision << "," << rep.macro_recall << ","
        << rep.macro_f1 << ",\n";
    out << "accuracy," << rep.accuracy << ",,,\n";
    atomic_write(path, out.str());
}

void save_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    std::ostringstream out;
    out << "window_length,mean_cv_accuracy,feasible\n";
    for (const auto& r : rows)
        out << r.length << "," << r.mean_accuracy << "," << (r.feasible ? 1 : 0) << "\n";
    atomic_write(path, out.str());
}

}  // namespace lma
