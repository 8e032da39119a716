#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lma/forest.hpp"  // Matrix, Prediction
#include "lma/tree.hpp"

namespace lma {

struct SvmParams {
    double lambda = 1e-4;      // L2 regularization
    int epochs = 50;
    double learning_rate = 0.1;
};

/// One-vs-rest linear SVM on standardized features. Constant features are
/// masked (std recorded as 0 and the column ignored).
struct SvmModel {
    std::vector<std::vector<double>> weights;  // [class][feature]
    std::vector<double> biases;
    double lambda = 0.0;
    std::vector<double> feature_mean, feature_std;  // training-split statistics
    int n_classes = 0;
    std::uint64_t schema_hash = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> class_names;
    std::vector<double> epoch_objectives;  // summed over classes, per epoch

    std::vector<double> margins(const std::vector<double>& x) const;
    /// Softmax over per-class margins.
    std::vector<double> predict_proba(const std::vector<double>& x) const;
    Prediction predict(const std::vector<double>& x) const;
};

/// Hinge + L2 objective of one binary one-vs-rest problem, on standardized
/// features; `positive_class` maps labels to +1/-1.
double svm_objective(const Matrix& Xs, const std::vector<int>& y, int positive_class,
                     const std::vector<double>& w, double bias, double lambda);

/// Deterministic-shuffle stochastic subgradient descent per class. Epoch
/// steps are guarded: an epoch that raises the full objective is rolled back
/// and the step size halved, so recorded epoch objectives never increase.
SvmModel train_svm(const Matrix& X, const std::vector<int>& y, int n_classes,
                   const SvmParams& params, std::uint64_t seed);

}  // namespace lma
