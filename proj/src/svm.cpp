#include "lma/svm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace lma {

namespace {

std::vector<double> standardize(const std::vector<double>& x,
                                const std::vector<double>& mean,
                                const std::vector<double>& std) {
    std::vector<double> z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        z[i] = std[i] > 0.0 ? (x[i] - mean[i]) / std[i] : 0.0;
    return z;
}

}  // namespace

std::vector<double> SvmModel::margins(const std::vector<double>& x) const {
    const auto z = standardize(x, feature_mean, feature_std);
    std::vector<double> m(n_classes, 0.0);
    for (int c = 0; c < n_classes; ++c) {
        double s = biases[c];
        for (std::size_t i = 0; i < z.size(); ++i) s += weights[c][i] * z[i];
        m[c] = s;
    }
    return m;
}

std::vector<double> SvmModel::predict_proba(const std::vector<double>& x) const {
    auto m = margins(x);
    const double peak = *std::max_element(m.begin(), m.end());
    double total = 0.0;
    for (double& v : m) {
        v = std::exp(v - peak);
        total += v;
    }
    for (double& v : m) v /= total;
    return m;
}

Prediction SvmModel::predict(const std::vector<double>& x) const {
    Prediction out;
    out.class_probabilities = predict_proba(x);
    out.label = argmax_lowest(out.class_probabilities);
    return out;
}

double svm_objective(const Matrix& Xs, const std::vector<int>& y, int positive_class,
                     const std::vector<double>& w, double bias, double lambda) {
    double hinge = 0.0;
    for (std::size_t i = 0; i < Xs.size(); ++i) {
        const double t = y[i] == positive_class ? 1.0 : -1.0;
        double m = bias;
        for (std::size_t f = 0; f < w.size(); ++f) m += w[f] * Xs[i][f];
        hinge += std::max(0.0, 1.0 - t * m);
    }
    hinge /= static_cast<double>(Xs.size());
    double reg = 0.0;
    for (double v : w) reg += v * v;
    return hinge + lambda * reg;
}

SvmModel train_svm(const Matrix& X, const std::vector<int>& y, int n_classes,
                   const SvmParams& params, std::uint64_t seed) {
    if (X.empty() || X.size() != y.size())
        throw std::invalid_argument("train_svm: empty data or size mismatch");
    const std::size_t n = X.size();
    const std::size_t d = X[0].size();

    SvmModel model;
    model.n_classes = n_classes;
    model.lambda = params.lambda;
    model.seed = seed;
    model.feature_mean.assign(d, 0.0);
    model.feature_std.assign(d, 0.0);
    for (const auto& row : X)
        for (std::size_t f = 0; f < d; ++f) model.feature_mean[f] += row[f];
    for (double& m : model.feature_mean) m /= static_cast<double>(n);
    for (const auto& row : X)
        for (std::size_t f = 0; f < d; ++f) {
            const double c = row[f] - model.feature_mean[f];
            model.feature_std[f] += c * c;
        }
    for (double& s : model.feature_std) {
        s = std::sqrt(s / static_cast<double>(n));
        if (s < 1e-12) s = 0.0;  // constant feature: masked
    }

    Matrix Xs(n);
    for (std::size_t i = 0; i < n; ++i)
        Xs[i] = standardize(X[i], model.feature_mean, model.feature_std);

    model.weights.assign(n_classes, std::vector<double>(d, 0.0));
    model.biases.assign(n_classes, 0.0);
    model.epoch_objectives.assign(params.epochs, 0.0);

    std::vector<double> eta(n_classes, params.learning_rate);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);

    for (int epoch = 0; epoch < params.epochs; ++epoch) {
        std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(epoch)));
        std::shuffle(perm.begin(), perm.end(), rng);
        double epoch_total = 0.0;
        for (int c = 0; c < n_classes; ++c) {
            auto w = model.weights[c];
            double b = model.biases[c];
            const double before = svm_objective(Xs, y, c, w, b, params.lambda);
            for (std::size_t i : perm) {
                const double t = y[i] == c ? 1.0 : -1.0;
                double m = b;
                for (std::size_t f = 0; f < d; ++f) m += w[f] * Xs[i][f];
                const double shrink = 1.0 - 2.0 * eta[c] * params.lambda;
                for (double& v : w) v *= shrink;
                if (t * m < 1.0) {
                    for (std::size_t f = 0; f < d; ++f) w[f] += eta[c] * t * Xs[i][f];
                    b += eta[c] * t;
                }
            }
            const double after = svm_objective(Xs, y, c, w, b, params.lambda);
            if (after <= before) {
                model.weights[c] = std::move(w);
                model.biases[c] = b;
                epoch_total += after;
            } else {
                eta[c] *= 0.5;  // reject the epoch, retry smaller next time
                epoch_total += before;
            }
        }
        model.epoch_objectives[epoch] = epoch_total;
    }
    return model;
}

}  // namespace lma
