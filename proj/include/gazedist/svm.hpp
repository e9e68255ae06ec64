#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gazedist/features.hpp"

namespace gazedist {

struct KernelParams {
    double gamma = 0.0;  // <= 0 means "derive from data": 1 / (n_features * mean variance)
    double c = 1.0;
};

/// Binary max-margin model with an RBF kernel: sign(sum_i coef_i K(sv_i, x) + bias).
/// Label convention: -1 = neutral, +1 = distracted.
struct TrainedModel {
    std::vector<std::vector<double>> support_vectors;  // standardized features
    std::vector<double> dual_coefs;                    // alpha_i * y_i
    double bias = 0.0;
    KernelParams kernel;
    FeatureScaler scaler;
};

inline constexpr int kLabelNeutral = -1;
inline constexpr int kLabelDistracted = +1;

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma);

/// Variance-scaled gamma heuristic: 1 / (n_features * mean per-feature variance).
double default_gamma(std::span<const std::vector<double>> features);

/// Trains by sequential minimal optimization with second-order working-pair
/// selection, stopping at KKT violation < 1e-3 or 10,000 iterations.
/// Deterministic given the seed (it fixes the internal data order).
/// Throws std::invalid_argument on single-class or non-finite input.
TrainedModel train_svm(std::span<const std::vector<double>> features,
                       std::span<const int> labels, KernelParams params,
                       std::uint64_t seed);

double decision_value(const TrainedModel& model, std::span<const double> x);

/// Sign of the decision value; an exact 0 resolves to neutral.
int predict(const TrainedModel& model, std::span<const double> x);

}  // namespace gazedist
