#include "gazedist/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "gazedist/kernels.hpp"

namespace gazedist {

namespace {
constexpr double kKktTolerance = 1e-3;
constexpr int kMaxIterations = 10000;
constexpr double kTau = 1e-12;
// Alphas within this distance of a box bound count as (and get snapped to)
// the bound, so rounding residue cannot keep a variable in the working set.
constexpr double kBoundEps = 1e-12;
}  // namespace

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma) {
    if (a.size() != b.size())
        throw std::invalid_argument("rbf_kernel: length mismatch");
    return std::exp(-gamma * kernels::dispatch().sqdist(a.data(), b.data(), a.size()));
}

double default_gamma(std::span<const std::vector<double>> features) {
    if (features.empty() || features.front().empty()) return 1.0;
    const std::size_t n = features.size();
    const std::size_t d = features.front().size();
    double total_var = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        double mean = 0.0;
        for (const auto& row : features) mean += row[j];
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (const auto& row : features) var += (row[j] - mean) * (row[j] - mean);
        total_var += var / static_cast<double>(n);
    }
    const double mean_var = total_var / static_cast<double>(d);
    if (mean_var <= 0.0) return 1.0;
    return 1.0 / (static_cast<double>(d) * mean_var);
}

TrainedModel train_svm(std::span<const std::vector<double>> features,
                       std::span<const int> labels, KernelParams params,
                       std::uint64_t seed) {
    const std::size_t n = features.size();
    if (n != labels.size())
        throw std::invalid_argument("train_svm: feature/label count mismatch");
    if (n == 0) throw std::invalid_argument("train_svm: empty training set");
    const std::size_t dim = features.front().size();
    bool has_pos = false, has_neg = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (features[i].size() != dim)
            throw std::invalid_argument("train_svm: ragged feature matrix");
        for (const double v : features[i])
            if (!std::isfinite(v)) throw std::invalid_argument("train_svm: non-finite feature");
        if (labels[i] == kLabelDistracted) has_pos = true;
        else if (labels[i] == kLabelNeutral) has_neg = true;
        else throw std::invalid_argument("train_svm: labels must be -1 or +1");
    }
    if (!has_pos || !has_neg)
        throw std::invalid_argument("train_svm: both classes must be present");

    if (params.gamma <= 0.0) params.gamma = default_gamma(features);
    const double c = params.c;

    // Seeded permutation fixes the internal data order, making pair
    // selection (and thus the whole run) reproducible.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<const double*> x(n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = features[order[i]].data();
        y[i] = static_cast<double>(labels[order[i]]);
    }

    // Full kernel matrix; training sets here are a few thousand rows at most.
    std::vector<double> kmat(n * n);
    const auto& ops = kernels::dispatch();
    for (std::size_t i = 0; i < n; ++i) {
        kmat[i * n + i] = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = std::exp(-params.gamma * ops.sqdist(x[i], x[j], dim));
            kmat[i * n + j] = v;
            kmat[j * n + i] = v;
        }
    }
    const auto kval = [&](std::size_t i, std::size_t j) { return kmat[i * n + j]; };

    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0);  // gradient of 1/2 a'Qa - e'a

    for (int iter = 0; iter < kMaxIterations; ++iter) {
        // Second-order working-pair selection.
        double gmax = -std::numeric_limits<double>::infinity();
        double gmax2 = -std::numeric_limits<double>::infinity();
        std::ptrdiff_t i_sel = -1;
        for (std::size_t t = 0; t < n; ++t) {
            const bool in_up = (y[t] > 0 && alpha[t] < c - kBoundEps) ||
                               (y[t] < 0 && alpha[t] > kBoundEps);
            if (in_up && -y[t] * grad[t] > gmax) {
                gmax = -y[t] * grad[t];
                i_sel = static_cast<std::ptrdiff_t>(t);
            }
        }
        std::ptrdiff_t j_sel = -1;
        double best_gain = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const bool in_low = (y[t] > 0 && alpha[t] > kBoundEps) ||
                                (y[t] < 0 && alpha[t] < c - kBoundEps);
            if (!in_low) continue;
            const double ygt = y[t] * grad[t];
            gmax2 = std::max(gmax2, ygt);
            const double b = gmax + ygt;
            if (i_sel < 0 || b <= 0.0) continue;
            const std::size_t i = static_cast<std::size_t>(i_sel);
            double a = kval(i, i) + kval(t, t) - 2.0 * y[i] * y[t] * kval(i, t);
            if (a <= 0.0) a = kTau;
            const double gain = -(b * b) / a;
            if (gain < best_gain) {
                best_gain = gain;
                j_sel = static_cast<std::ptrdiff_t>(t);
            }
        }
        if (i_sel < 0 || gmax + gmax2 < kKktTolerance || j_sel < 0) break;

        const auto i = static_cast<std::size_t>(i_sel);
        const auto j = static_cast<std::size_t>(j_sel);
        const double s = y[i] * y[j];
        double eta = kval(i, i) + kval(j, j) - 2.0 * kval(i, j);
        if (eta <= 0.0) eta = kTau;
        const double old_ai = alpha[i];
        const double old_aj = alpha[j];

        double aj = old_aj + y[j] * (y[i] * grad[i] - y[j] * grad[j]) / eta;
        double lo, hi;
        if (s < 0.0) {
            lo = std::max(0.0, old_aj - old_ai);
            hi = std::min(c, c + old_aj - old_ai);
        } else {
            lo = std::max(0.0, old_ai + old_aj - c);
            hi = std::min(c, old_ai + old_aj);
        }
        aj = std::clamp(aj, lo, hi);
        double ai = old_ai + s * (old_aj - aj);
        if (ai > c - kBoundEps) ai = c;
        else if (ai < kBoundEps) ai = 0.0;
        if (aj > c - kBoundEps) aj = c;
        else if (aj < kBoundEps) aj = 0.0;
        alpha[i] = ai;
        alpha[j] = aj;

        const double di = ai - old_ai;
        const double dj = aj - old_aj;
        for (std::size_t t = 0; t < n; ++t)
            grad[t] += y[t] * (y[i] * kval(i, t) * di + y[j] * kval(j, t) * dj);
    }

    // Bias from the KKT conditions (free vectors when available).
    double ub = std::numeric_limits<double>::infinity();
    double lb = -std::numeric_limits<double>::infinity();
    double sum_free = 0.0;
    int nr_free = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double yg = y[t] * grad[t];
        if (alpha[t] >= c - kBoundEps) {
            if (y[t] < 0) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else if (alpha[t] <= kBoundEps) {
            if (y[t] > 0) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else {
            ++nr_free;
            sum_free += yg;
        }
    }
    const double rho = nr_free > 0 ? sum_free / nr_free : (ub + lb) / 2.0;

    TrainedModel model;
    model.kernel = params;
    model.bias = -rho;
    for (std::size_t t = 0; t < n; ++t) {
        if (alpha[t] <= kBoundEps) continue;
        model.support_vectors.emplace_back(x[t], x[t] + dim);
        model.dual_coefs.push_back(alpha[t] * y[t]);
    }
    return model;
}

double decision_value(const TrainedModel& model, std::span<const double> x) {
    double acc = model.bias;
    for (std::size_t i = 0; i < model.support_vectors.size(); ++i)
        acc += model.dual_coefs[i] * rbf_kernel(model.support_vectors[i], x, model.kernel.gamma);
    return acc;
}

int predict(const TrainedModel& model, std::span<const double> x) {
    return decision_value(model, x) > 0.0 ? kLabelDistracted : kLabelNeutral;
}

}  // namespace gazedist
