#include "gazedist/features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gazedist {

namespace {

// Nearest-rank percentile on a sorted sequence.
double nearest_rank(const std::vector<int>& sorted, double p) {
    const auto n = sorted.size();
    const auto rank = static_cast<std::size_t>(std::ceil(p * n));
    return sorted[std::max<std::size_t>(rank, 1) - 1];
}

}  // namespace

std::array<double, kZoneStatCount> ZoneStats::flatten() const {
    return {std_x, std_y, centroid_x, centroid_y, min_x, max_x, min_y, max_y,
            q1_x, med_x, q3_x, q1_y, med_y, q3_y, area, perimeter, present};
}

std::array<std::int64_t, kHistogramBins> intensity_histogram(const Grid& grid) {
    std::array<std::int64_t, kHistogramBins> counts{};
    const double* p = grid.data();
    const std::size_t n = grid.size();
    for (std::size_t i = 0; i < n; ++i) {
        int bin = static_cast<int>(p[i] * kHistogramBins);
        if (bin >= kHistogramBins) bin = kHistogramBins - 1;  // closes the last bin at 1.0
        ++counts[bin];
    }
    return counts;
}

std::array<ZoneMask, kZoneCount> threshold_zones(const Grid& grid) {
    std::array<ZoneMask, kZoneCount> masks;
    for (int k = 0; k < kZoneCount; ++k) {
        masks[k].width = grid.width();
        masks[k].height = grid.height();
        masks[k].cells.resize(grid.size());
        const double threshold = 0.2 * (k + 1);
        const double* p = grid.data();
        for (std::size_t i = 0; i < grid.size(); ++i)
            masks[k].cells[i] = p[i] >= threshold ? 1 : 0;
    }
    return masks;
}

ZoneStats zone_stats(const ZoneMask& mask) {
    ZoneStats s;
    std::vector<int> xs;
    std::vector<int> ys;
    std::int64_t perimeter = 0;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.at(x, y)) continue;
            xs.push_back(x);
            ys.push_back(y);
            const bool exposed = x == 0 || x == mask.width - 1 || y == 0 ||
                                 y == mask.height - 1 || !mask.at(x - 1, y) ||
                                 !mask.at(x + 1, y) || !mask.at(x, y - 1) || !mask.at(x, y + 1);
            if (exposed) ++perimeter;
        }
    }
    if (xs.empty()) return s;

    const double n = static_cast<double>(xs.size());
    double sum_x = 0.0, sum_y = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sum_x += xs[i];
        sum_y += ys[i];
    }
    s.centroid_x = sum_x / n;
    s.centroid_y = sum_y / n;
    double var_x = 0.0, var_y = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        var_x += (xs[i] - s.centroid_x) * (xs[i] - s.centroid_x);
        var_y += (ys[i] - s.centroid_y) * (ys[i] - s.centroid_y);
    }
    s.std_x = std::sqrt(var_x / n);
    s.std_y = std::sqrt(var_y / n);

    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    s.min_x = xs.front();
    s.max_x = xs.back();
    s.min_y = ys.front();
    s.max_y = ys.back();
    s.q1_x = nearest_rank(xs, 0.25);
    s.med_x = nearest_rank(xs, 0.5);
    s.q3_x = nearest_rank(xs, 0.75);
    s.q1_y = nearest_rank(ys, 0.25);
    s.med_y = nearest_rank(ys, 0.5);
    s.q3_y = nearest_rank(ys, 0.75);
    s.area = n;
    s.perimeter = static_cast<double>(perimeter);
    s.present = 1.0;
    return s;
}

FeatureVector extract_features(const Heatmap& hm) {
    FeatureVector v{};
    std::size_t i = 0;
    for (const auto count : intensity_histogram(hm.grid)) v[i++] = static_cast<double>(count);
    for (const ZoneMask& mask : threshold_zones(hm.grid))
        for (const double value : zone_stats(mask).flatten()) v[i++] = value;
    v[i++] = hm.lac;
    return v;
}

FeatureScaler fit_scaler(std::span<const FeatureVector> vectors) {
    if (vectors.size() < 2)
        throw std::invalid_argument("fit_scaler: need at least 2 training vectors, got " +
                                    std::to_string(vectors.size()));
    FeatureScaler scaler;
    scaler.mean.assign(kFeatureCount, 0.0);
    scaler.stddev.assign(kFeatureCount, 0.0);
    const double n = static_cast<double>(vectors.size());
    for (const FeatureVector& v : vectors)
        for (int j = 0; j < kFeatureCount; ++j) scaler.mean[j] += v[j];
    for (double& m : scaler.mean) m /= n;
    for (const FeatureVector& v : vectors)
        for (int j = 0; j < kFeatureCount; ++j) {
            const double d = v[j] - scaler.mean[j];
            scaler.stddev[j] += d * d;
        }
    for (double& sd : scaler.stddev) {
        sd = std::sqrt(sd / n);
        if (sd == 0.0) sd = 1.0;
    }
    return scaler;
}

FeatureVector apply_scaler(const FeatureScaler& scaler, const FeatureVector& v) {
    FeatureVector out;
    for (int j = 0; j < kFeatureCount; ++j) out[j] = (v[j] - scaler.mean[j]) / scaler.stddev[j];
    return out;
}

FeatureVector standardize_per_vector(const FeatureVector& v) {
    double mean = 0.0;
    for (const double x : v) mean += x;
    mean /= kFeatureCount;
    double var = 0.0;
    for (const double x : v) var += (x - mean) * (x - mean);
    double sd = std::sqrt(var / kFeatureCount);
    if (sd == 0.0) sd = 1.0;
    FeatureVector out;
    for (int j = 0; j < kFeatureCount; ++j) out[j] = (v[j] - mean) / sd;
    return out;
}

}  // namespace gazedist
