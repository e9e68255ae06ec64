#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gazedist/grid.hpp"
#include "gazedist/heatmap.hpp"

namespace gazedist {

inline constexpr int kHistogramBins = 6;
inline constexpr int kZoneCount = 4;
inline constexpr int kZoneStatCount = 17;
inline constexpr int kFeatureCount = kHistogramBins + kZoneCount * kZoneStatCount + 1;  // 75

/// Geometric statistics of one thresholded zone. All-zero with present = 0
/// when the zone is empty.
struct ZoneStats {
    double std_x = 0.0, std_y = 0.0;
    double centroid_x = 0.0, centroid_y = 0.0;
    double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
    double q1_x = 0.0, med_x = 0.0, q3_x = 0.0;
    double q1_y = 0.0, med_y = 0.0, q3_y = 0.0;
    double area = 0.0;       // cell count
    double perimeter = 0.0;  // boundary cell count (4-neighborhood)
    double present = 0.0;

    std::array<double, kZoneStatCount> flatten() const;
};

/// Binary threshold mask over a heatmap grid.
struct ZoneMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> cells;  // row-major, 0/1

    bool at(int x, int y) const { return cells[static_cast<std::size_t>(y) * width + x] != 0; }
};

/// Fixed 75-value descriptor. Layout: 6 histogram counts, then zone 1..4
/// (each: std_x, std_y, centroid_x, centroid_y, min_x, max_x, min_y, max_y,
/// q1_x, med_x, q3_x, q1_y, med_y, q3_y, area, perimeter, present), then lac.
using FeatureVector = std::array<double, kFeatureCount>;

/// Dataset standardizer: per-feature mean and standard deviation.
/// Zero-variance features keep std 1 so they scale to 0.
struct FeatureScaler {
    std::vector<double> mean;
    std::vector<double> stddev;
};

/// Equal-width six-bin histogram of cell intensities over [0,1];
/// the last bin is closed at 1.0. Counts sum to width*height.
std::array<std::int64_t, kHistogramBins> intensity_histogram(const Grid& grid);

/// Nested masks at thresholds 0.2, 0.4, 0.6, 0.8 (intensity >= threshold).
std::array<ZoneMask, kZoneCount> threshold_zones(const Grid& grid);

/// Statistics over the (x, y) coordinates of mask cells. Quartiles use the
/// nearest-rank method; perimeter counts cells with an exposed 4-neighbor
/// (the grid edge counts as outside).
ZoneStats zone_stats(const ZoneMask& mask);

FeatureVector extract_features(const Heatmap& hm);

/// Fit on >= 2 vectors; throws std::invalid_argument otherwise.
FeatureScaler fit_scaler(std::span<const FeatureVector> vectors);

FeatureVector apply_scaler(const FeatureScaler& scaler, const FeatureVector& v);

/// Standardize a single vector against its own mean/std. Kept behind a flag
/// on the CLI; dataset-level scaling is the default.
FeatureVector standardize_per_vector(const FeatureVector& v);

}  // namespace gazedist
