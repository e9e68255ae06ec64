#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gazedist/geometry.hpp"
#include "gazedist/grid.hpp"

namespace gazedist {

struct HeatmapConfig {
    double window_s = 30.0;
    double stride_s = 1.0;
    int fov_radius_px = 15;
    double blur_sigma_px = 5.0;
    int blur_kernel_px = 21;  // odd
    int sample_period_ms = 50;
};

/// One window's normalized gaze-dispersion map plus looking-ahead confidence.
struct Heatmap {
    Grid grid;
    std::int64_t window_start_ms = 0;
    std::int64_t window_end_ms = 0;
    double lac = 0.0;  // fraction of expected samples that hit the wall
    std::string driver_id;
    std::optional<std::string> ground_truth;  // "neutral" | "distracted"
};

struct TimeRange {
    std::int64_t start_ms = 0;
    std::int64_t end_ms = 0;
};

struct HitWindow {
    TimeRange range;
    std::vector<WallHit> hits;
};

/// Slide [t, t+window) over the session span by stride, dropping windows
/// that extend past the end. Hits must be time-sorted.
std::vector<HitWindow> window_hits(std::span<const WallHit> hits, TimeRange session_span,
                                   const HeatmapConfig& cfg);

/// Increment every cell whose center lies within fov_radius_px of the
/// rounded hit location; circles clip at the grid borders.
Grid stamp_accumulate(std::span<const WallHit> hits, int grid_width, int grid_height,
                      int fov_radius_px);

/// Divide by the grid maximum when positive; all-zero grids pass through.
void normalize_opacity(Grid& grid);

/// Separable Gaussian blur, kernel normalized to sum 1, edge replication.
/// When the input maximum is exactly 1 the output is rescaled back to max 1.
void gaussian_blur(Grid& grid, double sigma, int kernel_size);

/// Full pipeline for one window of samples: project, stamp, normalize,
/// blur, renormalize; lac = projected count / expected count.
Heatmap build_heatmap(std::span<const GazeSample> samples, TimeRange window,
                      const VirtualWall& wall, const HeatmapConfig& cfg);

/// Same pipeline when wall hits have already been projected.
Heatmap build_heatmap_from_hits(std::span<const WallHit> hits, TimeRange window,
                                const VirtualWall& wall, const HeatmapConfig& cfg);

}  // namespace gazedist
