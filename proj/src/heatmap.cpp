#include "gazedist/heatmap.hpp"

#include <algorithm>
#include <cmath>

#include "gazedist/kernels.hpp"

namespace gazedist {

namespace {

// Lattice offsets of cells within `radius` of the origin, row by row.
struct DiscStencil {
    int radius;
    std::vector<int> half_width;  // per dy in [-radius, radius]
};

DiscStencil make_disc(int radius) {
    DiscStencil d{radius, {}};
    d.half_width.reserve(2 * radius + 1);
    for (int dy = -radius; dy <= radius; ++dy) {
        const int w = static_cast<int>(std::floor(std::sqrt(
            static_cast<double>(radius) * radius - static_cast<double>(dy) * dy)));
        d.half_width.push_back(w);
    }
    return d;
}

std::vector<double> gaussian_taps(double sigma, int kernel_size) {
    std::vector<double> taps(kernel_size);
    const int c = kernel_size / 2;
    double total = 0.0;
    for (int k = 0; k < kernel_size; ++k) {
        const double d = k - c;
        taps[k] = std::exp(-d * d / (2.0 * sigma * sigma));
        total += taps[k];
    }
    for (double& t : taps) t /= total;
    return taps;
}

}  // namespace

std::vector<HitWindow> window_hits(std::span<const WallHit> hits, TimeRange session_span,
                                   const HeatmapConfig& cfg) {
    std::vector<HitWindow> out;
    const auto window_ms = static_cast<std::int64_t>(std::llround(cfg.window_s * 1000.0));
    const auto stride_ms = static_cast<std::int64_t>(std::llround(cfg.stride_s * 1000.0));
    if (session_span.end_ms <= session_span.start_ms) return out;
    for (std::int64_t t = session_span.start_ms; t + window_ms <= session_span.end_ms;
         t += stride_ms) {
        HitWindow w;
        w.range = {t, t + window_ms};
        const auto lo = std::lower_bound(hits.begin(), hits.end(), t,
                                         [](const WallHit& h, std::int64_t v) {
                                             return h.timestamp_ms < v;
                                         });
        const auto hi = std::lower_bound(lo, hits.end(), t + window_ms,
                                         [](const WallHit& h, std::int64_t v) {
                                             return h.timestamp_ms < v;
                                         });
        w.hits.assign(lo, hi);
        out.push_back(std::move(w));
    }
    return out;
}

Grid stamp_accumulate(std::span<const WallHit> hits, int grid_width, int grid_height,
                      int fov_radius_px) {
    Grid grid(grid_width, grid_height);
    const DiscStencil disc = make_disc(fov_radius_px);
    for (const WallHit& hit : hits) {
        const int cx = std::clamp(static_cast<int>(std::llround(hit.px)), 0, grid_width - 1);
        const int cy = std::clamp(static_cast<int>(std::llround(hit.py)), 0, grid_height - 1);
        for (int dy = -disc.radius; dy <= disc.radius; ++dy) {
            const int y = cy + dy;
            if (y < 0 || y >= grid_height) continue;
            const int w = disc.half_width[dy + disc.radius];
            const int x0 = std::max(cx - w, 0);
            const int x1 = std::min(cx + w, grid_width - 1);
            double* row = grid.row(y);
            for (int x = x0; x <= x1; ++x) row[x] += 1.0;
        }
    }
    return grid;
}

void normalize_opacity(Grid& grid) {
    if (grid.size() == 0) return;
    const auto& k = kernels::dispatch();
    const double m = k.max(grid.data(), grid.size());
    if (m > 0.0) k.scale(1.0 / m, grid.data(), grid.size());
}

void gaussian_blur(Grid& grid, double sigma, int kernel_size) {
    if (grid.size() == 0) return;
    const auto& k = kernels::dispatch();
    const int w = grid.width();
    const int h = grid.height();
    const int r = kernel_size / 2;
    const std::vector<double> taps = gaussian_taps(sigma, kernel_size);
    const double pre_max = k.max(grid.data(), grid.size());

    // Horizontal pass with edge replication via a padded row buffer.
    Grid horiz(w, h);
    std::vector<double> padded(static_cast<std::size_t>(w) + 2 * r);
    for (int y = 0; y < h; ++y) {
        const double* src = grid.row(y);
        for (int i = 0; i < r; ++i) padded[i] = src[0];
        std::copy(src, src + w, padded.begin() + r);
        for (int i = 0; i < r; ++i) padded[r + w + i] = src[w - 1];
        k.conv1d_valid(padded.data(), horiz.row(y), w, taps.data(), taps.size());
    }

    // Vertical pass as a weighted sum of rows, clamped at the borders.
    for (int y = 0; y < h; ++y) {
        double* dst = grid.row(y);
        std::fill(dst, dst + w, 0.0);
        for (int t = 0; t < kernel_size; ++t) {
            const int sy = std::clamp(y + t - r, 0, h - 1);
            k.axpy(taps[t], horiz.row(sy), dst, w);
        }
    }

    if (pre_max == 1.0) {
        const double post_max = k.max(grid.data(), grid.size());
        if (post_max > 0.0) k.scale(1.0 / post_max, grid.data(), grid.size());
    }
}

Heatmap build_heatmap_from_hits(std::span<const WallHit> hits, TimeRange window,
                                const VirtualWall& wall, const HeatmapConfig& cfg) {
    Heatmap hm;
    hm.window_start_ms = window.start_ms;
    hm.window_end_ms = window.end_ms;
    hm.grid = stamp_accumulate(hits, wall.grid_width, wall.grid_height, cfg.fov_radius_px);
    normalize_opacity(hm.grid);
    gaussian_blur(hm.grid, cfg.blur_sigma_px, cfg.blur_kernel_px);
    const double expected = cfg.window_s * 1000.0 / cfg.sample_period_ms;
    hm.lac = expected > 0.0 ? std::min(1.0, static_cast<double>(hits.size()) / expected) : 0.0;
    return hm;
}

Heatmap build_heatmap(std::span<const GazeSample> samples, TimeRange window,
                      const VirtualWall& wall, const HeatmapConfig& cfg) {
    std::vector<WallHit> hits;
    hits.reserve(samples.size());
    for (const GazeSample& s : samples) {
        if (s.timestamp_ms < window.start_ms || s.timestamp_ms >= window.end_ms) continue;
        if (const auto hit = project_sample(s, wall)) hits.push_back(*hit);
    }
    return build_heatmap_from_hits(hits, window, wall, cfg);
}

}  // namespace gazedist
