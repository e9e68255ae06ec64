#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace gazedist {

/// Row-major 2D grid of doubles, row 0 at the top.
class Grid {
public:
    Grid() = default;
    Grid(int width, int height, double fill = 0.0)
        : width_(width), height_(height),
          cells_(static_cast<std::size_t>(width) * height, fill) {}

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return cells_.size(); }

    double& at(int x, int y) { return cells_[static_cast<std::size_t>(y) * width_ + x]; }
    double at(int x, int y) const { return cells_[static_cast<std::size_t>(y) * width_ + x]; }

    double* row(int y) { return cells_.data() + static_cast<std::size_t>(y) * width_; }
    const double* row(int y) const { return cells_.data() + static_cast<std::size_t>(y) * width_; }

    double* data() { return cells_.data(); }
    const double* data() const { return cells_.data(); }

    bool operator==(const Grid&) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> cells_;
};

}  // namespace gazedist
