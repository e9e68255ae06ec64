#include "gazedist/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace gazedist {

namespace {

// Piecewise-linear jet ramp: blue, cyan, yellow, red.
std::uint8_t ramp(double v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

std::array<Rgb, 256> build_jet() {
    std::array<Rgb, 256> lut;
    for (int i = 0; i < 256; ++i) {
        const double t = i / 255.0;
        const double r = std::clamp(1.5 - std::abs(4.0 * t - 3.0), 0.0, 1.0);
        const double g = std::clamp(1.5 - std::abs(4.0 * t - 2.0), 0.0, 1.0);
        const double b = std::clamp(1.5 - std::abs(4.0 * t - 1.0), 0.0, 1.0);
        lut[i] = {ramp(r), ramp(g), ramp(b)};
    }
    return lut;
}

}  // namespace

const std::array<Rgb, 256>& jet_lut() {
    static const std::array<Rgb, 256> lut = build_jet();
    return lut;
}

Rgb map_intensity(double intensity) {
    const int i = static_cast<int>(std::lround(std::clamp(intensity, 0.0, 1.0) * 255.0));
    return jet_lut()[i];
}

void render_ppm(const std::filesystem::path& path, const Grid& grid) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out << "P6\n" << grid.width() << ' ' << grid.height() << "\n255\n";
    std::vector<unsigned char> row(static_cast<std::size_t>(grid.width()) * 3);
    for (int y = 0; y < grid.height(); ++y) {
        for (int x = 0; x < grid.width(); ++x) {
            const Rgb c = map_intensity(grid.at(x, y));
            row[3 * x] = c.r;
            row[3 * x + 1] = c.g;
            row[3 * x + 2] = c.b;
        }
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row.size()));
    }
    if (!out) throw std::runtime_error(path.string() + ": write failed");
}

}  // namespace gazedist
