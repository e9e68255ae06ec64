#pragma once

#include <array>
#include <cstdint>
#include <filesystem>

#include "gazedist/grid.hpp"

namespace gazedist {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    bool operator==(const Rgb&) const = default;
};

/// Fixed 256-entry jet lookup: 0 -> blue, 1 -> red.
const std::array<Rgb, 256>& jet_lut();

Rgb map_intensity(double intensity);

/// Writes a binary PPM (P6). Byte-deterministic for identical grids.
void render_ppm(const std::filesystem::path& path, const Grid& grid);

}  // namespace gazedist
