#pragma once

#include "afb/numerics/grid.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace afb::io {

struct Window
{
  double min = 0.0;
  double max = 1.0;
};

// Linear map [min, max] -> [0, 255], clamped, rounded half away from zero.
// Without a window, [0, peak] is used (peak = largest |value|, 1 if zero).
std::vector<std::uint8_t> window_to_bytes(RealGrid const &grid, std::optional<Window> window = std::nullopt);

// 8-bit grayscale PNG, one byte per pixel, rows top to bottom.
void export_png(std::filesystem::path const &path, RealGrid const &grid, std::optional<Window> window = std::nullopt);

} // namespace afb::io
