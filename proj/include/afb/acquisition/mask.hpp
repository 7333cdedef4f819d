#pragma once

#include "afb/numerics/grid.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace afb {

enum class MaskKind
{
  UniformCartesian,
  RandomCartesian,
  Radial,
  External, // read back from a container; generator parameters unknown
};

std::string to_string(MaskKind kind);

// Accepts the canonical names plus the short forms "uniform", "random".
MaskKind parse_mask_kind(std::string_view name);

/* Binary k-space selection in centered coordinates (DC at row H/2, col W/2).
 * Cartesian kinds keep whole rows; radial keeps rasterized spokes. */
struct SamplingMask
{
  Grid<std::uint8_t> kept;
  MaskKind kind = MaskKind::External;
  std::uint64_t seed = 0;
  std::size_t acs_lines = 0;
  std::size_t spokes = 0;

  std::size_t height() const { return kept.height(); }
  std::size_t width() const { return kept.width(); }
  std::size_t kept_count() const;
  double ratio_measured() const;

  // 0/1 weights in FFT-native order, ready to multiply k-space.
  RealGrid native_weights() const;

  // Rows with at least one kept sample, ascending (centered indices).
  std::vector<std::size_t> kept_rows() const;
};

std::size_t default_acs_lines(std::size_t size);

SamplingMask make_mask(MaskKind kind, std::size_t size, double target_ratio, std::size_t acs_lines,
                       std::uint64_t seed);

// Pixels of one spoke through the center at the given angle (radians),
// as (row, col) pairs in centered coordinates, one per major-axis step.
std::vector<std::pair<std::size_t, std::size_t>> rasterize_spoke(std::size_t size, double angle);

// Projects FFT-native k-space onto the mask; idempotent.
ComplexGrid apply_mask(SamplingMask const &mask, ComplexGrid const &native_ksp);

} // namespace afb
