#include "afb/acquisition/mask.hpp"

#include "afb/numerics/random.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace afb {

std::string to_string(MaskKind kind)
{
  switch (kind) {
  case MaskKind::UniformCartesian: return "uniform-cartesian";
  case MaskKind::RandomCartesian: return "random-cartesian";
  case MaskKind::Radial: return "radial";
  case MaskKind::External: return "external";
  }
  return "external";
}

MaskKind parse_mask_kind(std::string_view name)
{
  if (name == "uniform-cartesian" || name == "uniform") return MaskKind::UniformCartesian;
  if (name == "random-cartesian" || name == "random") return MaskKind::RandomCartesian;
  if (name == "radial") return MaskKind::Radial;
  if (name == "external") return MaskKind::External;
  throw ParameterError("unknown mask kind '" + std::string(name) + "'");
}

std::size_t SamplingMask::kept_count() const
{
  std::size_t n = 0;
  for (auto v : kept.values()) {
    n += v ? 1 : 0;
  }
  return n;
}

double SamplingMask::ratio_measured() const
{
  return static_cast<double>(kept_count()) / static_cast<double>(kept.size());
}

RealGrid SamplingMask::native_weights() const
{
  RealGrid centered(height(), width());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    centered[i] = kept[i] ? 1.0 : 0.0;
  }
  return ifftshift(centered);
}

std::vector<std::size_t> SamplingMask::kept_rows() const
{
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < height(); ++r) {
    for (std::size_t c = 0; c < width(); ++c) {
      if (kept(r, c)) {
        rows.push_back(r);
        break;
      }
    }
  }
  return rows;
}

std::size_t default_acs_lines(std::size_t size) { return size / 8; }

std::vector<std::pair<std::size_t, std::size_t>> rasterize_spoke(std::size_t size, double angle)
{
  long const n = static_cast<long>(size);
  long const center = n / 2;
  double const dx = std::cos(angle);
  double const dy = std::sin(angle);
  bool const along_cols = std::abs(dx) >= std::abs(dy);
  double const slope = along_cols ? dy / dx : dx / dy;

  std::vector<std::pair<std::size_t, std::size_t>> pixels;
  pixels.reserve(size);
  for (long j = -center; j < n - center; ++j) {
    long const minor = center + std::lround(static_cast<double>(j) * slope);
    long const major = center + j;
    if (minor < 0 || minor >= n) {
      continue;
    }
    long const row = along_cols ? minor : major;
    long const col = along_cols ? major : minor;
    pixels.emplace_back(static_cast<std::size_t>(row), static_cast<std::size_t>(col));
  }
  return pixels;
}

namespace {

void keep_row(SamplingMask &mask, std::size_t row)
{
  for (std::size_t c = 0; c < mask.width(); ++c) {
    mask.kept(row, c) = 1;
  }
}

SamplingMask cartesian(MaskKind kind, std::size_t size, double target_ratio, std::size_t acs_lines,
                       std::uint64_t seed)
{
  if (acs_lines >= size) {
    throw ParameterError("acs_lines (" + std::to_string(acs_lines) + ") must be smaller than size (" +
                         std::to_string(size) + ")");
  }
  auto const rows = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(target_ratio * size)));
  if (acs_lines > rows) {
    throw ParameterError("ratio " + std::to_string(target_ratio) + " unreachable: the ACS band alone keeps " +
                         std::to_string(acs_lines) + " of " + std::to_string(size) + " rows");
  }

  SamplingMask mask{Grid<std::uint8_t>(size, size, 0), kind, seed, acs_lines, 0};
  std::size_t const acs_start = size / 2 - acs_lines / 2;
  std::vector<std::size_t> free_rows;
  for (std::size_t r = 0; r < size; ++r) {
    if (r >= acs_start && r < acs_start + acs_lines) {
      keep_row(mask, r);
    } else {
      free_rows.push_back(r);
    }
  }

  std::size_t const extra = rows - acs_lines;
  if (extra == 0) {
    return mask;
  }
  if (kind == MaskKind::UniformCartesian) {
    // evenly spaced picks among the non-ACS rows
    double const stride = static_cast<double>(free_rows.size()) / static_cast<double>(extra);
    for (std::size_t i = 0; i < extra; ++i) {
      auto const idx = static_cast<std::size_t>((static_cast<double>(i) + 0.5) * stride);
      keep_row(mask, free_rows[std::min(idx, free_rows.size() - 1)]);
    }
  } else {
    // partial Fisher-Yates: the first `extra` slots become a uniform sample
    Rng rng(seed);
    for (std::size_t i = 0; i < extra; ++i) {
      std::size_t const j = i + static_cast<std::size_t>(rng.below(free_rows.size() - i));
      std::swap(free_rows[i], free_rows[j]);
      keep_row(mask, free_rows[i]);
    }
  }
  return mask;
}

Grid<std::uint8_t> radial_pattern(std::size_t size, std::size_t spokes)
{
  Grid<std::uint8_t> kept(size, size, 0);
  for (std::size_t s = 0; s < spokes; ++s) {
    double const angle = std::numbers::pi * static_cast<double>(s) / static_cast<double>(spokes);
    for (auto [r, c] : rasterize_spoke(size, angle)) {
      kept(r, c) = 1;
    }
  }
  return kept;
}

SamplingMask radial(std::size_t size, double target_ratio)
{
  auto ratio_of = [&](Grid<std::uint8_t> const &g) {
    return static_cast<double>(std::accumulate(g.values().begin(), g.values().end(), std::size_t{0})) /
           static_cast<double>(g.size());
  };

  // Coverage is nearly monotone in the spoke count; scan until well past the
  // target and keep the closest (fewest spokes on ties).
  std::size_t best_spokes = 1;
  double best_gap = std::abs(ratio_of(radial_pattern(size, 1)) - target_ratio);
  for (std::size_t s = 2; s <= 4 * size; ++s) {
    double const ratio = ratio_of(radial_pattern(size, s));
    double const gap = std::abs(ratio - target_ratio);
    if (gap < best_gap) {
      best_gap = gap;
      best_spokes = s;
    }
    if (ratio > target_ratio + 0.05) {
      break;
    }
  }
  return SamplingMask{radial_pattern(size, best_spokes), MaskKind::Radial, 0, 0, best_spokes};
}

} // namespace

SamplingMask make_mask(MaskKind kind, std::size_t size, double target_ratio, std::size_t acs_lines,
                       std::uint64_t seed)
{
  if (!(target_ratio > 0.0 && target_ratio <= 1.0)) {
    throw ParameterError("target ratio must lie in (0, 1], got " + std::to_string(target_ratio));
  }
  if (size == 0) {
    throw ParameterError("mask size must be positive");
  }
  if (kind == MaskKind::External) {
    throw ParameterError("cannot generate a mask of kind 'external'");
  }
  if (target_ratio == 1.0) {
    bool const cartesian_kind = kind != MaskKind::Radial;
    return SamplingMask{Grid<std::uint8_t>(size, size, 1), kind, seed, cartesian_kind ? size : 0, 0};
  }
  if (kind == MaskKind::Radial) {
    return radial(size, target_ratio);
  }
  return cartesian(kind, size, target_ratio, acs_lines, seed);
}

ComplexGrid apply_mask(SamplingMask const &mask, ComplexGrid const &native_ksp)
{
  if (mask.height() != native_ksp.height() || mask.width() != native_ksp.width()) {
    throw DimensionError("apply_mask: mask " + mask.kept.shape_string() + " vs k-space " +
                         native_ksp.shape_string());
  }
  auto const weights = mask.native_weights();
  ComplexGrid out = native_ksp;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] *= weights[i];
  }
  return out;
}

} // namespace afb
