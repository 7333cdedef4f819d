#include "afb/acquisition/phantom.hpp"

#include "afb/numerics/fft.hpp"
#include "afb/numerics/random.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace afb {

namespace {

struct Ellipse
{
  double intensity;
  double semi_x, semi_y;
  double x0, y0;
  double degrees;
};

// Modified Shepp-Logan (Toft), better contrast than the original.
constexpr std::array<Ellipse, 10> kEllipses{{
  {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
  {-0.8, 0.6624, 0.8740, 0.0, -0.0184, 0.0},
  {-0.2, 0.1100, 0.3100, 0.22, 0.0, -18.0},
  {-0.2, 0.1600, 0.4100, -0.22, 0.0, 18.0},
  {0.1, 0.2100, 0.2500, 0.0, 0.35, 0.0},
  {0.1, 0.0460, 0.0460, 0.0, 0.1, 0.0},
  {0.1, 0.0460, 0.0460, 0.0, -0.1, 0.0},
  {0.1, 0.0460, 0.0230, -0.08, -0.605, 0.0},
  {0.1, 0.0230, 0.0230, 0.0, -0.606, 0.0},
  {0.1, 0.0230, 0.0460, 0.06, -0.605, 0.0},
}};

// Pixel-center coordinates in [-1, 1], symmetric about the grid center, y up.
double coord_x(std::size_t col, std::size_t n) { return (2.0 * col + 1.0 - n) / n; }
double coord_y(std::size_t row, std::size_t n) { return (n - 2.0 * row - 1.0) / n; }

} // namespace

void PhantomSpec::validate() const
{
  if (size < 8) {
    throw ParameterError("phantom size must be at least 8, got " + std::to_string(size));
  }
  if (coils < 1) {
    throw ParameterError("phantom needs at least one coil");
  }
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw ParameterError("noise_sigma must be finite and nonnegative");
  }
}

void CoilSet::validate() const
{
  if (maps.empty()) {
    throw ParameterError("coil set has no sensitivity maps");
  }
  for (auto const &m : maps) {
    maps.front().require_same_shape(m, "coil maps");
  }
  if (!kspace.empty()) {
    if (kspace.size() != maps.size()) {
      throw DimensionError("coil set has " + std::to_string(maps.size()) + " maps but " +
                           std::to_string(kspace.size()) + " k-space planes");
    }
    for (auto const &k : kspace) {
      maps.front().require_same_shape(k, "coil k-space");
    }
  }
}

ComplexGrid make_phantom(PhantomSpec const &spec)
{
  spec.validate();
  std::size_t const n = spec.size;
  RealGrid acc(n, n, 0.0);
  for (auto const &e : kEllipses) {
    double const phi = e.degrees * std::numbers::pi / 180.0;
    double const c = std::cos(phi), s = std::sin(phi);
    for (std::size_t r = 0; r < n; ++r) {
      double const y = coord_y(r, n) - e.y0;
      for (std::size_t col = 0; col < n; ++col) {
        double const x = coord_x(col, n) - e.x0;
        double const u = (x * c + y * s) / e.semi_x;
        double const v = (-x * s + y * c) / e.semi_y;
        if (u * u + v * v <= 1.0) {
          acc(r, col) += e.intensity;
        }
      }
    }
  }

  // Overlapping +/- intensities leave rounding residue around zero.
  double peak = 0.0;
  for (auto &v : acc.values()) {
    if (v < 1e-12) {
      v = 0.0;
    }
    peak = std::max(peak, v);
  }
  ComplexGrid out(n, n);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = Cx{acc[i] / peak, 0.0};
  }
  return out;
}

CoilSet make_coil_maps(std::size_t size, std::size_t coils)
{
  if (coils < 1) {
    throw ParameterError("at least one coil is required");
  }
  if (size < 1) {
    throw ParameterError("coil map size must be positive");
  }
  constexpr double ring_radius = 0.7;
  constexpr double lobe_width = 0.6;
  constexpr double phase_slope = std::numbers::pi / 2;

  CoilSet set;
  set.maps.reserve(coils);
  for (std::size_t k = 0; k < coils; ++k) {
    double const theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(coils);
    double const dx = std::cos(theta), dy = std::sin(theta);
    ComplexGrid map(size, size);
    for (std::size_t r = 0; r < size; ++r) {
      double const y = coord_y(r, size);
      for (std::size_t c = 0; c < size; ++c) {
        double const x = coord_x(c, size);
        double const ex = x - ring_radius * dx, ey = y - ring_radius * dy;
        double const amp = std::exp(-(ex * ex + ey * ey) / (2.0 * lobe_width * lobe_width));
        map(r, c) = std::polar(amp, phase_slope * (x * dx + y * dy));
      }
    }
    set.maps.push_back(std::move(map));
  }

  for (std::size_t i = 0; i < size * size; ++i) {
    double sos = 0.0;
    for (auto const &m : set.maps) {
      sos += std::norm(m[i]);
    }
    double const inv = 1.0 / std::sqrt(sos);
    for (auto &m : set.maps) {
      m[i] *= inv;
    }
  }
  return set;
}

CoilSet simulate_acquisition(ComplexGrid const &truth, CoilSet const &coilset, SamplingMask const &mask,
                             double noise_sigma, std::uint64_t seed)
{
  coilset.validate();
  truth.require_same_shape(coilset.maps.front(), "simulate_acquisition (truth vs maps)");
  if (mask.height() != truth.height() || mask.width() != truth.width()) {
    throw DimensionError("simulate_acquisition: mask " + mask.kept.shape_string() + " vs image " +
                         truth.shape_string());
  }
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw ParameterError("noise_sigma must be finite and nonnegative");
  }

  auto const weights = mask.native_weights();
  Rng rng(seed);
  CoilSet out{coilset.maps, {}};
  out.kspace.reserve(coilset.coils());
  for (auto const &map : coilset.maps) {
    ComplexGrid weighted = truth;
    for (std::size_t i = 0; i < weighted.size(); ++i) {
      weighted[i] *= map[i];
    }
    ComplexGrid ksp = fft2(weighted);
    for (std::size_t i = 0; i < ksp.size(); ++i) {
      if (noise_sigma > 0.0) {
        double const re = rng.normal();
        double const im = rng.normal();
        ksp[i] += noise_sigma * Cx{re, im};
      }
      ksp[i] = weights[i] != 0.0 ? ksp[i] : Cx{0.0, 0.0};
    }
    out.kspace.push_back(std::move(ksp));
  }
  return out;
}

} // namespace afb
