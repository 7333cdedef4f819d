#pragma once

#include "afb/acquisition/mask.hpp"
#include "afb/numerics/grid.hpp"

#include <cstdint>
#include <vector>

namespace afb {

struct PhantomSpec
{
  std::size_t size = 64;
  std::size_t coils = 8;
  double noise_sigma = 0.0; // per real/imag component, k-space units
  std::uint64_t seed = 0;

  void validate() const;
};

// Receive-coil sensitivities and, after simulation, the coil k-space planes
// (FFT-native order, zero at every dropped location).
struct CoilSet
{
  std::vector<ComplexGrid> maps;
  std::vector<ComplexGrid> kspace;

  std::size_t coils() const { return maps.size(); }
  void validate() const;
};

// Modified Shepp-Logan head (ten ellipses), real, nonnegative, unit peak.
ComplexGrid make_phantom(PhantomSpec const &spec);

/* Gaussian-lobe sensitivities centered at equispaced angles on a ring,
 * each with a linear phase along its own direction, then normalized so the
 * sum of squares is exactly one at every pixel. */
CoilSet make_coil_maps(std::size_t size, std::size_t coils);

// kspace_c = mask * (fft2(S_c * truth) + n), n complex Gaussian with
// independent N(0, sigma^2) real and imaginary parts.
CoilSet simulate_acquisition(ComplexGrid const &truth, CoilSet const &coilset, SamplingMask const &mask,
                             double noise_sigma, std::uint64_t seed);

} // namespace afb
