#pragma once

#include "afb/acquisition/mask.hpp"
#include "afb/acquisition/phantom.hpp"
#include "afb/numerics/grid.hpp"

#include <vector>

namespace afb {

using CoilKspace = std::vector<ComplexGrid>;

/* SENSE encoding A x = { mask * fft2(S_c * x) }_c together with the
 * measurements y. Immutable once built; safe to share across threads. */
class ForwardModel
{
public:
  // Measurements are taken from coils.kspace, which must be zero wherever
  // the mask drops a sample. Without measurements y is all zeros.
  ForwardModel(SamplingMask const &mask, CoilSet const &coils);

  std::size_t height() const { return weights_.height(); }
  std::size_t width() const { return weights_.width(); }
  std::size_t coils() const { return maps_.size(); }

  CoilKspace const &measurements() const { return measurements_; }
  std::vector<ComplexGrid> const &maps() const { return maps_; }
  RealGrid const &native_mask() const { return weights_; }

  CoilKspace forward(ComplexGrid const &x) const;
  ComplexGrid adjoint(CoilKspace const &ksp) const;

  // f(x) = 1/2 sum_c ||A_c x - y_c||^2
  double fidelity(ComplexGrid const &x) const;
  // grad f(x) = A^H (A x - y)
  ComplexGrid grad_fidelity(ComplexGrid const &x) const;

  // A^H y, the zero-filled reconstruction.
  ComplexGrid zero_filled() const { return adjoint(measurements_); }

  void require_image_shape(ComplexGrid const &x, char const *what) const;

private:
  RealGrid weights_;
  std::vector<ComplexGrid> maps_;
  CoilKspace measurements_;
};

/* Largest eigenvalue of A^H A by power iteration from a fixed pseudo-random
 * start; returns the final Rayleigh quotient. */
double lipschitz_estimate(ForwardModel const &model, int iterations = 50);

} // namespace afb
