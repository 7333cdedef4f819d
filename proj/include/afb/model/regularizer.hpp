#pragma once

#include "afb/numerics/grid.hpp"

#include <string>
#include <string_view>

namespace afb {

enum class RegularizerFamily
{
  SmoothedTV,    // sum_p sqrt(|Dh x|^2 + |Dv x|^2 + eta^2) - eta
  SmoothedLogTV, // sum_p 2 eta log((eta + psi_p) / (2 eta)), psi_p as above
};

std::string to_string(RegularizerFamily family);
RegularizerFamily parse_regularizer_family(std::string_view name);

/* Smoothed isotropic total variation and its nonconvex log variant, with
 * forward differences under periodic boundary.
 *
 * Both families vanish on constant images and are nonnegative. The log
 * family is scaled by 2 eta so that for small differences it agrees with
 * the TV family to second order (|g|^2 / (2 eta)), while growing only
 * logarithmically for large differences. */
struct Regularizer
{
  RegularizerFamily family = RegularizerFamily::SmoothedTV;
  double weight = 1e-3; // lambda_r

  void validate() const;

  // r_eta(x), unweighted.
  double value(ComplexGrid const &x, double eta) const;
  // grad r_eta(x), unweighted, w.r.t. the real inner product Re<., .>.
  ComplexGrid gradient(ComplexGrid const &x, double eta) const;
};

// Isotropic (unsmoothed) total variation with the same difference stencil.
double total_variation(ComplexGrid const &x);

} // namespace afb
