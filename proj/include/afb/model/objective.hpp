#pragma once

#include "afb/model/forward_model.hpp"
#include "afb/model/regularizer.hpp"

#include <optional>

namespace afb {

// lambda_r = 1e-3 * ||y||_2, the default weight relative to the data scale.
double default_regularizer_weight(ForwardModel const &model);

// Regularizer choice whose weight, when absent, is resolved per model.
struct RegularizerSpec
{
  RegularizerFamily family = RegularizerFamily::SmoothedTV;
  std::optional<double> weight;

  Regularizer resolve(ForwardModel const &model) const;
};

// phi_eta(x) = f(x) + lambda_r * r_eta(x)
struct Objective
{
  ForwardModel model;
  Regularizer reg;

  double phi(ComplexGrid const &x, double eta) const;
  ComplexGrid grad_phi(ComplexGrid const &x, double eta) const;
};

} // namespace afb
