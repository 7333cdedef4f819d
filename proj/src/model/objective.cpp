#include "afb/model/objective.hpp"

#include <cmath>
#include <string>

namespace afb {

namespace {

void require_eta(double eta)
{
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw ParameterError("smoothing parameter eta must be positive and finite, got " + std::to_string(eta));
  }
}

} // namespace

double default_regularizer_weight(ForwardModel const &model)
{
  double sum = 0.0;
  for (auto const &k : model.measurements()) {
    sum += norm_sq(k);
  }
  return 1e-3 * std::sqrt(sum);
}

Regularizer RegularizerSpec::resolve(ForwardModel const &model) const
{
  Regularizer reg{family, weight ? *weight : default_regularizer_weight(model)};
  reg.validate();
  return reg;
}

double Objective::phi(ComplexGrid const &x, double eta) const
{
  require_eta(eta);
  double const f = model.fidelity(x);
  if (reg.weight == 0.0) {
    return f;
  }
  return f + reg.weight * reg.value(x, eta);
}

ComplexGrid Objective::grad_phi(ComplexGrid const &x, double eta) const
{
  require_eta(eta);
  ComplexGrid g = model.grad_fidelity(x);
  if (reg.weight == 0.0) {
    return g;
  }
  auto const gr = reg.gradient(x, eta);
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] += reg.weight * gr[i];
  }
  return g;
}

} // namespace afb
