#include "afb/solver/config.hpp"

#include <cmath>
#include <string>

namespace afb {

namespace {

void require_open_unit(double v, char const *name)
{
  if (!(v > 0.0 && v < 1.0)) {
    throw ParameterError(std::string(name) + " must lie in (0, 1), got " + std::to_string(v));
  }
}

void require_positive(double v, char const *name)
{
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ParameterError(std::string(name) + " must be positive and finite, got " + std::to_string(v));
  }
}

} // namespace

PhaseStep const &PhaseSchedule::at(std::size_t k) const
{
  if (steps.empty()) {
    throw ParameterError("phase schedule is empty");
  }
  return steps[std::min(k, steps.size() - 1)];
}

void PhaseSchedule::validate() const
{
  for (std::size_t k = 0; k < steps.size(); ++k) {
    auto const &s = steps[k];
    std::string const at = "schedule[" + std::to_string(k) + "].";
    require_positive(s.alpha, (at + "alpha").c_str());
    require_positive(s.beta, (at + "beta").c_str());
    require_positive(s.gamma, (at + "gamma").c_str());
  }
}

void SolverConfig::validate() const
{
  require_positive(eta0, "eta0");
  require_open_unit(tau0, "tau0");
  require_open_unit(sigma, "sigma");
  require_open_unit(mu, "mu");
  require_open_unit(delta, "delta");
  require_positive(epsilon, "epsilon");
  schedule.validate();
}

PhaseStep default_steps(ForwardModel const &model, Regularizer const &reg, double eta0)
{
  double const lipschitz = lipschitz_estimate(model);
  double const alpha = lipschitz > 0.0 ? 1.0 / lipschitz : 1.0;
  double const beta = reg.weight > 0.0 ? std::min(eta0 / (8.0 * reg.weight), 1.0) : 1.0;
  return PhaseStep{alpha, beta, alpha};
}

SolverConfig default_config(ForwardModel const &model, Regularizer const &reg)
{
  SolverConfig cfg;
  cfg.schedule.steps = {default_steps(model, reg, cfg.eta0)};
  return cfg;
}

SolverConfig with_default_steps(SolverConfig cfg, ForwardModel const &model, Regularizer const &reg)
{
  if (cfg.schedule.empty()) {
    cfg.schedule.steps = {default_steps(model, reg, cfg.eta0)};
  }
  return cfg;
}

} // namespace afb
