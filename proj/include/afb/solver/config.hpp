#pragma once

#include "afb/model/forward_model.hpp"
#include "afb/model/regularizer.hpp"

#include <cstddef>
#include <vector>

namespace afb {

// Step sizes of one phase (iteration): fidelity step alpha, regularization
// step beta, fallback gradient step gamma (initial value before backtracking).
struct PhaseStep
{
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;

  bool operator==(PhaseStep const &) const = default;
};

// Entry k drives iteration k; iterations past the end reuse the last entry.
struct PhaseSchedule
{
  std::vector<PhaseStep> steps;

  PhaseStep const &at(std::size_t k) const;
  bool empty() const { return steps.empty(); }
  void validate() const;

  bool operator==(PhaseSchedule const &) const = default;
};

struct SolverConfig
{
  double eta0 = 1.0;
  double tau0 = 0.5;
  double sigma = 0.5;
  double mu = 0.5;
  double delta = 0.1;
  double epsilon = 1e-3;
  std::size_t max_iters = 200;
  PhaseSchedule schedule;

  // Range checks on the scalars; the schedule is checked only when present
  // (an empty schedule means "derive from the model", see with_default_steps).
  void validate() const;

  bool operator==(SolverConfig const &) const = default;
};

/* alpha = 1/L (power iteration on A^H A), beta = eta0 / (8 lambda_r) capped
 * at 1 (|D| <= sqrt(8) for periodic forward differences), gamma = alpha. */
PhaseStep default_steps(ForwardModel const &model, Regularizer const &reg, double eta0);

SolverConfig default_config(ForwardModel const &model, Regularizer const &reg);

// Copy of cfg with a one-entry default schedule if cfg has none.
SolverConfig with_default_steps(SolverConfig cfg, ForwardModel const &model, Regularizer const &reg);

} // namespace afb
