#pragma once

#include "afb/errors.hpp"
#include "afb/model/objective.hpp"
#include "afb/solver/config.hpp"
#include "afb/solver/trace.hpp"

#include <optional>

namespace afb {

// A non-finite objective or gradient was produced; carries everything the
// solver logged up to that point.
struct NumericalFailure : Error
{
  NumericalFailure(std::string const &what, SolverTrace partial)
    : Error(what)
    , trace{std::move(partial)}
  {
  }

  SolverTrace trace;
};

struct ReconResult
{
  ComplexGrid image;
  SolverTrace trace;
};

inline constexpr int kMaxBacktracks = 30;

/* Adaptive forward-backward reconstruction with extrapolation.
 *
 * Per iteration k, with steps (alpha, beta, gamma) from the schedule:
 *   z    = x - alpha grad f(x)
 *   u    = z - beta lambda_r grad r_eta(z)
 *   xbar = u                      if phi(u) <= phi(x) - delta/2 ||u - x||^2
 *        = x - gamma' grad phi(x) otherwise, gamma' = gamma 2^-j with the
 *                                 smallest j <= 30 meeting the same test
 *                                 (xbar = x if none does)
 *   y    = xbar + tau (xbar - x)
 *   x+   = y, tau <- min(tau/mu, 1)   if phi(y) <= phi(xbar)
 *        = xbar, tau <- mu tau        otherwise
 *   eta  <- sigma eta                 if ||grad phi(x+)|| < sigma eta
 * and the loop stops once eta < epsilon or after max_iters iterations.
 *
 * x0 defaults to the zero-filled reconstruction A^H y. cfg.schedule must be
 * non-empty (see with_default_steps). Throws NumericalFailure on a
 * non-finite objective or gradient. */
ReconResult reconstruct(Objective const &obj, SolverConfig const &cfg,
                        std::optional<ComplexGrid> const &x0 = std::nullopt);

} // namespace afb
