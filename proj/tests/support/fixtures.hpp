#pragma once

#include "afb/acquisition/mask.hpp"
#include "afb/acquisition/phantom.hpp"
#include "afb/solver/config.hpp"
#include "afb/solver/trace.hpp"

#include <string>

namespace fixture {

// Phantom truth plus a simulated acquisition through a generated mask.
struct Task
{
  afb::ComplexGrid truth;
  afb::SamplingMask mask;
  afb::CoilSet coils;
};

Task phantom_task(std::size_t size, std::size_t coils, afb::MaskKind kind, double ratio, double noise_sigma,
                  std::uint64_t seed);

/* Checks the trace against the solver's control-flow laws:
 * descent at fixed eta, the tau update law and bounds, eta = eta0 sigma^m,
 * exactly one branch per iteration, and the stopping rule. Returns an empty
 * string when every law holds, else a description of the first violation. */
std::string trace_violation(afb::SolverTrace const &trace, afb::SolverConfig const &cfg);

} // namespace fixture
