#include "afb/solver/trace.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace afb {

std::string IterationRecord::branch() const
{
  std::string out = sufficient_decrease_taken ? "sufficient_decrease" : "fallback";
  out += extrapolation_accepted ? "+accepted" : "+rejected";
  return out;
}

std::string to_string(StopReason reason)
{
  switch (reason) {
  case StopReason::EtaBelowEpsilon: return "eta_below_epsilon";
  case StopReason::MaxIterations: return "max_iterations";
  case StopReason::NumericalFailure: return "numerical_failure";
  }
  return "max_iterations";
}

void write_trace_csv(std::ostream &os, SolverTrace const &trace, bool timing)
{
  fmt::print(os, "{}\n", kTraceCsvHeader);
  for (auto const &r : trace.records) {
    fmt::print(os, "{},{},{},{},{},{},{},{}\n", r.k, r.phi, r.grad_norm, r.eta, r.tau, r.branch(),
               r.eta_decayed ? 1 : 0, timing ? r.ms : 0.0);
  }
}

} // namespace afb
