#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace afb {

// One iteration of the adaptive forward-backward loop. Values are recorded
// at the smoothing level eta used during the iteration.
struct IterationRecord
{
  std::size_t k = 0;
  double phi_start = 0.0; // phi_eta(x^k)
  double phi = 0.0;       // phi_eta(x^{k+1})
  double grad_norm = 0.0; // ||grad phi_eta(x^{k+1})||
  double eta = 0.0;       // eta^k
  double eta_next = 0.0;  // eta^{k+1}
  double tau = 0.0;       // tau^k
  double tau_next = 0.0;  // tau^{k+1}

  bool sufficient_decrease_taken = false;
  bool fallback_taken = false;
  bool extrapolation_accepted = false;
  bool eta_decayed = false;

  int backtracks = 0; // gamma halvings in the fallback branch
  bool backtrack_exhausted = false;
  int objective_evals = 0;
  int gradient_evals = 0;
  double ms = 0.0;

  // "sufficient_decrease" or "fallback", then "+accepted" or "+rejected".
  std::string branch() const;
};

enum class StopReason
{
  EtaBelowEpsilon,
  MaxIterations,
  NumericalFailure,
};

std::string to_string(StopReason reason);

struct SolverTrace
{
  std::vector<IterationRecord> records;
  StopReason stop = StopReason::MaxIterations;

  std::size_t iterations() const { return records.size(); }
};

inline constexpr char const *kTraceCsvHeader = "k,phi,grad_norm,eta,tau,branch,eta_decayed,ms";

// Columns k, phi, grad_norm, eta (eta^k), tau (tau^k), branch,
// eta_decayed (0/1), ms. With timing off ms is written as 0 so reruns are
// byte-identical.
void write_trace_csv(std::ostream &os, SolverTrace const &trace, bool timing);

} // namespace afb
