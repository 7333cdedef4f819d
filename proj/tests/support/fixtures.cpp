#include "fixtures.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace fixture {

Task phantom_task(std::size_t size, std::size_t coils, afb::MaskKind kind, double ratio, double noise_sigma,
                  std::uint64_t seed)
{
  auto truth = afb::make_phantom(afb::PhantomSpec{size, coils, noise_sigma, seed});
  std::size_t const rows = std::max<std::size_t>(1, std::size_t(std::lround(ratio * double(size))));
  std::size_t const acs = kind == afb::MaskKind::Radial ? 0 : std::min(size / 8, rows / 2);
  auto mask = afb::make_mask(kind, size, ratio, acs, seed);
  auto acq = afb::simulate_acquisition(truth, afb::make_coil_maps(size, coils), mask, noise_sigma, seed);
  return Task{std::move(truth), std::move(mask), std::move(acq)};
}

std::string trace_violation(afb::SolverTrace const &trace, afb::SolverConfig const &cfg)
{
  auto const &recs = trace.records;
  double eta = cfg.eta0;
  double tau = cfg.tau0;
  int decays = 0;
  for (std::size_t k = 0; k < recs.size(); ++k) {
    auto const &r = recs[k];
    if (r.k != k) {
      return fmt::format("record {} has k = {}", k, r.k);
    }
    if (r.sufficient_decrease_taken == r.fallback_taken) {
      return fmt::format("iteration {}: not exactly one x-bar branch", k);
    }

    // (c) eta law
    if (r.eta != eta || std::abs(eta - cfg.eta0 * std::pow(cfg.sigma, decays)) > 1e-12 * eta) {
      return fmt::format("iteration {}: eta {} after {} decays", k, r.eta, decays);
    }
    double const expect_eta = r.eta_decayed ? cfg.sigma * eta : eta;
    if (r.eta_next != expect_eta) {
      return fmt::format("iteration {}: eta_next {} expected {}", k, r.eta_next, expect_eta);
    }
    if (r.eta_decayed != (r.grad_norm < cfg.sigma * eta)) {
      return fmt::format("iteration {}: decay flag disagrees with gradient norm test", k);
    }

    // (b) tau law
    if (r.tau != tau || !(tau > 0.0 && tau <= 1.0)) {
      return fmt::format("iteration {}: tau {} expected {}", k, r.tau, tau);
    }
    double const expect_tau = r.extrapolation_accepted ? std::min(tau / cfg.mu, 1.0) : cfg.mu * tau;
    if (r.tau_next != expect_tau || !(r.tau_next > 0.0 && r.tau_next <= 1.0)) {
      return fmt::format("iteration {}: tau_next {} expected {}", k, r.tau_next, expect_tau);
    }

    // (a) descent at fixed eta
    if (!(r.phi <= r.phi_start)) {
      return fmt::format("iteration {}: phi rose from {} to {}", k, r.phi_start, r.phi);
    }
    if (k > 0 && !recs[k - 1].eta_decayed && r.phi_start != recs[k - 1].phi) {
      return fmt::format("iteration {}: phi_start {} differs from previous phi {}", k, r.phi_start, recs[k - 1].phi);
    }

    // (d) no early stop
    if (k + 1 < recs.size() && r.eta_next < cfg.epsilon) {
      return fmt::format("iteration {}: eta fell below epsilon but the loop continued", k);
    }

    eta = r.eta_next;
    tau = r.tau_next;
    decays += r.eta_decayed;
  }

  // (d) stopping rule
  bool const below = !recs.empty() && recs.back().eta_next < cfg.epsilon;
  switch (trace.stop) {
  case afb::StopReason::EtaBelowEpsilon:
    if (!below) {
      return "stopped on eta without eta < epsilon";
    }
    break;
  case afb::StopReason::MaxIterations:
    if (below || recs.size() != cfg.max_iters) {
      return fmt::format("stopped on iterations after {} of {} (eta below epsilon: {})", recs.size(),
                         cfg.max_iters, below);
    }
    break;
  case afb::StopReason::NumericalFailure:
    return "trace ended in numerical failure";
  }
  return {};
}

} // namespace fixture
