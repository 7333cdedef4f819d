#include "afb/solver/reconstruct.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace afb {

namespace {

// An iterate with its cached fidelity value and (unweighted) regularizer
// value at smoothing level eta.
struct Point
{
  ComplexGrid x;
  double f = 0.0;
  double r = 0.0;
  double eta = 0.0;
};

class Solver
{
public:
  Solver(Objective const &obj, SolverConfig const &cfg)
    : obj_{obj}
    , cfg_{cfg}
    , lambda_{obj.reg.weight}
  {
  }

  ReconResult run(ComplexGrid x0)
  {
    double eta = cfg_.eta0;
    double tau = cfg_.tau0;

    IterationRecord init;
    Point x = evaluate(std::move(x0), eta, init, "initial estimate");
    ComplexGrid grad_f = obj_.model.grad_fidelity(x.x);
    require_finite(grad_f, "fidelity gradient at the initial estimate");
    std::optional<ComplexGrid> grad_r; // at (x, eta) when valid

    trace_.stop = StopReason::MaxIterations;
    for (std::size_t k = 0; k < cfg_.max_iters; ++k) {
      auto const start = std::chrono::steady_clock::now();
      auto const &step = cfg_.schedule.at(k);
      IterationRecord rec;
      rec.k = k;
      rec.eta = eta;
      rec.tau = tau;

      if (x.eta != eta) {
        // f is independent of eta; only the regularizer needs refreshing
        x.r = reg_value(x.x, eta);
        x.eta = eta;
        ++rec.objective_evals;
      }
      double const phi_x = phi(x);
      require_finite(phi_x, "objective at x", k);
      rec.phi_start = phi_x;

      // fidelity step, then regularization step
      ComplexGrid u = axpy(x.x, -step.alpha, grad_f);
      if (lambda_ != 0.0) {
        auto const gz = obj_.reg.gradient(u, eta);
        ++rec.gradient_evals;
        u = axpy(u, -step.beta * lambda_, gz);
      }
      Point cand = evaluate(std::move(u), eta, rec, "regularization candidate", k);

      Point xbar = [&] {
        if (phi(cand) <= phi_x - 0.5 * cfg_.delta * distance_sq(cand.x, x.x)) {
          rec.sufficient_decrease_taken = true;
          return std::move(cand);
        }
        rec.fallback_taken = true;
        if (!grad_r && lambda_ != 0.0) {
          grad_r = obj_.reg.gradient(x.x, eta);
          ++rec.gradient_evals;
        }
        ComplexGrid const grad_phi = lambda_ != 0.0 ? axpy(grad_f, lambda_, *grad_r) : grad_f;
        return backtrack(x, phi_x, grad_phi, step.gamma, eta, rec, k);
      }();

      // extrapolation
      ComplexGrid y_img(x.x.height(), x.x.width());
      for (std::size_t i = 0; i < y_img.size(); ++i) {
        y_img[i] = xbar.x[i] + tau * (xbar.x[i] - x.x[i]);
      }
      Point y = evaluate(std::move(y_img), eta, rec, "extrapolated candidate", k);
      rec.extrapolation_accepted = phi(y) <= phi(xbar);
      Point next = rec.extrapolation_accepted ? std::move(y) : std::move(xbar);
      tau = rec.extrapolation_accepted ? std::min(tau / cfg_.mu, 1.0) : cfg_.mu * tau;

      ComplexGrid next_grad_f = obj_.model.grad_fidelity(next.x);
      ComplexGrid next_grad_phi = next_grad_f;
      std::optional<ComplexGrid> next_grad_r;
      if (lambda_ != 0.0) {
        next_grad_r = obj_.reg.gradient(next.x, eta);
        next_grad_phi = axpy(next_grad_f, lambda_, *next_grad_r);
      }
      ++rec.gradient_evals;
      double const gnorm = norm(next_grad_phi);
      require_finite(gnorm, "objective gradient at the new iterate", k);

      rec.phi = phi(next);
      rec.grad_norm = gnorm;
      rec.tau_next = tau;
      rec.eta_decayed = gnorm < cfg_.sigma * eta;
      if (rec.eta_decayed) {
        eta = cfg_.sigma * eta;
        next_grad_r.reset();
      }
      rec.eta_next = eta;
      rec.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      trace_.records.push_back(rec);

      x = std::move(next);
      grad_f = std::move(next_grad_f);
      grad_r = std::move(next_grad_r);

      if (eta < cfg_.epsilon) {
        trace_.stop = StopReason::EtaBelowEpsilon;
        break;
      }
    }
    return ReconResult{std::move(x.x), std::move(trace_)};
  }

private:
  double phi(Point const &p) const { return lambda_ == 0.0 ? p.f : p.f + lambda_ * p.r; }

  double reg_value(ComplexGrid const &x, double eta) const
  {
    return lambda_ == 0.0 ? 0.0 : obj_.reg.value(x, eta);
  }

  Point evaluate(ComplexGrid x, double eta, IterationRecord &rec, char const *what,
                 std::optional<std::size_t> k = std::nullopt)
  {
    Point p{std::move(x), 0.0, 0.0, eta};
    p.f = obj_.model.fidelity(p.x);
    p.r = reg_value(p.x, eta);
    ++rec.objective_evals;
    require_finite(phi(p), what, k);
    return p;
  }

  Point backtrack(Point const &x, double phi_x, ComplexGrid const &grad_phi, double gamma, double eta,
                  IterationRecord &rec, std::size_t k)
  {
    for (int halvings = 0; halvings <= kMaxBacktracks; ++halvings) {
      Point trial = evaluate(axpy(x.x, -gamma, grad_phi), eta, rec, "fallback gradient step", k);
      if (phi(trial) <= phi_x - 0.5 * cfg_.delta * distance_sq(trial.x, x.x)) {
        rec.backtracks = halvings;
        return trial;
      }
      gamma *= 0.5;
    }
    rec.backtracks = kMaxBacktracks;
    rec.backtrack_exhausted = true;
    return x;
  }

  static double distance_sq(ComplexGrid const &a, ComplexGrid const &b)
  {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      sum += std::norm(a[i] - b[i]);
    }
    return sum;
  }

  void require_finite(double v, char const *what, std::optional<std::size_t> k = std::nullopt)
  {
    if (!std::isfinite(v)) {
      fail(what, k);
    }
  }

  void require_finite(ComplexGrid const &g, char const *what)
  {
    if (!all_finite(g)) {
      fail(what, std::nullopt);
    }
  }

  [[noreturn]] void fail(char const *what, std::optional<std::size_t> k)
  {
    trace_.stop = StopReason::NumericalFailure;
    std::string msg = std::string("non-finite value in ") + what;
    if (k) {
      msg += " at iteration " + std::to_string(*k);
    }
    throw NumericalFailure(msg, std::move(trace_));
  }

  Objective const &obj_;
  SolverConfig const &cfg_;
  double lambda_;
  SolverTrace trace_;
};

} // namespace

ReconResult reconstruct(Objective const &obj, SolverConfig const &cfg, std::optional<ComplexGrid> const &x0)
{
  cfg.validate();
  obj.reg.validate();
  if (cfg.schedule.empty() && cfg.max_iters > 0) {
    throw ParameterError("solver schedule is empty; fill it with with_default_steps()");
  }
  ComplexGrid start = x0 ? *x0 : obj.model.zero_filled();
  obj.model.require_image_shape(start, "reconstruct (x0)");
  return Solver(obj, cfg).run(std::move(start));
}

} // namespace afb
