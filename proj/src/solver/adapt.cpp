#include "afb/solver/adapt.hpp"

#include "afb/metrics/metrics.hpp"
#include "afb/solver/reconstruct.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

namespace afb {

std::string to_string(AdaptMetric metric)
{
  switch (metric) {
  case AdaptMetric::Psnr: return "psnr";
  case AdaptMetric::Ssim: return "ssim";
  case AdaptMetric::RelErr: return "relerr";
  }
  return "psnr";
}

AdaptMetric parse_adapt_metric(std::string_view name)
{
  if (name == "psnr") return AdaptMetric::Psnr;
  if (name == "ssim") return AdaptMetric::Ssim;
  if (name == "relerr" || name == "rel_err") return AdaptMetric::RelErr;
  throw ParameterError("unknown metric '" + std::string(name) + "' (expected psnr, ssim or relerr)");
}

double failure_score(AdaptMetric metric)
{
  double const inf = std::numeric_limits<double>::infinity();
  return metric == AdaptMetric::RelErr ? inf : -inf;
}

namespace {

double score(AdaptMetric metric, ComplexGrid const &reference, ComplexGrid const &recon)
{
  auto const ref = magnitude(reference);
  auto const test = magnitude(recon);
  switch (metric) {
  case AdaptMetric::Psnr: return psnr(ref, test);
  case AdaptMetric::Ssim: return ssim(ref, test);
  case AdaptMetric::RelErr: return relative_error(ref, test);
  }
  return 0.0;
}

bool better(AdaptMetric metric, double a, double b)
{
  return metric == AdaptMetric::RelErr ? a < b : a > b;
}

} // namespace

AdaptResult adapt(std::span<TaskSpec const> tasks, std::span<SolverConfig const> candidates,
                  RegularizerSpec const &reg, AdaptMetric metric, unsigned threads)
{
  if (tasks.empty()) {
    throw ParameterError("adapt needs at least one task");
  }
  if (candidates.empty()) {
    throw ParameterError("adapt needs at least one candidate");
  }
  for (auto const &c : candidates) {
    c.validate();
  }

  std::vector<Objective> objectives;
  objectives.reserve(tasks.size());
  for (auto const &t : tasks) {
    t.coils.validate();
    ForwardModel model(t.mask, t.coils);
    auto const resolved = reg.resolve(model);
    objectives.push_back(Objective{std::move(model), resolved});
    objectives.back().model.require_image_shape(t.reference, "adapt (reference)");
  }

  std::size_t const n_tasks = tasks.size();
  std::size_t const n_pairs = candidates.size() * n_tasks;
  std::vector<ScoreEntry> table(n_pairs);
  std::vector<std::exception_ptr> errors(n_pairs);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n_pairs; i = next++) {
      std::size_t const c = i / n_tasks, t = i % n_tasks;
      ScoreEntry entry{c, t, 0.0, false};
      try {
        auto const &obj = objectives[t];
        auto const cfg = with_default_steps(candidates[c], obj.model, obj.reg);
        auto const result = reconstruct(obj, cfg);
        entry.score = score(metric, tasks[t].reference, result.image);
      } catch (NumericalFailure const &) {
        entry.failed = true;
        entry.score = failure_score(metric);
      } catch (...) {
        errors[i] = std::current_exception();
      }
      table[i] = entry;
    }
  };
  unsigned const n_threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n_pairs)));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < n_threads; ++i) {
      pool.emplace_back(worker);
    }
  }

  for (auto const &e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }

  AdaptResult out;
  out.table = std::move(table);
  out.means.assign(candidates.size(), 0.0);
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    double sum = 0.0;
    bool failed = false;
    for (std::size_t t = 0; t < n_tasks; ++t) {
      auto const &e = out.table[c * n_tasks + t];
      failed = failed || e.failed;
      sum += e.score;
    }
    out.means[c] = failed ? failure_score(metric) : sum / static_cast<double>(n_tasks);
  }
  out.best_index = 0;
  for (std::size_t c = 1; c < candidates.size(); ++c) {
    if (better(metric, out.means[c], out.means[out.best_index])) {
      out.best_index = c;
    }
  }
  out.best = candidates[out.best_index];
  return out;
}

} // namespace afb
