#pragma once

#include "afb/acquisition/mask.hpp"
#include "afb/acquisition/phantom.hpp"
#include "afb/model/objective.hpp"
#include "afb/solver/config.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace afb {

enum class AdaptMetric
{
  Psnr,   // higher is better
  Ssim,   // higher is better
  RelErr, // lower is better
};

std::string to_string(AdaptMetric metric);
AdaptMetric parse_adapt_metric(std::string_view name);

// One measurement bundle plus the image its reconstruction is scored against.
struct TaskSpec
{
  SamplingMask mask;
  CoilSet coils; // maps + kspace
  ComplexGrid reference;
};

struct ScoreEntry
{
  std::size_t candidate = 0;
  std::size_t task = 0;
  double score = 0.0;
  bool failed = false;
};

struct AdaptResult
{
  std::size_t best_index = 0;
  SolverConfig best;
  std::vector<ScoreEntry> table; // candidate-major, one entry per (candidate, task)
  std::vector<double> means;     // per candidate
};

// Score assigned to a failed reconstruction: the worst possible value.
double failure_score(AdaptMetric metric);

/* Per-task hyperparameter search: reconstructs every task with every
 * candidate, averages the metric over tasks and returns the best candidate
 * (lowest index on ties). The regularizer weight, when not given, is
 * resolved per task. Candidates with an empty schedule get the default
 * steps of each task's model. A numerical failure marks the entry failed
 * and gives the candidate the failure score as its mean. Pairs are spread
 * over `threads` workers; the result does not depend on scheduling. */
AdaptResult adapt(std::span<TaskSpec const> tasks, std::span<SolverConfig const> candidates,
                  RegularizerSpec const &reg, AdaptMetric metric, unsigned threads = 1);

} // namespace afb
