#pragma once

#include "afb/acquisition/mask.hpp"
#include "afb/acquisition/phantom.hpp"
#include "afb/model/objective.hpp"
#include "afb/solver/config.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace afb::cli {

inline constexpr int kConfigVersion = 1;

// One sweep cell; acs is resolved by resolve_acs when absent.
struct MaskSpec
{
  MaskKind kind = MaskKind::UniformCartesian;
  double ratio = 0.0;
  std::optional<std::size_t> acs;
  std::uint64_t seed = 0;
};

/* Versioned experiment description:
 *   {"version": 1,
 *    "phantom": {"size", "coils", "noise_sigma", "seed"},
 *    "mask": {"kind", "ratio" | "ratios", "acs", "seed"}  or  "masks": [...],
 *    "solver": {"eta0", "tau0", "sigma", "mu", "delta", "epsilon",
 *               "max_iters", "schedule": [{"alpha", "beta", "gamma"}]},
 *    "regularizer": {"family", "lambda_r"},
 *    "outputs": {"directory"}}
 * Every section is optional and falls back to library defaults; a mask
 * entry with "ratios" expands to one cell per ratio. */
struct ExperimentConfig
{
  PhantomSpec phantom;
  std::vector<MaskSpec> masks;
  SolverConfig solver;
  RegularizerSpec regularizer;
  std::filesystem::path output_directory = ".";
};

// Both throw ParameterError naming the offending field; unknown keys are
// rejected and all values are range-checked.
ExperimentConfig parse_experiment(nlohmann::json const &doc);
ExperimentConfig load_experiment(std::filesystem::path const &path);

nlohmann::json to_json(SolverConfig const &cfg);
nlohmann::json to_json(RegularizerSpec const &spec);
SolverConfig solver_from_json(nlohmann::json const &obj, std::string const &where = "solver");
RegularizerSpec regularizer_from_json(nlohmann::json const &obj);

// Reads a whole file and parses it as JSON; parse errors become ParameterError.
nlohmann::json read_json_file(std::filesystem::path const &path);

/* Explicit ACS is used as given. Otherwise Cartesian masks get
 * min(size / 8, R / 2) with R = round(ratio * size) kept rows, so low
 * ratios stay reachable; radial masks have none. */
std::size_t resolve_acs(MaskKind kind, std::size_t size, double ratio, std::optional<std::size_t> acs);

} // namespace afb::cli
