#pragma once

#include "afb/cli/experiment.hpp"
#include "afb/errors.hpp"
#include "afb/io/report.hpp"
#include "afb/numerics/grid.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace afb::cli {

enum ExitCode : int
{
  kExitOk = 0,
  kExitFailure = 1,   // generation or runtime failure
  kExitUsage = 2,     // bad flags, config or inconsistent inputs
  kExitNumerical = 3, // solver produced a non-finite value
};

// Invalid flags, configs or input combinations; maps to kExitUsage.
struct UsageError : Error
{
  using Error::Error;
};

struct SweepCell
{
  io::SweepRow row;
  std::optional<ComplexGrid> image; // absent when the cell failed
  std::string error;
};

struct SweepOutcome
{
  ComplexGrid truth;
  std::vector<SweepCell> cells; // in config order
};

/* One phantom and coil set shared by every cell; per cell a mask, a noisy
 * acquisition (same noise seed everywhere) and a reconstruction with the
 * same solver settings. Metrics compare the float32-rounded truth and
 * reconstruction, the precision at which images are stored. Failed cells
 * carry NaN metrics. wall_ms is 0 unless timing is set. */
SweepOutcome run_sweep(ExperimentConfig const &cfg, unsigned threads = 1, bool timing = false);

// Entry point of the afb tool. args excludes the program name.
int run(std::vector<std::string> const &args, std::ostream &out, std::ostream &err);

} // namespace afb::cli
