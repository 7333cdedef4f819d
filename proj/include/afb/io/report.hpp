#pragma once

#include "afb/metrics/metrics.hpp"
#include "afb/solver/trace.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace afb::io {

// One cell of a mask-ratio sweep.
struct SweepRow
{
  std::string mask_kind;
  double target_ratio = 0.0;
  double measured_ratio = 0.0;
  std::uint64_t seed = 0;
  double psnr_db = 0.0;
  double rel_err = 0.0;
  double ssim = 0.0;
  std::size_t iters = 0;
  double wall_ms = 0.0;
};

inline constexpr char const *kReportCsvHeader =
  "mask_kind,target_ratio,measured_ratio,seed,psnr_db,rel_err,ssim,iters,wall_ms";

/* Row order: mask kind (uniform-cartesian, random-cartesian, radial, then
 * any other name alphabetically), then descending target ratio, then
 * ascending seed. */
void sort_report_rows(std::vector<SweepRow> &rows);

// Shortest round-trip decimal; infinities as "inf"/"-inf", NaN as "nan".
std::string format_number(double v);

// Sorts a copy of rows and writes header + rows atomically.
void write_report_csv(std::filesystem::path const &path, std::vector<SweepRow> rows);

void write_trace_csv(std::filesystem::path const &path, SolverTrace const &trace, bool timing);

// {"psnr_db": ..., "ssim": ..., "rel_err": ...}; infinite PSNR as "inf".
std::string metric_report_json(MetricReport const &report);
MetricReport parse_metric_report(std::string const &json_text);

} // namespace afb::io
