#include "afb/io/report.hpp"

#include "afb/acquisition/mask.hpp"
#include "afb/errors.hpp"
#include "afb/io/container.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace afb::io {

namespace {

int kind_rank(std::string const &kind)
{
  if (kind == "uniform-cartesian") return 0;
  if (kind == "random-cartesian") return 1;
  if (kind == "radial") return 2;
  return 3;
}

} // namespace

void sort_report_rows(std::vector<SweepRow> &rows)
{
  std::stable_sort(rows.begin(), rows.end(), [](SweepRow const &a, SweepRow const &b) {
    int const ra = kind_rank(a.mask_kind), rb = kind_rank(b.mask_kind);
    if (ra != rb) return ra < rb;
    if (a.mask_kind != b.mask_kind) return a.mask_kind < b.mask_kind;
    if (a.target_ratio != b.target_ratio) return a.target_ratio > b.target_ratio;
    return a.seed < b.seed;
  });
}

std::string format_number(double v)
{
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{}", v);
}

void write_report_csv(std::filesystem::path const &path, std::vector<SweepRow> rows)
{
  sort_report_rows(rows);
  std::string out = std::string(kReportCsvHeader) + "\n";
  for (auto const &r : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", r.mask_kind, format_number(r.target_ratio),
                       format_number(r.measured_ratio), r.seed, format_number(r.psnr_db), format_number(r.rel_err),
                       format_number(r.ssim), r.iters, format_number(r.wall_ms));
  }
  write_file_atomic(path, out);
}

void write_trace_csv(std::filesystem::path const &path, SolverTrace const &trace, bool timing)
{
  std::ostringstream os;
  afb::write_trace_csv(os, trace, timing);
  write_file_atomic(path, os.str());
}

std::string metric_report_json(MetricReport const &report)
{
  nlohmann::ordered_json j;
  if (std::isinf(report.psnr_db)) {
    j["psnr_db"] = format_number(report.psnr_db);
  } else {
    j["psnr_db"] = report.psnr_db;
  }
  j["ssim"] = report.ssim;
  j["rel_err"] = report.rel_err;
  return j.dump();
}

MetricReport parse_metric_report(std::string const &json_text)
{
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (nlohmann::json::parse_error const &e) {
    throw FormatError(std::string("metric report is not valid JSON: ") + e.what());
  }
  auto number = [&](char const *key) {
    if (!j.contains(key)) {
      throw FormatError(std::string("metric report is missing '") + key + "'");
    }
    auto const &v = j.at(key);
    if (v.is_number()) return v.get<double>();
    if (v.is_string() && v.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
    throw FormatError(std::string("metric report field '") + key + "' is not a number");
  };
  return MetricReport{number("psnr_db"), number("ssim"), number("rel_err")};
}

} // namespace afb::io
