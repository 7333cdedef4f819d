#include "afb/cli/commands.hpp"

#include "afb/acquisition/mask.hpp"
#include "afb/acquisition/phantom.hpp"
#include "afb/io/container.hpp"
#include "afb/io/png.hpp"
#include "afb/metrics/metrics.hpp"
#include "afb/model/forward_model.hpp"
#include "afb/solver/adapt.hpp"
#include "afb/solver/reconstruct.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <ostream>
#include <thread>

namespace afb::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Turns validation failures of flags and inputs into exit code 2.
template <class Fn>
auto as_usage(Fn &&fn)
{
  try {
    return fn();
  } catch (UsageError const &) {
    throw;
  } catch (Error const &e) {
    throw UsageError(e.what());
  }
}

std::string dims_string(std::vector<std::size_t> const &dims)
{
  return fmt::format("[{}]", fmt::join(dims, ","));
}

// Finite numbers stay numbers; infinities and NaN become "inf"/"-inf"/"nan".
ordered_json json_number(double v)
{
  return std::isfinite(v) ? ordered_json(v) : ordered_json(io::format_number(v));
}

void print(std::ostream &out, ordered_json const &summary) { out << summary.dump() << '\n'; }

io::LoadedGrid load_input(std::string const &flag, fs::path const &base)
{
  return as_usage([&] {
    try {
      return io::load_grid(base);
    } catch (Error const &e) {
      throw UsageError(flag + ": " + e.what());
    }
  });
}

void require_plane_shape(std::string const &what, io::LoadedGrid const &g, std::string const &ref_what,
                         io::LoadedGrid const &ref)
{
  if (g.header.height() != ref.header.height() || g.header.width() != ref.header.width()) {
    throw UsageError(fmt::format("shape mismatch: {} {} vs {} {}", what, dims_string(g.header.dims), ref_what,
                                 dims_string(ref.header.dims)));
  }
}

void require_planar(std::string const &what, io::LoadedGrid const &g)
{
  if (g.header.dims.size() != 2) {
    throw UsageError(fmt::format("{} must be a single plane, got dims {}", what, dims_string(g.header.dims)));
  }
}

SamplingMask to_mask(std::string const &flag, fs::path const &base)
{
  return as_usage([&] {
    try {
      return io::load_mask(base);
    } catch (Error const &e) {
      throw UsageError(flag + ": " + e.what());
    }
  });
}

void ensure_parent(fs::path const &path)
{
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
}

fs::path with_suffix(fs::path base, std::string const &suffix)
{
  base += suffix;
  return base;
}

RealGrid magnitude_of(ComplexGrid const &x) { return magnitude(x); }

// Rounds to the on-disk float32 precision, flushing components below one
// float32 ulp of the image peak to zero (solver roundoff in the background).
// Images are written in this form and metrics are taken on it, so `afb eval`
// on the written containers reproduces them.
ComplexGrid as_stored(ComplexGrid x)
{
  double top = 0.0;
  for (auto const &v : x.values()) {
    top = std::max({top, std::abs(v.real()), std::abs(v.imag())});
  }
  double const floor = top * std::numeric_limits<float>::epsilon() / 2;
  auto round = [floor](double v) { return std::abs(v) < floor ? 0.0 : double(static_cast<float>(v)); };
  for (auto &v : x.values()) {
    v = Cx(round(v.real()), round(v.imag()));
  }
  return x;
}

// ---------------------------------------------------------------- phantom

struct PhantomArgs
{
  std::size_t size = 64;
  std::size_t coils = 8;
  fs::path out;
  fs::path maps;
};

int cmd_phantom(PhantomArgs const &a, std::ostream &out)
{
  PhantomSpec spec{a.size, a.coils, 0.0, 0};
  spec.validate();
  auto const image = make_phantom(spec);
  auto const coils = make_coil_maps(spec.size, spec.coils);
  fs::path const maps = a.maps.empty() ? with_suffix(a.out, "_maps") : a.maps;
  ensure_parent(a.out);
  ensure_parent(maps);
  io::save_grid(a.out, as_stored(image), io::GridKind::Image);
  io::save_stack(maps, coils.maps, io::GridKind::Maps);
  print(out, ordered_json{{"image", a.out.string()}, {"maps", maps.string()}, {"size", spec.size}, {"coils", spec.coils}});
  return kExitOk;
}

// ---------------------------------------------------------------- mask

struct MaskArgs
{
  std::string kind = "uniform-cartesian";
  std::size_t size = 64;
  double ratio = 0.0;
  std::optional<std::size_t> acs;
  std::uint64_t seed = 0;
  fs::path out;
  fs::path png;
};

int cmd_mask(MaskArgs const &a, std::ostream &out)
{
  auto const kind = as_usage([&] { return parse_mask_kind(a.kind); });
  if (kind == MaskKind::External) {
    throw UsageError("--kind must name a generated mask family");
  }
  auto const mask = make_mask(kind, a.size, a.ratio, resolve_acs(kind, a.size, a.ratio, a.acs), a.seed);
  ensure_parent(a.out);
  io::save_mask(a.out, mask);
  ordered_json summary{{"mask", a.out.string()},       {"kind", to_string(kind)},
                       {"size", a.size},                {"target_ratio", a.ratio},
                       {"measured_ratio", mask.ratio_measured()}, {"acs", mask.acs_lines},
                       {"spokes", mask.spokes},         {"seed", a.seed}};
  if (!a.png.empty()) {
    RealGrid img(mask.height(), mask.width());
    for (std::size_t i = 0; i < img.size(); ++i) {
      img[i] = mask.kept[i];
    }
    ensure_parent(a.png);
    io::export_png(a.png, img, io::Window{0.0, 1.0});
    summary["png"] = a.png.string();
  }
  print(out, summary);
  return kExitOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs
{
  fs::path truth;
  fs::path maps;
  fs::path mask;
  double noise = 0.0;
  std::uint64_t seed = 0;
  fs::path out;
};

int cmd_simulate(SimulateArgs const &a, std::ostream &out)
{
  auto const truth = load_input("--truth", a.truth);
  auto const maps = load_input("--maps", a.maps);
  auto const mask = to_mask("--mask", a.mask);
  require_planar("--truth", truth);
  require_plane_shape("maps", maps, "truth", truth);
  if (mask.height() != truth.header.height() || mask.width() != truth.header.width()) {
    throw UsageError(fmt::format("shape mismatch: mask {} vs truth {}", mask.kept.shape_string(),
                                 dims_string(truth.header.dims)));
  }
  if (!(a.noise >= 0.0) || !std::isfinite(a.noise)) {
    throw UsageError("--noise must be finite and nonnegative");
  }

  CoilSet coils{maps.stack(), {}};
  auto const acquired = simulate_acquisition(truth.image(), coils, mask, a.noise, a.seed);
  ensure_parent(a.out);
  io::save_stack(a.out, acquired.kspace, io::GridKind::Kspace);
  print(out, ordered_json{{"kspace", a.out.string()},
                          {"coils", acquired.kspace.size()},
                          {"measured_ratio", mask.ratio_measured()},
                          {"noise", a.noise},
                          {"seed", a.seed}});
  return kExitOk;
}

// ---------------------------------------------------------------- recon

struct ReconArgs
{
  fs::path kspace;
  fs::path maps;
  fs::path mask;
  fs::path config;
  fs::path reference;
  fs::path out;
  fs::path trace;
  fs::path report;
  std::optional<std::size_t> max_iters;
  std::optional<double> lambda_r;
  std::optional<std::string> family;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> gamma;
  bool timing = false;
};

int cmd_recon(ReconArgs const &a, std::ostream &out)
{
  // Everything is validated before the solver starts.
  SolverConfig solver;
  RegularizerSpec reg_spec;
  if (!a.config.empty()) {
    auto const cfg = as_usage([&] { return load_experiment(a.config); });
    solver = cfg.solver;
    reg_spec = cfg.regularizer;
  }
  if (a.max_iters) {
    solver.max_iters = *a.max_iters;
  }
  if (a.lambda_r) {
    if (!(*a.lambda_r >= 0.0) || !std::isfinite(*a.lambda_r)) {
      throw UsageError("--lambda-r must be finite and nonnegative");
    }
    reg_spec.weight = *a.lambda_r;
  }
  if (a.family) {
    reg_spec.family = as_usage([&] { return parse_regularizer_family(*a.family); });
  }

  auto const ksp = load_input("--kspace", a.kspace);
  auto const maps = load_input("--maps", a.maps);
  auto const mask = to_mask("--mask", a.mask);
  auto const n_ksp = ksp.header.planes(), n_maps = maps.header.planes();
  if (n_ksp != n_maps || ksp.header.height() != maps.header.height() ||
      ksp.header.width() != maps.header.width()) {
    throw UsageError(fmt::format("shape mismatch: kspace {} vs maps {}", dims_string(ksp.header.dims),
                                 dims_string(maps.header.dims)));
  }
  if (mask.height() != maps.header.height() || mask.width() != maps.header.width()) {
    throw UsageError(fmt::format("shape mismatch: mask {} vs maps {}", mask.kept.shape_string(),
                                 dims_string(maps.header.dims)));
  }
  std::optional<ComplexGrid> reference;
  if (!a.reference.empty()) {
    auto const ref = load_input("--reference", a.reference);
    require_planar("--reference", ref);
    require_plane_shape("reference", ref, "maps", maps);
    reference = ref.image();
  }

  CoilSet coils{maps.stack(), ksp.stack()};
  auto const model = as_usage([&] { return ForwardModel(mask, coils); });
  auto const reg = as_usage([&] { return reg_spec.resolve(model); });
  auto cfg = with_default_steps(solver, model, reg);
  for (auto &step : cfg.schedule.steps) {
    step.alpha = a.alpha.value_or(step.alpha);
    step.beta = a.beta.value_or(step.beta);
    step.gamma = a.gamma.value_or(step.gamma);
  }
  as_usage([&] { cfg.validate(); });

  fs::path const trace_path = a.trace.empty() ? with_suffix(a.out, "_trace.csv") : a.trace;
  ensure_parent(trace_path);
  ensure_parent(a.out);

  Objective const objective{model, reg};
  ReconResult result = [&] {
    try {
      return reconstruct(objective, cfg);
    } catch (NumericalFailure const &e) {
      io::write_trace_csv(trace_path, e.trace, a.timing);
      throw;
    }
  }();

  io::save_grid(a.out, as_stored(result.image), io::GridKind::Image);
  io::write_trace_csv(trace_path, result.trace, a.timing);
  ordered_json summary{{"image", a.out.string()},
                       {"trace", trace_path.string()},
                       {"iters", result.trace.iterations()},
                       {"stop", to_string(result.trace.stop)},
                       {"lambda_r", reg.weight}};
  if (reference) {
    auto const report = evaluate(*reference, as_stored(result.image));
    fs::path const report_path = a.report.empty() ? with_suffix(a.out, "_metrics.json") : a.report;
    ensure_parent(report_path);
    io::write_file_atomic(report_path, io::metric_report_json(report) + "\n");
    summary["report"] = report_path.string();
    summary["psnr_db"] = json_number(report.psnr_db);
    summary["ssim"] = json_number(report.ssim);
    summary["rel_err"] = json_number(report.rel_err);
  }
  print(out, summary);
  return kExitOk;
}

// ---------------------------------------------------------------- eval

struct EvalArgs
{
  fs::path reference;
  fs::path test;
  fs::path out;
};

int cmd_eval(EvalArgs const &a, std::ostream &out)
{
  auto const ref = load_input("--reference", a.reference);
  auto const test = load_input("--test", a.test);
  require_planar("--reference", ref);
  require_planar("--test", test);
  require_plane_shape("test", test, "reference", ref);
  auto const report = as_usage([&] { return evaluate(ref.image(), test.image()); });
  auto const text = io::metric_report_json(report);
  if (!a.out.empty()) {
    ensure_parent(a.out);
    io::write_file_atomic(a.out, text + "\n");
  }
  out << text << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- sweep

std::string cell_name(io::SweepRow const &row)
{
  return fmt::format("{}_r{}_s{}", row.mask_kind, io::format_number(row.target_ratio), row.seed);
}

struct SweepArgs
{
  fs::path config;
  fs::path out;
  unsigned threads = 1;
  bool timing = false;
};

int cmd_sweep(SweepArgs const &a, std::ostream &out)
{
  auto cfg = as_usage([&] { return load_experiment(a.config); });
  if (cfg.masks.empty()) {
    throw UsageError("sweep config lists no masks");
  }
  if (!a.out.empty()) {
    cfg.output_directory = a.out;
  }

  auto const outcome = run_sweep(cfg, a.threads, a.timing);

  // Single serializer: all files are written here, after the workers finish.
  fs::create_directories(cfg.output_directory / "cells");
  auto const truth_mag = magnitude_of(outcome.truth);
  io::Window const window{0.0, peak(truth_mag)};
  io::export_png(cfg.output_directory / "truth.png", truth_mag, window);
  std::vector<io::SweepRow> rows;
  std::size_t failed = 0;
  for (auto const &cell : outcome.cells) {
    rows.push_back(cell.row);
    if (cell.image) {
      io::export_png(cfg.output_directory / "cells" / (cell_name(cell.row) + ".png"), magnitude_of(*cell.image),
                     window);
    } else {
      ++failed;
    }
  }
  auto const results = cfg.output_directory / "results.csv";
  io::write_report_csv(results, rows);
  print(out, ordered_json{{"results", results.string()}, {"rows", rows.size()}, {"failed", failed}});
  return kExitOk;
}

// ---------------------------------------------------------------- adapt

struct AdaptArgs
{
  fs::path tasks;
  fs::path candidates;
  std::string metric = "psnr";
  fs::path out;
  unsigned threads = 1;
};

int cmd_adapt(AdaptArgs const &a, std::ostream &out)
{
  auto const metric = as_usage([&] { return parse_adapt_metric(a.metric); });

  // candidates file: {"version": 1, "regularizer": {...}, "candidates": [solver, ...]}
  auto const doc = as_usage([&] { return read_json_file(a.candidates); });
  RegularizerSpec reg_spec;
  std::vector<SolverConfig> candidates;
  as_usage([&] {
    if (!doc.is_object()) {
      throw ParameterError("candidate file must hold a JSON object");
    }
    for (auto const &[key, value] : doc.items()) {
      if (key != "version" && key != "regularizer" && key != "candidates") {
        throw ParameterError("unknown key '" + key + "' in candidate file");
      }
    }
    if (!doc.contains("version") || doc["version"] != kConfigVersion) {
      throw ParameterError("candidate file needs \"version\": 1");
    }
    if (doc.contains("regularizer")) {
      reg_spec = regularizer_from_json(doc["regularizer"]);
    }
    if (!doc.contains("candidates") || !doc["candidates"].is_array() || doc["candidates"].empty()) {
      throw ParameterError("'candidates' must be a non-empty array");
    }
    for (std::size_t i = 0; i < doc["candidates"].size(); ++i) {
      candidates.push_back(solver_from_json(doc["candidates"][i], "candidates[" + std::to_string(i) + "]"));
    }
  });

  if (!fs::is_directory(a.tasks)) {
    throw UsageError("--tasks: " + a.tasks.string() + " is not a directory");
  }
  std::vector<fs::path> dirs;
  for (auto const &entry : fs::directory_iterator(a.tasks)) {
    if (entry.is_directory()) {
      dirs.push_back(entry.path());
    }
  }
  std::sort(dirs.begin(), dirs.end());
  if (dirs.empty()) {
    throw UsageError("--tasks: " + a.tasks.string() + " holds no task directories");
  }

  std::vector<TaskSpec> tasks;
  for (auto const &dir : dirs) {
    auto const name = dir.filename().string();
    auto const ksp = load_input(name + "/kspace", dir / "kspace");
    auto const maps = load_input(name + "/maps", dir / "maps");
    auto const ref = load_input(name + "/reference", dir / "reference");
    auto mask = to_mask(name + "/mask", dir / "mask");
    if (ksp.header.dims != maps.header.dims) {
      throw UsageError(fmt::format("shape mismatch in {}: kspace {} vs maps {}", name, dims_string(ksp.header.dims),
                                   dims_string(maps.header.dims)));
    }
    require_planar(name + "/reference", ref);
    require_plane_shape(name + "/reference", ref, "maps", maps);
    if (mask.height() != maps.header.height() || mask.width() != maps.header.width()) {
      throw UsageError(fmt::format("shape mismatch in {}: mask {} vs maps {}", name, mask.kept.shape_string(),
                                   dims_string(maps.header.dims)));
    }
    tasks.push_back(TaskSpec{std::move(mask), CoilSet{maps.stack(), ksp.stack()}, ref.image()});
  }

  // data outside a task's mask is an input error, not a solver failure
  as_usage([&] {
    for (auto const &t : tasks) {
      ForwardModel(t.mask, t.coils);
    }
  });
  auto const adapted = adapt(tasks, candidates, reg_spec, metric, a.threads);

  fs::create_directories(a.out);
  std::string csv = "candidate,task,score,failed\n";
  for (auto const &e : adapted.table) {
    csv += fmt::format("{},{},{},{}\n", e.candidate, dirs[e.task].filename().string(), io::format_number(e.score),
                       e.failed ? 1 : 0);
  }
  auto const scores_path = a.out / "scores.csv";
  io::write_file_atomic(scores_path, csv);

  ordered_json best;
  best["version"] = kConfigVersion;
  best["solver"] = to_json(adapted.best);
  best["regularizer"] = to_json(reg_spec);
  auto const best_path = a.out / "best_config.json";
  io::write_file_atomic(best_path, best.dump(2) + "\n");

  print(out, ordered_json{{"best_config", best_path.string()},
                          {"scores", scores_path.string()},
                          {"best_index", adapted.best_index},
                          {"mean", json_number(adapted.means[adapted.best_index])},
                          {"metric", to_string(metric)},
                          {"tasks", tasks.size()},
                          {"candidates", candidates.size()}});
  return kExitOk;
}

} // namespace

// ---------------------------------------------------------------- sweep core

SweepOutcome run_sweep(ExperimentConfig const &cfg, unsigned threads, bool timing)
{
  cfg.phantom.validate();
  SweepOutcome outcome{make_phantom(cfg.phantom), {}};
  auto const coils = make_coil_maps(cfg.phantom.size, cfg.phantom.coils);
  auto const size = cfg.phantom.size;
  auto const stored_truth = as_stored(outcome.truth);

  outcome.cells.resize(cfg.masks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cfg.masks.size(); i = next++) {
      auto const &spec = cfg.masks[i];
      auto &cell = outcome.cells[i];
      cell.row = io::SweepRow{to_string(spec.kind), spec.ratio, kNaN, spec.seed, kNaN, kNaN, kNaN, 0, 0.0};
      auto const start = std::chrono::steady_clock::now();
      try {
        auto const mask = make_mask(spec.kind, size, spec.ratio, resolve_acs(spec.kind, size, spec.ratio, spec.acs),
                                    spec.seed);
        cell.row.measured_ratio = mask.ratio_measured();
        auto const acquired = simulate_acquisition(outcome.truth, coils, mask, cfg.phantom.noise_sigma, cfg.phantom.seed);
        ForwardModel model(mask, acquired);
        auto const reg = cfg.regularizer.resolve(model);
        auto const solver = with_default_steps(cfg.solver, model, reg);
        auto result = reconstruct(Objective{std::move(model), reg}, solver);
        auto const report = evaluate(stored_truth, as_stored(result.image));
        cell.row.psnr_db = report.psnr_db;
        cell.row.ssim = report.ssim;
        cell.row.rel_err = report.rel_err;
        cell.row.iters = result.trace.iterations();
        cell.image = std::move(result.image);
      } catch (NumericalFailure const &e) {
        cell.row.iters = e.trace.iterations();
        cell.error = e.what();
      } catch (std::exception const &e) {
        cell.error = e.what();
      }
      if (timing) {
        cell.row.wall_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      }
    }
  };
  unsigned const n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cfg.masks.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < n; ++i) {
      pool.emplace_back(worker);
    }
  }
  return outcome;
}

// ---------------------------------------------------------------- entry point

int run(std::vector<std::string> const &args, std::ostream &out, std::ostream &err)
{
  CLI::App app{"Adaptive forward-backward reconstruction for undersampled multi-coil MRI", "afb"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::function<int()> action;

  PhantomArgs pa;
  auto *phantom = app.add_subcommand("phantom", "Write a Shepp-Logan phantom and coil sensitivity maps");
  phantom->add_option("--size", pa.size, "Image side length")->capture_default_str();
  phantom->add_option("--coils", pa.coils, "Number of receive coils")->capture_default_str();
  phantom->add_option("--out", pa.out, "Image container base path")->required();
  phantom->add_option("--maps", pa.maps, "Coil map container base path (default <out>_maps)");
  phantom->callback([&] { action = [&] { return cmd_phantom(pa, out); }; });

  MaskArgs ma;
  auto *mask = app.add_subcommand("mask", "Generate a k-space sampling mask");
  mask->add_option("--kind", ma.kind, "uniform-cartesian | random-cartesian | radial")->capture_default_str();
  mask->add_option("--size", ma.size, "Mask side length")->capture_default_str();
  mask->add_option("--ratio", ma.ratio, "Target sampling ratio in (0, 1]")->required();
  mask->add_option("--acs", ma.acs, "Fully sampled center rows (Cartesian)");
  mask->add_option("--seed", ma.seed, "Seed for random-cartesian")->capture_default_str();
  mask->add_option("--out", ma.out, "Mask container base path")->required();
  mask->add_option("--png", ma.png, "Also write the mask as a PNG");
  mask->callback([&] { action = [&] { return cmd_mask(ma, out); }; });

  SimulateArgs sa;
  auto *simulate = app.add_subcommand("simulate", "Simulate undersampled multi-coil k-space");
  simulate->add_option("--truth", sa.truth, "Image container")->required();
  simulate->add_option("--maps", sa.maps, "Coil map container")->required();
  simulate->add_option("--mask", sa.mask, "Mask container")->required();
  simulate->add_option("--noise", sa.noise, "Noise std per real/imag component")->capture_default_str();
  simulate->add_option("--seed", sa.seed, "Noise seed")->capture_default_str();
  simulate->add_option("--out", sa.out, "k-space container base path")->required();
  simulate->callback([&] { action = [&] { return cmd_simulate(sa, out); }; });

  ReconArgs ra;
  auto *recon = app.add_subcommand("recon", "Reconstruct an image from undersampled k-space");
  recon->add_option("--kspace", ra.kspace, "k-space container")->required();
  recon->add_option("--maps", ra.maps, "Coil map container")->required();
  recon->add_option("--mask", ra.mask, "Mask container")->required();
  recon->add_option("--config", ra.config, "Experiment config (solver and regularizer sections)");
  recon->add_option("--reference", ra.reference, "Reference image; enables the metric report");
  recon->add_option("--out", ra.out, "Output image container base path")->required();
  recon->add_option("--trace", ra.trace, "Trace CSV path (default <out>_trace.csv)");
  recon->add_option("--report", ra.report, "Metric report path (default <out>_metrics.json)");
  recon->add_option("--max-iters", ra.max_iters, "Override solver.max_iters");
  recon->add_option("--lambda-r", ra.lambda_r, "Override regularizer.lambda_r");
  recon->add_option("--family", ra.family, "Override regularizer.family");
  recon->add_option("--alpha", ra.alpha, "Override alpha in every phase");
  recon->add_option("--beta", ra.beta, "Override beta in every phase");
  recon->add_option("--gamma", ra.gamma, "Override gamma in every phase");
  recon->add_flag("--timing", ra.timing, "Record wall-clock times in the trace");
  recon->callback([&] { action = [&] { return cmd_recon(ra, out); }; });

  EvalArgs ea;
  auto *eval = app.add_subcommand("eval", "Compare an image against a reference");
  eval->add_option("--reference", ea.reference, "Reference image container")->required();
  eval->add_option("--test", ea.test, "Test image container")->required();
  eval->add_option("--out", ea.out, "Also write the report to this path");
  eval->callback([&] { action = [&] { return cmd_eval(ea, out); }; });

  SweepArgs wa;
  auto *sweep = app.add_subcommand("sweep", "Run the mask-ratio sweep described by a config");
  sweep->add_option("--config", wa.config, "Experiment config")->required();
  sweep->add_option("--out", wa.out, "Output directory (overrides outputs.directory)");
  sweep->add_option("--threads", wa.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  sweep->add_flag("--timing", wa.timing, "Record wall-clock times in results.csv");
  sweep->callback([&] { action = [&] { return cmd_sweep(wa, out); }; });

  AdaptArgs aa;
  auto *adapt_cmd = app.add_subcommand("adapt", "Pick the best solver config over a set of tasks");
  adapt_cmd->add_option("--tasks", aa.tasks, "Directory of task subdirectories")->required();
  adapt_cmd->add_option("--candidates", aa.candidates, "Candidate grid JSON")->required();
  adapt_cmd->add_option("--metric", aa.metric, "psnr | ssim | relerr")->capture_default_str();
  adapt_cmd->add_option("--out", aa.out, "Output directory")->required();
  adapt_cmd->add_option("--threads", aa.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  adapt_cmd->callback([&] { action = [&] { return cmd_adapt(aa, out); }; });

  std::vector<char const *> argv{"afb"};
  for (auto const &a : args) {
    argv.push_back(a.c_str());
  }
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (CLI::ParseError const &e) {
    int const code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    return action();
  } catch (UsageError const &e) {
    err << "afb: " << e.what() << '\n';
    return kExitUsage;
  } catch (NumericalFailure const &e) {
    err << "afb: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (std::exception const &e) {
    err << "afb: " << e.what() << '\n';
    return kExitFailure;
  }
}

} // namespace afb::cli
