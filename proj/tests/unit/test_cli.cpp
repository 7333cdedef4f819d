#include "afb/cli/commands.hpp"
#include "afb/cli/experiment.hpp"
#include "afb/io/container.hpp"
#include "afb/io/report.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

using namespace afb;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome
{
  int code;
  std::string out;
  std::string err;

  json summary() const { return json::parse(out); }
};

Outcome afb_run(std::vector<std::string> args)
{
  std::ostringstream out, err;
  int const code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string p(fs::path const &path) { return path.string(); }

void write_json(fs::path const &path, json const &j) { std::ofstream(path) << j.dump(2); }

// phantom + mask + noiseless simulation written under dir
void acquire(fs::path const &dir, std::string const &size, std::string const &coils, std::string const &ratio)
{
  REQUIRE(afb_run({"phantom", "--size", size, "--coils", coils, "--out", p(dir / "truth"), "--maps", p(dir / "maps")}).code == 0);
  REQUIRE(afb_run({"mask", "--kind", "uniform", "--size", size, "--ratio", ratio, "--out", p(dir / "mask")}).code == 0);
  REQUIRE(afb_run({"simulate", "--truth", p(dir / "truth"), "--maps", p(dir / "maps"), "--mask", p(dir / "mask"),
                   "--out", p(dir / "kspace")})
            .code == 0);
}

} // namespace

TEST_CASE("mask command at the 31.56% caption ratio")
{
  auto const dir = oracle::temp_dir("cli");
  auto const r = afb_run({"mask", "--kind", "uniform", "--size", "64", "--ratio", "0.3156", "--acs", "8", "--out",
                          p(dir / "m")});
  REQUIRE(r.code == 0);
  CHECK(r.out.find('\n') == r.out.size() - 1);
  auto const s = r.summary();
  double const measured = s["measured_ratio"];
  CHECK(std::abs(measured - 0.3156) <= 0.01);
  auto const mask = io::load_mask(dir / "m");
  std::size_t kept = 0;
  for (auto v : mask.kept.values()) {
    kept += v;
  }
  CHECK(double(kept) / 4096.0 == measured);
  CHECK(s["mask"] == p(dir / "m"));
}

TEST_CASE("mask command at ratio 1 is exactly full")
{
  auto const dir = oracle::temp_dir("cli");
  auto const r = afb_run({"mask", "--ratio", "1.0", "--out", p(dir / "m")});
  REQUIRE(r.code == 0);
  CHECK(r.summary()["measured_ratio"] == 1.0);
}

TEST_CASE("exit codes for bad input")
{
  auto const dir = oracle::temp_dir("cli");
  auto const small = afb_run({"phantom", "--size", "4", "--out", p(dir / "x")});
  CHECK(small.code == 1);
  CHECK(small.err.find("at least 8") != std::string::npos);
  CHECK(afb_run({}).code == 2);
  CHECK(afb_run({"frobnicate"}).code == 2);
  CHECK(afb_run({"mask", "--ratio", "0.5"}).code == 2);
  CHECK(afb_run({"mask", "--ratio", "abc", "--out", p(dir / "m")}).code == 2);
  CHECK(afb_run({"mask", "--kind", "spiral", "--ratio", "0.5", "--out", p(dir / "m")}).code == 2);
  CHECK(afb_run({"mask", "--ratio", "0", "--out", p(dir / "m")}).code == 1);
  CHECK(afb_run({"eval", "--reference", p(dir / "nope"), "--test", p(dir / "nope")}).code == 2);
  CHECK(afb_run({"--help"}).code == 0);
}

TEST_CASE("recon: exact-data case, trace header and report")
{
  auto const dir = oracle::temp_dir("cli");
  acquire(dir, "32", "1", "1.0");
  auto const r = afb_run({"recon", "--kspace", p(dir / "kspace"), "--maps", p(dir / "maps"), "--mask",
                          p(dir / "mask"), "--reference", p(dir / "truth"), "--lambda-r", "0", "--out",
                          p(dir / "recon")});
  REQUIRE(r.code == 0);
  auto const report = io::parse_metric_report(oracle::read_file(dir / "recon_metrics.json"));
  CHECK(report.rel_err <= 1e-6);
  auto const trace = oracle::read_csv(dir / "recon_trace.csv");
  REQUIRE(!trace.empty());
  CHECK(trace[0] == std::vector<std::string>{"k", "phi", "grad_norm", "eta", "tau", "branch", "eta_decayed", "ms"});
  CHECK(trace.size() == r.summary()["iters"].get<std::size_t>() + 1);

  // eval on the written containers reproduces the report
  auto const e = afb_run({"eval", "--reference", p(dir / "truth"), "--test", p(dir / "recon")});
  REQUIRE(e.code == 0);
  auto const again = io::parse_metric_report(e.out);
  CHECK(again.rel_err == report.rel_err);
  CHECK(again.ssim == report.ssim);
}

TEST_CASE("recon: flags override the config and reruns are identical")
{
  auto const dir = oracle::temp_dir("cli");
  acquire(dir, "32", "4", "0.4");
  write_json(dir / "cfg.json", {{"version", 1}, {"solver", {{"max_iters", 50}}}, {"regularizer", {{"lambda_r", 0.01}}}});
  std::vector<std::string> args{"recon",  "--kspace", p(dir / "kspace"),   "--maps", p(dir / "maps"),
                                "--mask", p(dir / "mask"), "--config", p(dir / "cfg.json"), "--max-iters",
                                "7",      "--out",   p(dir / "a")};
  auto const r = afb_run(args);
  REQUIRE(r.code == 0);
  CHECK(r.summary()["iters"] == 7);
  CHECK(r.summary()["lambda_r"] == 0.01);
  args.back() = p(dir / "b");
  REQUIRE(afb_run(args).code == 0);
  CHECK(oracle::read_file(dir / "a.bin") == oracle::read_file(dir / "b.bin"));
  CHECK(oracle::read_file(dir / "a_trace.csv") == oracle::read_file(dir / "b_trace.csv"));
}

TEST_CASE("recon: shape inconsistency exits 2 naming the dims")
{
  auto const dir = oracle::temp_dir("cli");
  acquire(dir, "32", "4", "0.4");
  REQUIRE(afb_run({"phantom", "--size", "16", "--coils", "2", "--out", p(dir / "small"), "--maps", p(dir / "small_maps")}).code == 0);
  auto const r = afb_run({"recon", "--kspace", p(dir / "kspace"), "--maps", p(dir / "small_maps"), "--mask",
                          p(dir / "mask"), "--out", p(dir / "x")});
  CHECK(r.code == 2);
  CHECK(r.err.find("[4,32,32]") != std::string::npos);
  CHECK(r.err.find("[2,16,16]") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "x.json"));
}

TEST_CASE("recon: a huge alpha alone is absorbed by the fallback")
{
  auto const dir = oracle::temp_dir("cli");
  acquire(dir, "32", "4", "0.4");
  auto const r = afb_run({"recon", "--kspace", p(dir / "kspace"), "--maps", p(dir / "maps"), "--mask",
                          p(dir / "mask"), "--alpha", "1e6", "--max-iters", "20", "--out", p(dir / "x")});
  CHECK(r.code == 0);
}

TEST_CASE("recon: a diverging config exits 3 and leaves the partial trace")
{
  auto const dir = oracle::temp_dir("cli");
  acquire(dir, "32", "4", "0.4");
  json steps = json::array({{{"alpha", 1.0}, {"beta", 1.0}, {"gamma", 1.0}},
                            {{"alpha", 1.0}, {"beta", 1.0}, {"gamma", 1.0}},
                            {{"alpha", 1e6}, {"beta", 1e200}, {"gamma", 1e200}}});
  write_json(dir / "absurd.json", {{"version", 1}, {"solver", {{"schedule", steps}}}});
  auto const r = afb_run({"recon", "--kspace", p(dir / "kspace"), "--maps", p(dir / "maps"), "--mask",
                          p(dir / "mask"), "--config", p(dir / "absurd.json"), "--out", p(dir / "x")});
  CHECK(r.code == 3);
  auto const trace = oracle::read_csv(dir / "x_trace.csv");
  CHECK(trace.size() == 3); // header + the two completed iterations
  CHECK_FALSE(fs::exists(dir / "x.json"));
}

TEST_CASE("experiment config validation")
{
  CHECK_NOTHROW(cli::parse_experiment(json{{"version", 1}}));
  CHECK_THROWS_AS(cli::parse_experiment(json::object()), ParameterError);
  CHECK_THROWS_AS(cli::parse_experiment(json{{"version", 2}}), ParameterError);
  CHECK_THROWS_AS(cli::parse_experiment(json{{"version", 1}, {"bogus", 1}}), ParameterError);
  CHECK_THROWS_AS(cli::parse_experiment(json{{"version", 1}, {"solver", {{"tau0", 2.0}}}}), ParameterError);
  CHECK_THROWS_AS(cli::parse_experiment(json{{"version", 1}, {"solver", {{"max_iters", -1}}}}), ParameterError);
  CHECK_THROWS_AS(cli::parse_experiment(json{{"version", 1}, {"phantom", {{"size", 4}}}}), ParameterError);
  CHECK_THROWS_AS(cli::parse_experiment(json{{"version", 1}, {"mask", {{"kind", "radial"}}}}), ParameterError);
  CHECK_THROWS_AS(cli::parse_experiment(json{{"version", 1}, {"mask", {{"kind", "radial"}, {"ratio", 1.5}}}}),
                  ParameterError);
  CHECK_THROWS_AS(cli::parse_experiment(json{{"version", 1}, {"regularizer", {{"lambda_r", -1}}}}), ParameterError);
  try {
    cli::parse_experiment(json{{"version", 1}, {"solver", {{"schedule", json::array({{{"alpha", 1}}})}}}});
    FAIL("expected ParameterError");
  } catch (ParameterError const &e) {
    CHECK(std::string(e.what()).find("solver.schedule[0].beta") != std::string::npos);
  }

  auto const cfg = cli::parse_experiment(json{
    {"version", 1},
    {"masks", json::array({{{"kind", "uniform"}, {"ratios", {0.5, 0.25}}}, {{"kind", "radial"}, {"ratio", 0.1}}})}});
  REQUIRE(cfg.masks.size() == 3);
  CHECK(cfg.masks[1].ratio == 0.25);
  CHECK(cfg.masks[2].kind == MaskKind::Radial);

  SolverConfig s;
  s.max_iters = 17;
  s.schedule.steps = {PhaseStep{0.5, 0.25, 0.125}};
  CHECK(cli::solver_from_json(cli::to_json(s)) == s);
}

TEST_CASE("default ACS stays reachable at low ratios")
{
  CHECK(cli::resolve_acs(MaskKind::UniformCartesian, 64, 0.3156, std::nullopt) == 8);
  CHECK(cli::resolve_acs(MaskKind::UniformCartesian, 64, 0.0875, std::nullopt) == 3);
  CHECK(cli::resolve_acs(MaskKind::Radial, 64, 0.3, std::nullopt) == 0);
  CHECK(cli::resolve_acs(MaskKind::RandomCartesian, 64, 0.5, 2) == 2);
}

TEST_CASE("sweep: full-sampling noiseless cell is exact, reruns are byte-identical, failures stay in-row")
{
  auto const dir = oracle::temp_dir("cli");
  json cfg{{"version", 1},
           {"phantom", {{"size", 32}, {"coils", 4}, {"noise_sigma", 0.0}}},
           {"masks", json::array({{{"kind", "uniform-cartesian"}, {"ratio", 1.0}}})},
           {"regularizer", {{"lambda_r", 0.0}}},
           {"outputs", {{"directory", p(dir / "one")}}}};
  write_json(dir / "one.json", cfg);
  auto const r = afb_run({"sweep", "--config", p(dir / "one.json")});
  REQUIRE(r.code == 0);
  auto const rows = oracle::read_csv(dir / "one" / "results.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][4] == "inf");
  CHECK(fs::exists(dir / "one" / "cells" / "uniform-cartesian_r1_s0.png"));

  json two{{"version", 1},
           {"phantom", {{"size", 32}, {"coils", 4}, {"noise_sigma", 0.01}, {"seed", 3}}},
           {"masks", json::array({{{"kind", "radial"}, {"ratios", {0.2, 0.4}}}, {{"kind", "random"}, {"ratio", 0.4}, {"seed", 5}}})},
           {"solver", {{"max_iters", 15}}}};
  write_json(dir / "two.json", two);
  REQUIRE(afb_run({"sweep", "--config", p(dir / "two.json"), "--out", p(dir / "a")}).code == 0);
  REQUIRE(afb_run({"sweep", "--config", p(dir / "two.json"), "--out", p(dir / "b"), "--threads", "3"}).code == 0);
  CHECK(oracle::read_file(dir / "a" / "results.csv") == oracle::read_file(dir / "b" / "results.csv"));
  auto const two_rows = oracle::read_csv(dir / "a" / "results.csv");
  REQUIRE(two_rows.size() == 4);
  CHECK(two_rows[1][0] == "random-cartesian");
  CHECK(two_rows[2][1] == "0.4");
  CHECK(two_rows[3][1] == "0.2");
  CHECK(two_rows[1][8] == "0");

  two["solver"] = {{"schedule", json::array({{{"alpha", 1.0}, {"beta", 1.0}, {"gamma", 1.0}},
                                             {{"alpha", 1.0}, {"beta", 1e200}, {"gamma", 1e200}}})}};
  write_json(dir / "bad.json", two);
  auto const bad = afb_run({"sweep", "--config", p(dir / "bad.json"), "--out", p(dir / "c")});
  CHECK(bad.code == 0);
  CHECK(bad.summary()["failed"] == 3);
  for (auto const &row : oracle::read_csv(dir / "c" / "results.csv")) {
    if (row[0] != "mask_kind") {
      CHECK(row[4] == "nan");
      CHECK(row[7] == "1");
    }
  }

  write_json(dir / "unknown.json", json{{"version", 1}, {"masks", json::array()}, {"extra", true}});
  CHECK(afb_run({"sweep", "--config", p(dir / "unknown.json")}).code == 2);
  write_json(dir / "nomasks.json", json{{"version", 1}});
  CHECK(afb_run({"sweep", "--config", p(dir / "nomasks.json")}).code == 2);
}

TEST_CASE("adapt command: score table, winner and single-candidate echo")
{
  auto const dir = oracle::temp_dir("cli");
  fs::create_directories(dir / "tasks");
  MaskKind const kinds[] = {MaskKind::UniformCartesian, MaskKind::RandomCartesian, MaskKind::Radial};
  for (int t = 0; t < 3; ++t) {
    auto const task = fixture::phantom_task(16, 2, kinds[t], 0.4, 0.01, std::uint64_t(t));
    auto const td = dir / "tasks" / ("t" + std::to_string(t));
    fs::create_directories(td);
    io::save_stack(td / "kspace", task.coils.kspace, io::GridKind::Kspace);
    io::save_stack(td / "maps", task.coils.maps, io::GridKind::Maps);
    io::save_mask(td / "mask", task.mask);
    io::save_grid(td / "reference", task.truth, io::GridKind::Image);
  }
  json cands{{"version", 1},
             {"candidates", json::array({{{"max_iters", 0}}, {{"max_iters", 10}}, {{"max_iters", 10}, {"eta0", 0.2}},
                                         {{"max_iters", 5}}})}};
  write_json(dir / "cands.json", cands);
  auto const r = afb_run({"adapt", "--tasks", p(dir / "tasks"), "--candidates", p(dir / "cands.json"), "--metric",
                          "psnr", "--out", p(dir / "out")});
  REQUIRE(r.code == 0);
  auto const table = oracle::read_csv(dir / "out" / "scores.csv");
  REQUIRE(table.size() == 13);
  CHECK(table[0] == std::vector<std::string>{"candidate", "task", "score", "failed"});
  std::vector<double> sums(4, 0.0);
  for (std::size_t i = 1; i < table.size(); ++i) {
    sums[std::stoul(table[i][0])] += std::stod(table[i][2]);
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < 4; ++c) {
    if (sums[c] > sums[best]) {
      best = c;
    }
  }
  auto const s = r.summary();
  CHECK(s["best_index"] == best);
  CHECK(s["mean"].get<double>() == doctest::Approx(sums[best] / 3).epsilon(1e-9));
  auto const best_cfg = cli::load_experiment(dir / "out" / "best_config.json");
  CHECK(best_cfg.solver == cli::solver_from_json(cands["candidates"][best]));

  json one{{"version", 1}, {"candidates", json::array({{{"max_iters", 3}, {"tau0", 0.25}}})}};
  write_json(dir / "one.json", one);
  auto const r1 = afb_run({"adapt", "--tasks", p(dir / "tasks"), "--candidates", p(dir / "one.json"), "--out",
                           p(dir / "out1")});
  REQUIRE(r1.code == 0);
  auto const echoed = cli::load_experiment(dir / "out1" / "best_config.json");
  CHECK(echoed.solver == cli::solver_from_json(one["candidates"][0]));

  fs::create_directories(dir / "empty");
  CHECK(afb_run({"adapt", "--tasks", p(dir / "empty"), "--candidates", p(dir / "one.json"), "--out", p(dir / "o")}).code == 2);
  write_json(dir / "none.json", json{{"version", 1}, {"candidates", json::array()}});
  CHECK(afb_run({"adapt", "--tasks", p(dir / "tasks"), "--candidates", p(dir / "none.json"), "--out", p(dir / "o")}).code == 2);
  CHECK(afb_run({"adapt", "--tasks", p(dir / "tasks"), "--candidates", p(dir / "one.json"), "--metric", "mse", "--out", p(dir / "o")}).code == 2);
}
