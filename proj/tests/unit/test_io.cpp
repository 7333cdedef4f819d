#include "afb/acquisition/mask.hpp"
#include "afb/errors.hpp"
#include "afb/io/container.hpp"
#include "afb/io/png.hpp"
#include "afb/io/report.hpp"

#include "oracles.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>
#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>

using namespace afb;
namespace fs = std::filesystem;

namespace {

void write_text(fs::path const &p, std::string const &text)
{
  std::ofstream(p, std::ios::binary) << text;
}

std::vector<std::uint8_t> read_png_gray(fs::path const &p, std::size_t &h, std::size_t &w)
{
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  REQUIRE(png_image_begin_read_from_file(&img, p.c_str()) != 0);
  img.format = PNG_FORMAT_GRAY;
  std::vector<std::uint8_t> buf(PNG_IMAGE_SIZE(img));
  REQUIRE(png_image_finish_read(&img, nullptr, buf.data(), 0, nullptr) != 0);
  h = img.height;
  w = img.width;
  return buf;
}

bool no_temp_files(fs::path const &dir)
{
  for (auto const &e : fs::directory_iterator(dir)) {
    if (e.path().filename().string().find(".tmp") != std::string::npos) {
      return false;
    }
  }
  return true;
}

} // namespace

TEST_CASE("complex grid roundtrip at float32 precision")
{
  auto const dir = oracle::temp_dir("io");
  Rng rng(64);
  ComplexGrid g(64, 64);
  for (auto &v : g.values()) {
    v = Cx(2 * rng.uniform() - 1, 2 * rng.uniform() - 1);
  }
  io::save_grid(dir / "g", g, io::GridKind::Image);
  auto const back = io::load_image(dir / "g");
  double worst = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    worst = std::max(worst, std::abs(back[i] - g[i]));
  }
  CHECK(worst <= 1e-6);
  CHECK(fs::file_size(dir / "g.bin") == 64 * 64 * 8);
  CHECK(no_temp_files(dir));

  auto const header = nlohmann::json::parse(oracle::read_file(dir / "g.json"));
  CHECK(header["dims"] == nlohmann::json::array({64, 64}));
  CHECK(header["dtype"] == "complex64");
  CHECK(header["order"] == "row-major");
  CHECK(header["endian"] == "little");
  CHECK(header["kind"] == "image");
}

TEST_CASE("payload bytes are little-endian interleaved float32")
{
  auto const dir = oracle::temp_dir("io");
  ComplexGrid g(1, 2);
  g[0] = Cx(1.0, -2.0);
  g[1] = Cx(0.5, 0.0);
  io::save_grid(dir / "e", g);
  auto const bytes = oracle::read_file(dir / "e.bin");
  REQUIRE(bytes.size() == 16);
  // 1.0f = 0x3f800000, -2.0f = 0xc0000000, 0.5f = 0x3f000000
  unsigned char const expect[] = {0, 0, 0x80, 0x3f, 0, 0, 0, 0xc0, 0, 0, 0, 0x3f, 0, 0, 0, 0};
  CHECK(std::memcmp(bytes.data(), expect, 16) == 0);
}

TEST_CASE("real, stack and mask containers roundtrip")
{
  auto const dir = oracle::temp_dir("io");
  Rng rng(1);
  auto const r = oracle::random_real(rng, 8, 12);
  io::save_grid(dir / "r", r);
  auto const loaded = io::load_grid(dir / "r");
  CHECK(loaded.header.dtype == io::DType::Float32);
  auto const rb = loaded.real();
  for (std::size_t i = 0; i < r.size(); ++i) {
    CHECK(std::abs(rb[i] - r[i]) <= 1e-7);
  }

  std::vector<ComplexGrid> planes{oracle::random_grid(rng, 6, 6), oracle::random_grid(rng, 6, 6),
                                  oracle::random_grid(rng, 6, 6)};
  io::save_stack(dir / "s", planes, io::GridKind::Maps);
  auto const sl = io::load_grid(dir / "s");
  CHECK(sl.header.dims == std::vector<std::size_t>{3, 6, 6});
  CHECK(sl.header.kind == io::GridKind::Maps);
  auto const back = io::load_stack(dir / "s");
  REQUIRE(back.size() == 3);
  for (std::size_t c = 0; c < 3; ++c) {
    CHECK(oracle::rel_diff(back[c], planes[c]) <= 1e-6);
  }

  auto const mask = make_mask(MaskKind::RandomCartesian, 32, 0.4, 4, 5);
  io::save_mask(dir / "m", mask);
  auto const mb = io::load_mask(dir / "m");
  CHECK(mb.kept == mask.kept);
  CHECK(mb.kind == MaskKind::External);
  CHECK(mb.ratio_measured() == mask.ratio_measured());
}

TEST_CASE("truncated payload is a length-mismatch format error")
{
  auto const dir = oracle::temp_dir("io");
  Rng rng(2);
  io::save_grid(dir / "t", oracle::random_grid(rng, 8, 8));
  fs::resize_file(dir / "t.bin", fs::file_size(dir / "t.bin") - 4);
  try {
    io::load_grid(dir / "t");
    FAIL("expected FormatError");
  } catch (FormatError const &e) {
    CHECK(std::string(e.what()).find("length") != std::string::npos);
  }
}

TEST_CASE("malformed headers name the offending field")
{
  auto const dir = oracle::temp_dir("io");
  io::save_grid(dir / "h", ComplexGrid(2, 2));
  auto const good = nlohmann::json::parse(oracle::read_file(dir / "h.json"));

  std::map<std::string, std::function<void(nlohmann::json &)>> cases{
    {"dtype", [](auto &j) { j["dtype"] = "float64"; }},
    {"endian", [](auto &j) { j["endian"] = "big"; }},
    {"order", [](auto &j) { j["order"] = "column-major"; }},
    {"kind", [](auto &j) { j["kind"] = "volume"; }},
    {"dims", [](auto &j) { j["dims"] = nlohmann::json::array({2}); }},
    {"extra", [](auto &j) { j["extra"] = 1; }},
    {"kind", [](auto &j) { j.erase("kind"); }},
  };
  for (auto const &[fieldname, mutate] : cases) {
    auto j = good;
    mutate(j);
    write_text(dir / "h.json", j.dump());
    try {
      io::load_grid(dir / "h");
      FAIL("expected FormatError for " << fieldname);
    } catch (FormatError const &e) {
      CHECK_MESSAGE(std::string(e.what()).find(fieldname) != std::string::npos, e.what());
    }
  }
  write_text(dir / "h.json", "{not json");
  CHECK_THROWS_AS(io::load_grid(dir / "h"), FormatError);
  CHECK_THROWS_AS(io::load_grid(dir / "missing"), IoError);
}

TEST_CASE("mask loading requires kind mask and binary values")
{
  auto const dir = oracle::temp_dir("io");
  RealGrid g(4, 4, 1.0);
  io::save_grid(dir / "notmask", g, io::GridKind::Image);
  CHECK_THROWS_AS(io::load_mask(dir / "notmask"), FormatError);
  g[3] = 0.5;
  io::save_grid(dir / "half", g, io::GridKind::Mask);
  CHECK_THROWS_AS(io::load_mask(dir / "half"), FormatError);
}

TEST_CASE("report CSV: header only when empty, inf rendering, declared order")
{
  auto const dir = oracle::temp_dir("io");
  io::write_report_csv(dir / "empty.csv", {});
  CHECK(oracle::read_file(dir / "empty.csv") ==
        "mask_kind,target_ratio,measured_ratio,seed,psnr_db,rel_err,ssim,iters,wall_ms\n");

  io::SweepRow r{"uniform-cartesian", 1.0, 1.0, 0, std::numeric_limits<double>::infinity(), 0.0, 1.0, 10, 0.0};
  io::write_report_csv(dir / "inf.csv", {r});
  auto const rows = oracle::read_csv(dir / "inf.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][4] == "inf");

  // 18 rows over 3 kinds, shuffled
  Rng rng(3);
  std::vector<io::SweepRow> many;
  std::string const kinds[] = {"radial", "uniform-cartesian", "random-cartesian"};
  for (int i = 0; i < 18; ++i) {
    io::SweepRow row;
    row.mask_kind = kinds[i % 3];
    row.target_ratio = 0.05 * double(1 + i / 3);
    row.seed = std::uint64_t(i % 2);
    row.psnr_db = 20 + i;
    many.push_back(row);
  }
  for (std::size_t i = many.size(); i > 1; --i) {
    std::swap(many[i - 1], many[rng.below(i)]);
  }
  io::write_report_csv(dir / "many.csv", many);
  auto const out = oracle::read_csv(dir / "many.csv");
  REQUIRE(out.size() == 19);

  auto rank = [](std::string const &k) { return k == "uniform-cartesian" ? 0 : k == "random-cartesian" ? 1 : 2; };
  for (std::size_t i = 2; i < out.size(); ++i) {
    auto const &a = out[i - 1], &b = out[i];
    int const ra = rank(a[0]), rb = rank(b[0]);
    bool const ordered = ra < rb || (ra == rb && (std::stod(a[1]) > std::stod(b[1]) ||
                                                  (std::stod(a[1]) == std::stod(b[1]) && std::stoull(a[3]) <= std::stoull(b[3]))));
    CHECK_MESSAGE(ordered, "rows " << i - 1 << " and " << i);
  }
}

TEST_CASE("numbers are written in shortest round-trip form")
{
  CHECK(io::format_number(0.3156) == "0.3156");
  CHECK(io::format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(io::format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(io::format_number(std::nan("")) == "nan");
  double const x = 0.1 + 0.2;
  CHECK(std::stod(io::format_number(x)) == x);
}

TEST_CASE("metric report JSON uses the exact keys and encodes inf as a string")
{
  MetricReport r{std::numeric_limits<double>::infinity(), 1.0, 0.0};
  auto const text = io::metric_report_json(r);
  auto const j = nlohmann::json::parse(text);
  CHECK(j["psnr_db"] == "inf");
  CHECK(j["ssim"] == 1.0);
  CHECK(j["rel_err"] == 0.0);
  CHECK(j.size() == 3);
  auto const back = io::parse_metric_report(text);
  CHECK(back.psnr_db == r.psnr_db);

  MetricReport finite{31.25, 0.9, 0.1};
  auto const b2 = io::parse_metric_report(io::metric_report_json(finite));
  CHECK(b2.psnr_db == 31.25);
  CHECK(b2.ssim == 0.9);
  CHECK(b2.rel_err == 0.1);
}

TEST_CASE("PNG export: windowing, clamping and rounding")
{
  auto const dir = oracle::temp_dir("io");
  std::size_t h = 0, w = 0;

  io::export_png(dir / "half.png", RealGrid(3, 5, 0.5), io::Window{0, 1});
  auto const px = read_png_gray(dir / "half.png", h, w);
  CHECK(h == 3);
  CHECK(w == 5);
  CHECK(std::all_of(px.begin(), px.end(), [](auto v) { return v == 128; }));

  RealGrid g(1, 4);
  g[0] = -0.5; // below min
  g[1] = 1.0;  // at max
  g[2] = 7.0;  // above max
  g[3] = 0.25;
  io::export_png(dir / "clamp.png", g, io::Window{0, 1});
  auto const c = read_png_gray(dir / "clamp.png", h, w);
  CHECK(c[0] == 0);
  CHECK(c[1] == 255);
  CHECK(c[2] == 255);
  CHECK(c[3] == 64); // 63.75 rounds to 64

  // auto window is [0, peak]
  RealGrid a(1, 2);
  a[0] = 2.0;
  a[1] = 1.0;
  auto const bytes = io::window_to_bytes(a);
  CHECK(bytes[0] == 255);
  CHECK(bytes[1] == 128);

  CHECK_THROWS_AS(io::window_to_bytes(a, io::Window{1, 1}), ParameterError);
  CHECK(no_temp_files(dir));
}
