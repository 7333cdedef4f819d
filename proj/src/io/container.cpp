#include "afb/io/container.hpp"

#include "afb/errors.hpp"

#include <nlohmann/json.hpp>

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace afb::io {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::string to_string(GridKind kind)
{
  switch (kind) {
  case GridKind::Image: return "image";
  case GridKind::Kspace: return "kspace";
  case GridKind::Mask: return "mask";
  case GridKind::Maps: return "maps";
  }
  return "image";
}

std::string to_string(DType dtype) { return dtype == DType::Complex64 ? "complex64" : "float32"; }

std::size_t GridHeader::element_count() const
{
  std::size_t n = 1;
  for (auto d : dims) {
    n *= d;
  }
  return n;
}

std::size_t GridHeader::payload_bytes() const
{
  return element_count() * (dtype == DType::Complex64 ? 8 : 4);
}

ComplexGrid LoadedGrid::image() const
{
  if (header.dims.size() != 2) {
    throw FormatError("dims: expected an [H, W] image, got " + std::to_string(header.dims.size()) +
                      " dimensions");
  }
  return ComplexGrid(header.height(), header.width(), values);
}

std::vector<ComplexGrid> LoadedGrid::stack() const
{
  std::size_t const plane = header.height() * header.width();
  std::vector<ComplexGrid> out;
  for (std::size_t c = 0; c < header.planes(); ++c) {
    std::vector<Cx> v(values.begin() + static_cast<std::ptrdiff_t>(c * plane),
                      values.begin() + static_cast<std::ptrdiff_t>((c + 1) * plane));
    out.emplace_back(header.height(), header.width(), std::move(v));
  }
  return out;
}

RealGrid LoadedGrid::real() const
{
  if (header.dtype != DType::Float32) {
    throw FormatError("dtype: expected float32, got " + to_string(header.dtype));
  }
  if (header.dims.size() != 2) {
    throw FormatError("dims: expected an [H, W] grid");
  }
  RealGrid out(header.height(), header.width());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = values[i].real();
  }
  return out;
}

fs::path header_path(fs::path const &base)
{
  auto p = base;
  p += ".json";
  return p;
}

fs::path payload_path(fs::path const &base)
{
  auto p = base;
  p += ".bin";
  return p;
}

void write_file_atomic(fs::path const &target, std::string const &contents)
{
  auto tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot open " + tmp.string() + " for writing");
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      throw IoError("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw IoError("cannot move " + tmp.string() + " to " + target.string() + ": " + ec.message());
  }
}

namespace {

void append_float(std::string &out, float v)
{
  auto bits = std::bit_cast<std::uint32_t>(v);
  if constexpr (std::endian::native == std::endian::big) {
    bits = __builtin_bswap32(bits);
  }
  char bytes[4];
  std::memcpy(bytes, &bits, 4);
  out.append(bytes, 4);
}

float read_float(char const *p)
{
  std::uint32_t bits;
  std::memcpy(&bits, p, 4);
  if constexpr (std::endian::native == std::endian::big) {
    bits = __builtin_bswap32(bits);
  }
  return std::bit_cast<float>(bits);
}

void write_pair(fs::path const &base, GridHeader const &header, std::string const &payload)
{
  ordered_json j;
  j["dims"] = header.dims;
  j["dtype"] = to_string(header.dtype);
  j["order"] = "row-major";
  j["endian"] = "little";
  j["kind"] = to_string(header.kind);
  write_file_atomic(payload_path(base), payload);
  write_file_atomic(header_path(base), j.dump(2) + "\n");
}

std::string complex_payload(std::span<ComplexGrid const> planes)
{
  std::string payload;
  for (auto const &g : planes) {
    for (auto const &v : g.values()) {
      append_float(payload, static_cast<float>(v.real()));
      append_float(payload, static_cast<float>(v.imag()));
    }
  }
  return payload;
}

std::string read_all(fs::path const &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GridHeader parse_header(fs::path const &path)
{
  json j;
  try {
    j = json::parse(read_all(path));
  } catch (json::parse_error const &e) {
    throw FormatError(path.string() + ": header is not valid JSON: " + e.what());
  }
  if (!j.is_object()) {
    throw FormatError(path.string() + ": header must be a JSON object");
  }
  for (auto const &[key, _] : j.items()) {
    if (key != "dims" && key != "dtype" && key != "order" && key != "endian" && key != "kind") {
      throw FormatError(path.string() + ": unknown header field '" + key + "'");
    }
  }
  auto field = [&](char const *name) -> json const & {
    if (!j.contains(name)) {
      throw FormatError(path.string() + ": missing header field '" + name + "'");
    }
    return j.at(name);
  };
  auto string_field = [&](char const *name) {
    auto const &v = field(name);
    if (!v.is_string()) {
      throw FormatError(path.string() + ": header field '" + name + "' must be a string");
    }
    return v.get<std::string>();
  };

  GridHeader h;
  auto const &dims = field("dims");
  if (!dims.is_array() || (dims.size() != 2 && dims.size() != 3)) {
    throw FormatError(path.string() + ": header field 'dims' must be an array of 2 or 3 extents");
  }
  for (auto const &d : dims) {
    if (!d.is_number_unsigned() || d.get<std::size_t>() == 0) {
      throw FormatError(path.string() + ": header field 'dims' must hold positive integers");
    }
    h.dims.push_back(d.get<std::size_t>());
  }

  auto const dtype = string_field("dtype");
  if (dtype == "complex64") {
    h.dtype = DType::Complex64;
  } else if (dtype == "float32") {
    h.dtype = DType::Float32;
  } else {
    throw FormatError(path.string() + ": unknown dtype '" + dtype + "' in header field 'dtype'");
  }
  if (string_field("order") != "row-major") {
    throw FormatError(path.string() + ": header field 'order' must be \"row-major\"");
  }
  if (string_field("endian") != "little") {
    throw FormatError(path.string() + ": header field 'endian' must be \"little\"");
  }
  auto const kind = string_field("kind");
  if (kind == "image") {
    h.kind = GridKind::Image;
  } else if (kind == "kspace") {
    h.kind = GridKind::Kspace;
  } else if (kind == "mask") {
    h.kind = GridKind::Mask;
  } else if (kind == "maps") {
    h.kind = GridKind::Maps;
  } else {
    throw FormatError(path.string() + ": unknown kind '" + kind + "' in header field 'kind'");
  }
  return h;
}

} // namespace

void save_grid(fs::path const &base, ComplexGrid const &grid, GridKind kind)
{
  GridHeader h{{grid.height(), grid.width()}, DType::Complex64, kind};
  write_pair(base, h, complex_payload(std::span<ComplexGrid const>(&grid, 1)));
}

void save_grid(fs::path const &base, RealGrid const &grid, GridKind kind)
{
  GridHeader h{{grid.height(), grid.width()}, DType::Float32, kind};
  std::string payload;
  payload.reserve(grid.size() * 4);
  for (double v : grid.values()) {
    append_float(payload, static_cast<float>(v));
  }
  write_pair(base, h, payload);
}

void save_stack(fs::path const &base, std::span<ComplexGrid const> planes, GridKind kind)
{
  if (planes.empty()) {
    throw DimensionError("save_stack: no planes to save");
  }
  for (auto const &p : planes) {
    planes.front().require_same_shape(p, "save_stack");
  }
  GridHeader h{{planes.size(), planes.front().height(), planes.front().width()}, DType::Complex64, kind};
  write_pair(base, h, complex_payload(planes));
}

void save_mask(fs::path const &base, SamplingMask const &mask)
{
  RealGrid g(mask.height(), mask.width());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = mask.kept[i] ? 1.0 : 0.0;
  }
  save_grid(base, g, GridKind::Mask);
}

LoadedGrid load_grid(fs::path const &base)
{
  LoadedGrid out;
  out.header = parse_header(header_path(base));
  auto const payload = read_all(payload_path(base));
  if (payload.size() != out.header.payload_bytes()) {
    throw FormatError(payload_path(base).string() + ": payload length mismatch, header dims imply " +
                      std::to_string(out.header.payload_bytes()) + " bytes, found " +
                      std::to_string(payload.size()));
  }
  std::size_t const n = out.header.element_count();
  out.values.resize(n);
  char const *p = payload.data();
  for (std::size_t i = 0; i < n; ++i) {
    if (out.header.dtype == DType::Complex64) {
      out.values[i] = Cx{read_float(p), read_float(p + 4)};
      p += 8;
    } else {
      out.values[i] = Cx{read_float(p), 0.0};
      p += 4;
    }
  }
  return out;
}

ComplexGrid load_image(fs::path const &base) { return load_grid(base).image(); }

std::vector<ComplexGrid> load_stack(fs::path const &base) { return load_grid(base).stack(); }

SamplingMask load_mask(fs::path const &base)
{
  auto const loaded = load_grid(base);
  if (loaded.header.kind != GridKind::Mask) {
    throw FormatError(header_path(base).string() + ": header field 'kind' is '" + to_string(loaded.header.kind) +
                      "', expected 'mask'");
  }
  auto const g = loaded.real();
  SamplingMask mask{Grid<std::uint8_t>(g.height(), g.width(), 0), MaskKind::External, 0, 0, 0};
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] != 0.0 && g[i] != 1.0) {
      throw FormatError(payload_path(base).string() + ": mask values must be 0 or 1");
    }
    mask.kept[i] = g[i] == 1.0 ? 1 : 0;
  }
  return mask;
}

} // namespace afb::io
