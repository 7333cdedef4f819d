#pragma once

#include "afb/acquisition/mask.hpp"
#include "afb/numerics/grid.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace afb::io {

/* Two-file grid container. For a base path P:
 *   P.json  header {"dims":[C?,H,W], "dtype":"complex64"|"float32",
 *                   "order":"row-major", "endian":"little",
 *                   "kind":"image"|"kspace"|"mask"|"maps"}
 *   P.bin   32-bit little-endian floats, row-major, coil-major when C is
 *           present; complex values interleaved (re, im).
 * Both files are written to temporaries and renamed into place, payload
 * first, so a visible header always describes a complete payload.
 * k-space planes are stored in FFT-native order, masks in centered order. */

enum class GridKind
{
  Image,
  Kspace,
  Mask,
  Maps,
};

enum class DType
{
  Complex64,
  Float32,
};

std::string to_string(GridKind kind);
std::string to_string(DType dtype);

struct GridHeader
{
  std::vector<std::size_t> dims; // [H, W] or [C, H, W]
  DType dtype = DType::Complex64;
  GridKind kind = GridKind::Image;

  std::size_t planes() const { return dims.size() == 3 ? dims[0] : 1; }
  std::size_t height() const { return dims[dims.size() - 2]; }
  std::size_t width() const { return dims.back(); }
  std::size_t element_count() const;
  std::size_t payload_bytes() const;
};

struct LoadedGrid
{
  GridHeader header;
  std::vector<Cx> values; // float32 data has zero imaginary parts

  ComplexGrid image() const;              // requires 2 dims
  std::vector<ComplexGrid> stack() const; // any dims; 2 dims gives one plane
  RealGrid real() const;                  // requires float32, 2 dims
};

std::filesystem::path header_path(std::filesystem::path const &base);
std::filesystem::path payload_path(std::filesystem::path const &base);

void save_grid(std::filesystem::path const &base, ComplexGrid const &grid, GridKind kind = GridKind::Image);
void save_grid(std::filesystem::path const &base, RealGrid const &grid, GridKind kind = GridKind::Image);
void save_stack(std::filesystem::path const &base, std::span<ComplexGrid const> planes, GridKind kind);
void save_mask(std::filesystem::path const &base, SamplingMask const &mask);

LoadedGrid load_grid(std::filesystem::path const &base);
ComplexGrid load_image(std::filesystem::path const &base);
std::vector<ComplexGrid> load_stack(std::filesystem::path const &base);
// Values must be exactly 0 or 1; the result has kind External.
SamplingMask load_mask(std::filesystem::path const &base);

// Writes `contents` to a temporary next to `target`, then renames it.
void write_file_atomic(std::filesystem::path const &target, std::string const &contents);

} // namespace afb::io
