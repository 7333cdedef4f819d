#include "afb/io/png.hpp"

#include "afb/errors.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <unistd.h>

namespace afb::io {

std::vector<std::uint8_t> window_to_bytes(RealGrid const &grid, std::optional<Window> window)
{
  Window w;
  if (window) {
    if (!(window->min < window->max)) {
      throw ParameterError("png window requires min < max");
    }
    w = *window;
  } else {
    double peak = 0.0;
    for (double v : grid.values()) {
      peak = std::max(peak, std::abs(v));
    }
    w = Window{0.0, peak > 0.0 ? peak : 1.0};
  }

  std::vector<std::uint8_t> out(grid.size());
  double const span = w.max - w.min;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double const t = std::clamp((grid[i] - w.min) / span, 0.0, 1.0);
    out[i] = static_cast<std::uint8_t>(std::round(t * 255.0));
  }
  return out;
}

void export_png(std::filesystem::path const &path, RealGrid const &grid, std::optional<Window> window)
{
  auto const bytes = window_to_bytes(grid, window);

  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  std::unique_ptr<FILE, int (*)(FILE *)> file(std::fopen(tmp.c_str(), "wb"), &std::fclose);
  if (!file) {
    throw IoError("cannot open " + tmp.string() + " for writing");
  }
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng initialisation failed for " + path.string());
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng failed while writing " + path.string());
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(grid.width()), static_cast<png_uint_32>(grid.height()), 8,
               PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (std::size_t r = 0; r < grid.height(); ++r) {
    png_write_row(png, const_cast<png_bytep>(bytes.data() + r * grid.width()));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  file.reset();

  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw IoError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

} // namespace afb::io
