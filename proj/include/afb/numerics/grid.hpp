#pragma once

#include "afb/errors.hpp"

#include <algorithm>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace afb {

using Cx = std::complex<double>;

/* Dense H x W field stored row-major. Used for images (x, z, u, ...) and for
 * k-space planes. Pixel (row, col) lives at index row * width + col.
 */
template <typename T>
class Grid
{
public:
  using value_type = T;

  Grid(std::size_t height, std::size_t width, T fill = T{})
    : height_{height}
    , width_{width}
  {
    if (height == 0 || width == 0) {
      throw DimensionError("grid dimensions must be at least 1x1, got " + std::to_string(height) + "x" +
                           std::to_string(width));
    }
    values_.assign(height * width, fill);
  }

  Grid(std::size_t height, std::size_t width, std::vector<T> values)
    : height_{height}
    , width_{width}
    , values_{std::move(values)}
  {
    if (height == 0 || width == 0) {
      throw DimensionError("grid dimensions must be at least 1x1");
    }
    if (values_.size() != height * width) {
      throw DimensionError("grid value count " + std::to_string(values_.size()) + " does not match " +
                           std::to_string(height) + "x" + std::to_string(width));
    }
  }

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t size() const { return values_.size(); }

  T &operator()(std::size_t row, std::size_t col) { return values_[row * width_ + col]; }
  T const &operator()(std::size_t row, std::size_t col) const { return values_[row * width_ + col]; }
  T &operator[](std::size_t i) { return values_[i]; }
  T const &operator[](std::size_t i) const { return values_[i]; }

  std::span<T> values() { return values_; }
  std::span<T const> values() const { return values_; }
  T *data() { return values_.data(); }
  T const *data() const { return values_.data(); }

  template <typename U>
  bool same_shape(Grid<U> const &other) const
  {
    return height_ == other.height() && width_ == other.width();
  }

  std::string shape_string() const { return std::to_string(height_) + "x" + std::to_string(width_); }

  Grid &operator+=(Grid const &rhs)
  {
    require_same_shape(rhs, "+=");
    for (std::size_t i = 0; i < values_.size(); ++i) {
      values_[i] += rhs.values_[i];
    }
    return *this;
  }

  Grid &operator-=(Grid const &rhs)
  {
    require_same_shape(rhs, "-=");
    for (std::size_t i = 0; i < values_.size(); ++i) {
      values_[i] -= rhs.values_[i];
    }
    return *this;
  }

  Grid &operator*=(T scale)
  {
    for (auto &v : values_) {
      v *= scale;
    }
    return *this;
  }

  friend Grid operator+(Grid lhs, Grid const &rhs) { return lhs += rhs; }
  friend Grid operator-(Grid lhs, Grid const &rhs) { return lhs -= rhs; }
  friend Grid operator*(T scale, Grid g) { return g *= scale; }

  bool operator==(Grid const &) const = default;

  template <typename U>
  void require_same_shape(Grid<U> const &other, char const *what) const
  {
    if (!same_shape(other)) {
      throw DimensionError(std::string(what) + ": shape mismatch " + shape_string() + " vs " +
                           other.shape_string());
    }
  }

private:
  std::size_t height_;
  std::size_t width_;
  std::vector<T> values_;
};

using ComplexGrid = Grid<Cx>;
using RealGrid = Grid<double>;

/// Returns x + scale * d, the building block of every solver step.
ComplexGrid axpy(ComplexGrid const &x, double scale, ComplexGrid const &d);

/// Sum of conj(a) * b over all pixels.
Cx inner(ComplexGrid const &a, ComplexGrid const &b);

/// Real part of inner(a, b); the inner product on C^n viewed as R^2n.
double inner_re(ComplexGrid const &a, ComplexGrid const &b);

double norm_sq(ComplexGrid const &a);
double norm(ComplexGrid const &a);
double norm(RealGrid const &a);

bool all_finite(ComplexGrid const &a);
bool all_finite(RealGrid const &a);

// Per-pixel modulus; metrics are evaluated on the result.
RealGrid magnitude(ComplexGrid const &a);

ComplexGrid to_complex(RealGrid const &a);

/* Conversions between the centered k-space convention (DC at row H/2,
 * column W/2) and the FFT-native one (DC at index 0). */
template <typename T>
Grid<T> ifftshift(Grid<T> const &centered)
{
  Grid<T> native(centered.height(), centered.width());
  std::size_t const h = centered.height(), w = centered.width();
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      native(r, c) = centered((r + h / 2) % h, (c + w / 2) % w);
    }
  }
  return native;
}

template <typename T>
Grid<T> fftshift(Grid<T> const &native)
{
  Grid<T> centered(native.height(), native.width());
  std::size_t const h = native.height(), w = native.width();
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      centered((r + h / 2) % h, (c + w / 2) % w) = native(r, c);
    }
  }
  return centered;
}

} // namespace afb
