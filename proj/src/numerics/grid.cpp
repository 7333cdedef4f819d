#include "afb/numerics/grid.hpp"

#include <cmath>

namespace afb {

ComplexGrid axpy(ComplexGrid const &x, double scale, ComplexGrid const &d)
{
  x.require_same_shape(d, "axpy");
  ComplexGrid out(x.height(), x.width());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = x[i] + scale * d[i];
  }
  return out;
}

Cx inner(ComplexGrid const &a, ComplexGrid const &b)
{
  a.require_same_shape(b, "inner");
  Cx sum{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum += std::conj(a[i]) * b[i];
  }
  return sum;
}

double inner_re(ComplexGrid const &a, ComplexGrid const &b)
{
  a.require_same_shape(b, "inner_re");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  }
  return sum;
}

double norm_sq(ComplexGrid const &a)
{
  double sum = 0.0;
  for (auto const &v : a.values()) {
    sum += std::norm(v);
  }
  return sum;
}

double norm(ComplexGrid const &a) { return std::sqrt(norm_sq(a)); }

double norm(RealGrid const &a)
{
  double sum = 0.0;
  for (double v : a.values()) {
    sum += v * v;
  }
  return std::sqrt(sum);
}

bool all_finite(ComplexGrid const &a)
{
  return std::all_of(a.values().begin(), a.values().end(),
                     [](Cx const &v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

bool all_finite(RealGrid const &a)
{
  return std::all_of(a.values().begin(), a.values().end(), [](double v) { return std::isfinite(v); });
}

RealGrid magnitude(ComplexGrid const &a)
{
  RealGrid out(a.height(), a.width());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = std::abs(a[i]);
  }
  return out;
}

ComplexGrid to_complex(RealGrid const &a)
{
  ComplexGrid out(a.height(), a.width());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = Cx{a[i], 0.0};
  }
  return out;
}

} // namespace afb
