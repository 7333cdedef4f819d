#include "afb/model/regularizer.hpp"

#include <cmath>

namespace afb {

std::string to_string(RegularizerFamily family)
{
  switch (family) {
  case RegularizerFamily::SmoothedTV: return "smoothed-tv";
  case RegularizerFamily::SmoothedLogTV: return "smoothed-log-tv";
  }
  return "smoothed-tv";
}

RegularizerFamily parse_regularizer_family(std::string_view name)
{
  if (name == "smoothed-tv" || name == "tv") return RegularizerFamily::SmoothedTV;
  if (name == "smoothed-log-tv" || name == "log-tv") return RegularizerFamily::SmoothedLogTV;
  throw ParameterError("unknown regularizer family '" + std::string(name) + "'");
}

void Regularizer::validate() const
{
  if (!std::isfinite(weight) || weight < 0.0) {
    throw ParameterError("regularizer weight must be finite and nonnegative, got " + std::to_string(weight));
  }
}

namespace {

void require_eta(double eta)
{
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw ParameterError("smoothing parameter eta must be positive and finite, got " + std::to_string(eta));
  }
}

Cx dh(ComplexGrid const &x, std::size_t r, std::size_t c)
{
  return x(r, (c + 1) % x.width()) - x(r, c);
}

Cx dv(ComplexGrid const &x, std::size_t r, std::size_t c)
{
  return x((r + 1) % x.height(), c) - x(r, c);
}

// d r / d psi at one pixel.
double psi_weight(RegularizerFamily family, double psi, double eta)
{
  return family == RegularizerFamily::SmoothedTV ? 1.0 : 2.0 * eta / (eta + psi);
}

} // namespace

double Regularizer::value(ComplexGrid const &x, double eta) const
{
  require_eta(eta);
  double sum = 0.0;
  for (std::size_t r = 0; r < x.height(); ++r) {
    for (std::size_t c = 0; c < x.width(); ++c) {
      double const g2 = std::norm(dh(x, r, c)) + std::norm(dv(x, r, c));
      if (family == RegularizerFamily::SmoothedTV) {
        // sqrt(g2 + eta^2) - eta without cancellation
        sum += g2 / (std::sqrt(g2 + eta * eta) + eta);
      } else {
        double const psi = std::sqrt(g2 + eta * eta);
        sum += 2.0 * eta * std::log1p((psi - eta) / (2.0 * eta));
      }
    }
  }
  return sum;
}

ComplexGrid Regularizer::gradient(ComplexGrid const &x, double eta) const
{
  require_eta(eta);
  std::size_t const h = x.height(), w = x.width();
  // Per pixel: p_h = w(psi) Dh x / psi, p_v likewise; grad = Dh^H p_h + Dv^H p_v
  ComplexGrid ph(h, w), pv(h, w);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      Cx const a = dh(x, r, c), b = dv(x, r, c);
      double const psi = std::sqrt(std::norm(a) + std::norm(b) + eta * eta);
      double const s = psi_weight(family, psi, eta) / psi;
      ph(r, c) = s * a;
      pv(r, c) = s * b;
    }
  }
  ComplexGrid grad(h, w);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      // D^H p (r,c) = p(r, c-1) - p(r, c) for the horizontal stencil
      grad(r, c) = ph(r, (c + w - 1) % w) - ph(r, c) + pv((r + h - 1) % h, c) - pv(r, c);
    }
  }
  return grad;
}

double total_variation(ComplexGrid const &x)
{
  double sum = 0.0;
  for (std::size_t r = 0; r < x.height(); ++r) {
    for (std::size_t c = 0; c < x.width(); ++c) {
      sum += std::sqrt(std::norm(dh(x, r, c)) + std::norm(dv(x, r, c)));
    }
  }
  return sum;
}

} // namespace afb
