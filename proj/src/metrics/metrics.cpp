#include "afb/metrics/metrics.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace afb {

namespace {

constexpr std::size_t kWindow = 11;
constexpr double kWindowStd = 1.5;
constexpr double kK1 = 0.01;
constexpr double kK2 = 0.03;

std::array<double, kWindow> gaussian_taps()
{
  std::array<double, kWindow> taps{};
  double sum = 0.0;
  for (std::size_t i = 0; i < kWindow; ++i) {
    double const d = static_cast<double>(i) - static_cast<double>(kWindow / 2);
    taps[i] = std::exp(-d * d / (2.0 * kWindowStd * kWindowStd));
    sum += taps[i];
  }
  for (auto &t : taps) {
    t /= sum;
  }
  return taps;
}

// Separable 'valid' correlation with the Gaussian window.
RealGrid filter_valid(RealGrid const &in, std::array<double, kWindow> const &taps)
{
  std::size_t const oh = in.height() - kWindow + 1;
  std::size_t const ow = in.width() - kWindow + 1;
  RealGrid rows(in.height(), ow);
  for (std::size_t r = 0; r < in.height(); ++r) {
    for (std::size_t c = 0; c < ow; ++c) {
      double s = 0.0;
      for (std::size_t k = 0; k < kWindow; ++k) {
        s += taps[k] * in(r, c + k);
      }
      rows(r, c) = s;
    }
  }
  RealGrid out(oh, ow);
  for (std::size_t r = 0; r < oh; ++r) {
    for (std::size_t c = 0; c < ow; ++c) {
      double s = 0.0;
      for (std::size_t k = 0; k < kWindow; ++k) {
        s += taps[k] * rows(r + k, c);
      }
      out(r, c) = s;
    }
  }
  return out;
}

RealGrid product(RealGrid const &a, RealGrid const &b)
{
  RealGrid out(a.height(), a.width());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = a[i] * b[i];
  }
  return out;
}

} // namespace

double peak(RealGrid const &img)
{
  double p = 0.0;
  for (double v : img.values()) {
    p = std::max(p, std::abs(v));
  }
  return p;
}

double mse(RealGrid const &a, RealGrid const &b)
{
  a.require_same_shape(b, "mse");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double const d = a[i] - b[i];
    sum += d * d;
  }
  return sum / static_cast<double>(a.size());
}

double psnr(RealGrid const &ref, RealGrid const &test)
{
  ref.require_same_shape(test, "psnr");
  double const p = peak(ref);
  if (p == 0.0) {
    throw ParameterError("psnr: reference image is all zero");
  }
  double const err = mse(ref, test);
  if (err == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return 10.0 * std::log10(p * p / err);
}

double ssim(RealGrid const &ref, RealGrid const &test) { return ssim(ref, test, peak(ref)); }

double ssim(RealGrid const &ref, RealGrid const &test, double dynamic_range)
{
  ref.require_same_shape(test, "ssim");
  if (ref.height() < kWindow || ref.width() < kWindow) {
    throw ParameterError("ssim: image " + ref.shape_string() + " is smaller than the 11x11 window");
  }
  if (!(dynamic_range > 0.0)) {
    throw ParameterError("ssim: dynamic range must be positive");
  }
  double const c1 = (kK1 * dynamic_range) * (kK1 * dynamic_range);
  double const c2 = (kK2 * dynamic_range) * (kK2 * dynamic_range);

  auto const taps = gaussian_taps();
  auto const mu_x = filter_valid(ref, taps);
  auto const mu_y = filter_valid(test, taps);
  auto const e_xx = filter_valid(product(ref, ref), taps);
  auto const e_yy = filter_valid(product(test, test), taps);
  auto const e_xy = filter_valid(product(ref, test), taps);

  double sum = 0.0;
  for (std::size_t i = 0; i < mu_x.size(); ++i) {
    double const mx = mu_x[i], my = mu_y[i];
    double const vx = e_xx[i] - mx * mx;
    double const vy = e_yy[i] - my * my;
    double const cxy = e_xy[i] - mx * my;
    sum += ((2.0 * mx * my + c1) * (2.0 * cxy + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
  }
  return sum / static_cast<double>(mu_x.size());
}

double ssim_symmetric(RealGrid const &a, RealGrid const &b)
{
  return ssim(a, b, std::max(peak(a), peak(b)));
}

double relative_error(RealGrid const &ref, RealGrid const &test)
{
  ref.require_same_shape(test, "relative_error");
  double const denom = norm(ref);
  if (denom == 0.0) {
    throw ParameterError("relative_error: reference has zero norm");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    double const d = test[i] - ref[i];
    sum += d * d;
  }
  return std::sqrt(sum) / denom;
}

MetricReport evaluate(RealGrid const &ref, RealGrid const &test)
{
  return MetricReport{psnr(ref, test), ssim(ref, test), relative_error(ref, test)};
}

MetricReport evaluate(ComplexGrid const &ref, ComplexGrid const &test)
{
  return evaluate(magnitude(ref), magnitude(test));
}

} // namespace afb
