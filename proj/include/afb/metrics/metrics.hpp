#pragma once

#include "afb/numerics/grid.hpp"

namespace afb {

struct MetricReport
{
  double psnr_db = 0.0; // +inf when the images are identical
  double ssim = 0.0;
  double rel_err = 0.0;
};

// Largest absolute pixel value.
double peak(RealGrid const &img);

double mse(RealGrid const &a, RealGrid const &b);

// 10 log10(peak(ref)^2 / MSE); +inf for MSE = 0. Throws on an all-zero ref.
double psnr(RealGrid const &ref, RealGrid const &test);

/* Mean SSIM over all valid 11x11 windows (Gaussian weights, std 1.5),
 * K1 = 0.01, K2 = 0.03. The first overload takes the dynamic range from
 * peak(ref); ssim_symmetric uses max(peak(a), peak(b)) so that swapping
 * the arguments gives the same value. */
double ssim(RealGrid const &ref, RealGrid const &test);
double ssim(RealGrid const &ref, RealGrid const &test, double dynamic_range);
double ssim_symmetric(RealGrid const &a, RealGrid const &b);

// ||test - ref|| / ||ref||
double relative_error(RealGrid const &ref, RealGrid const &test);

MetricReport evaluate(RealGrid const &ref, RealGrid const &test);

// Reduces both images to per-pixel magnitude first.
MetricReport evaluate(ComplexGrid const &ref, ComplexGrid const &test);

} // namespace afb
