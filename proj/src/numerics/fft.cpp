#include "afb/numerics/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace afb {

namespace {

// FFTW planning is not thread-safe, execution on new arrays is. Plans are
// in-place and unaligned so they apply to any std::vector buffer.
fftw_plan plan_for(std::size_t h, std::size_t w, int sign)
{
  static std::mutex mutex;
  static std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> cache;

  std::lock_guard lock(mutex);
  auto const key = std::make_tuple(h, w, sign);
  if (auto it = cache.find(key); it != cache.end()) {
    return it->second;
  }
  auto *scratch = fftw_alloc_complex(h * w);
  fftw_plan plan = fftw_plan_dft_2d(static_cast<int>(h), static_cast<int>(w), scratch, scratch, sign,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(scratch);
  cache.emplace(key, plan);
  return plan;
}

ComplexGrid transform(ComplexGrid const &in, int sign)
{
  ComplexGrid out = in;
  auto *buf = reinterpret_cast<fftw_complex *>(out.data());
  fftw_execute_dft(plan_for(in.height(), in.width(), sign), buf, buf);
  double const scale = 1.0 / std::sqrt(static_cast<double>(in.size()));
  out *= Cx{scale, 0.0};
  return out;
}

} // namespace

ComplexGrid fft2(ComplexGrid const &img) { return transform(img, FFTW_FORWARD); }

ComplexGrid ifft2(ComplexGrid const &ksp) { return transform(ksp, FFTW_BACKWARD); }

} // namespace afb
