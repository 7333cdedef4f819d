#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace afb {

/* Seeded generator whose draws are identical on every platform.
 * std::mt19937_64 output is fixed by the standard; the std:: distributions
 * are not, so the few we need are written out here. */
class Rng
{
public:
  explicit Rng(std::uint64_t seed)
    : engine_{seed}
  {
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n), rejection sampled to avoid modulo bias.
  std::uint64_t below(std::uint64_t n)
  {
    std::uint64_t const limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

  // Standard normal via Box-Muller; the second value is cached.
  double normal()
  {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    double const u2 = uniform();
    double const r = std::sqrt(-2.0 * std::log(u1));
    double const t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

} // namespace afb
