#include "afb/model/forward_model.hpp"

#include "afb/numerics/fft.hpp"
#include "afb/numerics/random.hpp"

namespace afb {

ForwardModel::ForwardModel(SamplingMask const &mask, CoilSet const &coils)
  : weights_{mask.native_weights()}
  , maps_{coils.maps}
  , measurements_{coils.kspace}
{
  coils.validate();
  if (!weights_.same_shape(maps_.front())) {
    throw DimensionError("forward model: mask " + weights_.shape_string() + " vs coil maps " +
                         maps_.front().shape_string());
  }
  if (measurements_.empty()) {
    measurements_.assign(maps_.size(), ComplexGrid(height(), width()));
  }
  for (std::size_t c = 0; c < measurements_.size(); ++c) {
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      if (weights_[i] == 0.0 && measurements_[c][i] != Cx{0.0, 0.0}) {
        throw ParameterError("coil " + std::to_string(c) + " has a nonzero measurement outside the mask");
      }
    }
  }
}

void ForwardModel::require_image_shape(ComplexGrid const &x, char const *what) const
{
  if (x.height() != height() || x.width() != width()) {
    throw DimensionError(std::string(what) + ": image " + x.shape_string() + " vs model " +
                         weights_.shape_string());
  }
}

CoilKspace ForwardModel::forward(ComplexGrid const &x) const
{
  require_image_shape(x, "forward");
  CoilKspace out;
  out.reserve(maps_.size());
  for (auto const &map : maps_) {
    ComplexGrid weighted = x;
    for (std::size_t i = 0; i < weighted.size(); ++i) {
      weighted[i] *= map[i];
    }
    ComplexGrid ksp = fft2(weighted);
    for (std::size_t i = 0; i < ksp.size(); ++i) {
      ksp[i] *= weights_[i];
    }
    out.push_back(std::move(ksp));
  }
  return out;
}

ComplexGrid ForwardModel::adjoint(CoilKspace const &ksp) const
{
  if (ksp.size() != maps_.size()) {
    throw DimensionError("adjoint: got " + std::to_string(ksp.size()) + " coil planes, model has " +
                         std::to_string(maps_.size()));
  }
  ComplexGrid out(height(), width());
  for (std::size_t c = 0; c < maps_.size(); ++c) {
    weights_.require_same_shape(ksp[c], "adjoint");
    ComplexGrid masked = ksp[c];
    for (std::size_t i = 0; i < masked.size(); ++i) {
      masked[i] *= weights_[i];
    }
    ComplexGrid const img = ifft2(masked);
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] += std::conj(maps_[c][i]) * img[i];
    }
  }
  return out;
}

double ForwardModel::fidelity(ComplexGrid const &x) const
{
  auto const ax = forward(x);
  double sum = 0.0;
  for (std::size_t c = 0; c < ax.size(); ++c) {
    for (std::size_t i = 0; i < ax[c].size(); ++i) {
      sum += std::norm(ax[c][i] - measurements_[c][i]);
    }
  }
  return 0.5 * sum;
}

ComplexGrid ForwardModel::grad_fidelity(ComplexGrid const &x) const
{
  auto residual = forward(x);
  for (std::size_t c = 0; c < residual.size(); ++c) {
    residual[c] -= measurements_[c];
  }
  return adjoint(residual);
}

double lipschitz_estimate(ForwardModel const &model, int iterations)
{
  Rng rng(0x5eed);
  ComplexGrid v(model.height(), model.width());
  for (auto &p : v.values()) {
    double const re = rng.normal();
    double const im = rng.normal();
    p = Cx{re, im};
  }
  v *= Cx{1.0 / norm(v), 0.0};

  double estimate = 0.0;
  for (int it = 0; it < iterations; ++it) {
    ComplexGrid w = model.adjoint(model.forward(v));
    estimate = inner_re(v, w); // Rayleigh quotient, ||v|| = 1
    double const len = norm(w);
    if (len == 0.0) {
      return 0.0;
    }
    v = std::move(w);
    v *= Cx{1.0 / len, 0.0};
  }
  return estimate;
}

} // namespace afb
