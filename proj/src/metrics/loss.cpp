#include "afb/metrics/loss.hpp"

#include "afb/metrics/metrics.hpp"

#include <cmath>

namespace afb {

RealGrid ModalityMapping::apply(RealGrid const &x) const
{
  auto out = decode(translate(encode(x)));
  x.require_same_shape(out, "modality mapping");
  return out;
}

RealGrid AffineStage::operator()(RealGrid const &x) const
{
  RealGrid out(x.height(), x.width());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = scale * x[i] + offset;
  }
  return out;
}

AffineMapping::AffineMapping(AffineStage encode, AffineStage translate, AffineStage decode)
  : encode_{encode}
  , translate_{translate}
  , decode_{decode}
{
}

void LossWeights::validate() const
{
  for (double l : {lambda1, lambda2, lambda3}) {
    if (!std::isfinite(l) || l < 0.0) {
      throw ParameterError("loss weights must be finite and nonnegative");
    }
  }
}

namespace {

double squared_distance(RealGrid const &a, RealGrid const &b)
{
  a.require_same_shape(b, "composite_loss");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double const d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

} // namespace

LossBreakdown composite_loss(RealGrid const &x0, RealGrid const &x1, RealGrid const &ref0, RealGrid const &ref1,
                             ModalityMapping const &mapping, LossWeights const &weights)
{
  weights.validate();
  x0.require_same_shape(x1, "composite_loss");
  x0.require_same_shape(ref0, "composite_loss");
  x0.require_same_shape(ref1, "composite_loss");

  LossBreakdown out;
  out.synthesis = squared_distance(x0, ref0);
  out.perceptual = weights.lambda1 * (1.0 - ssim(ref0, x0));
  out.consistency = weights.lambda2 * squared_distance(mapping.apply(x1), ref0);
  out.reconstruction = weights.lambda3 * squared_distance(x1, ref1);
  out.total = out.synthesis + out.perceptual + out.consistency + out.reconstruction;
  return out;
}

} // namespace afb
