#pragma once

#include "afb/numerics/grid.hpp"

namespace afb {

/* The three stages g1, G, g~0 of the cross-domain mapping applied to the
 * reconstruction before it is compared with the synthesis reference:
 * g~0(G(g1(x1))). Each stage must preserve the grid shape. */
class ModalityMapping
{
public:
  virtual ~ModalityMapping() = default;

  virtual RealGrid encode(RealGrid const &x) const = 0;    // g1
  virtual RealGrid translate(RealGrid const &x) const = 0; // G
  virtual RealGrid decode(RealGrid const &x) const = 0;    // g~0

  RealGrid apply(RealGrid const &x) const;
};

class IdentityMapping final : public ModalityMapping
{
public:
  RealGrid encode(RealGrid const &x) const override { return x; }
  RealGrid translate(RealGrid const &x) const override { return x; }
  RealGrid decode(RealGrid const &x) const override { return x; }
};

struct AffineStage
{
  double scale = 1.0;
  double offset = 0.0;

  RealGrid operator()(RealGrid const &x) const;
};

// Per-pixel a * x + b at each stage.
class AffineMapping final : public ModalityMapping
{
public:
  AffineMapping(AffineStage encode, AffineStage translate, AffineStage decode);

  RealGrid encode(RealGrid const &x) const override { return encode_(x); }
  RealGrid translate(RealGrid const &x) const override { return translate_(x); }
  RealGrid decode(RealGrid const &x) const override { return decode_(x); }

private:
  AffineStage encode_, translate_, decode_;
};

struct LossWeights
{
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double lambda3 = 1.0;

  void validate() const;
};

// Each term already carries its weight; total is their sum.
struct LossBreakdown
{
  double synthesis = 0.0;      // ||x0 - ref0||^2
  double perceptual = 0.0;     // lambda1 (1 - SSIM(x0, ref0))
  double consistency = 0.0;    // lambda2 ||g~0(G(g1(x1))) - ref0||^2
  double reconstruction = 0.0; // lambda3 ||x1 - ref1||^2
  double total = 0.0;
};

// SSIM uses the dynamic range of ref0.
LossBreakdown composite_loss(RealGrid const &x0, RealGrid const &x1, RealGrid const &ref0, RealGrid const &ref1,
                             ModalityMapping const &mapping, LossWeights const &weights);

} // namespace afb
