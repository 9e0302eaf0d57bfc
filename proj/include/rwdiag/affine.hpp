#pragma once

#include <cmath>
#include <string>

namespace rwdiag {

/// Element of Aff(R): x -> a x + b with a > 0. The scale is stored as log a
/// so that long products (n ~ 1e5) do not overflow; b stays in plain double.
struct AffineElement {
  double log_a = 0.0;
  double b = 0.0;

  bool operator==(const AffineElement&) const = default;
};

inline AffineElement affine_identity() { return {}; }

inline AffineElement compose(const AffineElement& x, const AffineElement& y) {
  // (a1,b1)(a2,b2) = (a1 a2, a1 b2 + b1)
  return AffineElement{x.log_a + y.log_a, std::exp(x.log_a) * y.b + x.b};
}

inline AffineElement inverse(const AffineElement& x) {
  return AffineElement{-x.log_a, -std::exp(-x.log_a) * x.b};
}

inline double affine_apply(const AffineElement& g, double x) {
  return std::exp(g.log_a) * x + g.b;
}

/// Hyperbolic displacement of the base point i under the upper half-plane
/// action: d(i, b + a i).
inline double affine_hyperbolic_norm(const AffineElement& g) {
  const double a = std::exp(g.log_a);
  return std::acosh(1.0 + (g.b * g.b + (a - 1.0) * (a - 1.0)) / (2.0 * a));
}

/// Busemann height toward the fixed end at infinity: -log Im(g i) = -log a.
inline double affine_height(const AffineElement& g) { return -g.log_a; }

std::string format_affine(const AffineElement& g);

}  // namespace rwdiag
