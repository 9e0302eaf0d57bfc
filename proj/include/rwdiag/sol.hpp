#pragma once

#include <cmath>
#include <string>

namespace rwdiag {

/// Element of Sol(p, q), coordinatized by the matrix
///   [ e^{p c}  a  0 ]
///   [    0     1  0 ]
///   [    0     b  e^{-q c} ]
/// Multiplying matrices gives the law below. The two factors act as affine
/// maps (e^{p c}, a) and (e^{-q c}, b) on rescaled hyperbolic planes H(p),
/// H(q); with the end at infinity fixed in each factor the Busemann heights
/// are h1 = -c and h2 = +c, so h1 + h2 = 0 along every orbit.
struct SolElement {
  double p = 1.0;
  double q = 1.0;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  bool operator==(const SolElement&) const = default;
};

SolElement sol_identity(double p, double q);
SolElement compose(const SolElement& x, const SolElement& y);
SolElement inverse(const SolElement& x);

/// Busemann height of g.o in the first factor.
inline double sol_height(const SolElement& g) { return -g.c; }

/// Displacement of the base point under a compatible metric:
/// d1 + d2 - |h1|, with d_i the rescaled hyperbolic factor distances.
double sol_norm(const SolElement& g);

std::string format_sol(const SolElement& g);

inline SolElement sol_identity(double p, double q) { return SolElement{p, q, 0.0, 0.0, 0.0}; }

inline SolElement compose(const SolElement& x, const SolElement& y) {
  return SolElement{x.p, x.q,
                    x.a + std::exp(x.p * x.c) * y.a,
                    x.b + std::exp(-x.q * x.c) * y.b,
                    x.c + y.c};
}

inline SolElement inverse(const SolElement& x) {
  return SolElement{x.p, x.q,
                    -std::exp(-x.p * x.c) * x.a,
                    -std::exp(x.q * x.c) * x.b,
                    -x.c};
}

inline double sol_norm(const SolElement& g) {
  const auto half_plane = [](double scale, double translation) {
    return std::acosh(1.0 + (translation * translation + (scale - 1.0) * (scale - 1.0)) /
                                (2.0 * scale));
  };
  const double d1 = half_plane(std::exp(g.p * g.c), g.a) / g.p;
  const double d2 = half_plane(std::exp(-g.q * g.c), g.b) / g.q;
  return d1 + d2 - std::fabs(sol_height(g));
}

}  // namespace rwdiag
