#include "rwdiag/rn_oracle.hpp"

#include "rwdiag/errors.hpp"

#include <algorithm>
#include <cmath>

namespace rwdiag {

std::int64_t free_srw_rn_exponent(const FreeWord& g, const WordEnd& xi) {
  if (word_length(xi.prefix) < word_length(g) + 1) {
    throw ResolutionError("free_srw_rn_exponent: end resolved to depth " +
                          std::to_string(word_length(xi.prefix)) + ", need " +
                          std::to_string(word_length(g) + 1));
  }
  const std::int64_t c = common_prefix_length(g, xi.prefix);
  return 2 * c - word_length(g);
}

RNDerivativeOracle free_srw_oracle(std::int32_t k) {
  RNDerivativeOracle oracle;
  oracle.name = "free-srw(F" + std::to_string(k) + ")";
  oracle.exact = true;
  const double log_base = std::log(2.0 * k - 1.0);
  oracle.log_derivative = [log_base](const GroupElement& g, const BoundaryPoint& xi) {
    const auto* w = std::get_if<FreeWord>(&g);
    if (!w) throw FamilyError("free SRW oracle applied to non-free element");
    const auto* end = std::get_if<WordEnd>(&xi);
    if (!end) throw FamilyError("free SRW oracle needs a word-end boundary point");
    return static_cast<double>(free_srw_rn_exponent(*w, *end)) * log_base;
  };
  return oracle;
}

RNDerivativeOracle trivial_oracle() {
  RNDerivativeOracle oracle;
  oracle.name = "trivial";
  oracle.exact = true;
  oracle.uses_boundary = false;
  oracle.log_derivative = [](const GroupElement&, const BoundaryPoint&) { return 0.0; };
  return oracle;
}

RNDerivativeOracle uniform_drift_oracle(double rate, Gauge gauge) {
  RNDerivativeOracle oracle;
  oracle.name = "uniform-drift-control";
  oracle.exact = false;
  oracle.uses_boundary = false;
  oracle.log_derivative = [rate, gauge = std::move(gauge)](const GroupElement& g,
                                                           const BoundaryPoint&) {
    return -rate * static_cast<double>(gauge.norm(g));
  };
  return oracle;
}

RNDerivativeOracle affr_cylinder_oracle(std::vector<double> samples, double bandwidth) {
  if (samples.size() < 16) {
    throw ValidationError("affr_cylinder_oracle: need at least 16 boundary samples");
  }
  std::sort(samples.begin(), samples.end());
  if (bandwidth <= 0.0) {
    const double spread = samples[samples.size() * 3 / 4] - samples[samples.size() / 4];
    bandwidth = std::max(1e-9, spread) *
                std::pow(static_cast<double>(samples.size()), -0.2);
  }
  RNDerivativeOracle oracle;
  oracle.name = "affl-cylinder-frequency";
  oracle.exact = false;
  oracle.bias_controlled = false;
  oracle.log_derivative = [samples = std::move(samples), bandwidth](
                              const GroupElement& g, const BoundaryPoint& xi) {
    const auto* a = std::get_if<AffineElement>(&g);
    if (!a) throw FamilyError("affine cylinder oracle applied to wrong family");
    const auto* lim = std::get_if<RealLimit>(&xi);
    if (!lim) throw FamilyError("affine cylinder oracle needs a real limit point");
    const auto count_in = [&](double lo, double hi) {
      const auto it_lo = std::lower_bound(samples.begin(), samples.end(), lo);
      const auto it_hi = std::upper_bound(samples.begin(), samples.end(), hi);
      return static_cast<double>(it_hi - it_lo);
    };
    const double lo = lim->x - bandwidth, hi = lim->x + bandwidth;
    // g^-1 [lo, hi] under x -> ax + b, a > 0.
    const double scale = std::exp(a->log_a);
    const double plo = (lo - a->b) / scale, phi = (hi - a->b) / scale;
    // Add-one regularization keeps the log finite on empty cylinders.
    return std::log((count_in(plo, phi) + 1.0) / (count_in(lo, hi) + 1.0));
  };
  return oracle;
}

}  // namespace rwdiag
