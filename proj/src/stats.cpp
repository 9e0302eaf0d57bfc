#include "rwdiag/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>
#include <stdexcept>

namespace rwdiag {

MeanStderr mean_stderr(const std::vector<double>& xs) {
  MeanStderr out;
  out.n = xs.size();
  if (xs.empty()) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return out;
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  const double var = ss / static_cast<double>(xs.size() - 1);
  out.stderr_ = std::sqrt(var / static_cast<double>(xs.size()));
  return out;
}

double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("least_squares_slope: need >= 2 matched points");
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = n * sxx - sx * sx;
  return (n * sxy - sx * sy) / denom;
}

double chi_square_pvalue(double statistic, int dof) {
  if (dof <= 0) return 1.0;
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

ChiSquareResult chi_square_test(const std::vector<double>& observed_counts,
                                const std::vector<double>& expected_probs,
                                double total, double min_expected) {
  if (observed_counts.size() != expected_probs.size()) {
    throw std::invalid_argument("chi_square_test: size mismatch");
  }
  // Pool low-expectation bins so the asymptotic distribution applies.
  std::vector<double> obs, exp;
  double pooled_obs = 0.0, pooled_exp = 0.0;
  for (std::size_t i = 0; i < observed_counts.size(); ++i) {
    const double e = expected_probs[i] * total;
    if (e < min_expected) {
      pooled_obs += observed_counts[i];
      pooled_exp += e;
    } else {
      obs.push_back(observed_counts[i]);
      exp.push_back(e);
    }
  }
  if (pooled_exp > 0.0) {
    obs.push_back(pooled_obs);
    exp.push_back(pooled_exp);
  }
  ChiSquareResult r;
  r.dof = static_cast<int>(obs.size()) - 1;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const double d = obs[i] - exp[i];
    if (exp[i] > 0) r.statistic += d * d / exp[i];
  }
  r.p_value = chi_square_pvalue(r.statistic, r.dof);
  return r;
}

}  // namespace rwdiag
