#include "rwdiag/stopping.hpp"

#include "rwdiag/ensemble.hpp"
#include "rwdiag/errors.hpp"
#include "rwdiag/stats.hpp"

#include <algorithm>
#include <cmath>

namespace rwdiag {

bool MeasureSplit::triggers(const GroupElement& g) const {
  for (std::size_t i = 0; i < mu.support.size(); ++i) {
    if (in_trigger[i] && mu.support[i].first == g) return true;
  }
  return false;
}

MeasureSplit make_split(const StepDistribution& mu, const TriggerPredicate& trigger) {
  if (!mu.finite()) throw FamilyError("make_split: finite support required");
  MeasureSplit split;
  split.mu = mu;
  split.in_trigger.reserve(mu.support.size());
  for (const auto& [g, p] : mu.support) {
    const bool in = trigger(g);
    split.in_trigger.push_back(in);
    if (in) split.alpha_mass += p;
  }
  if (split.alpha_mass <= 0.0) throw ValidationError("make_split: trigger set has zero mass");
  return split;
}

InducedMeasure induced_measure(const MeasureSplit& split, double eps, std::uint64_t budget) {
  InducedMeasure out;
  out.beta_mass = 1.0 - split.alpha_mass;
  SparseLaw alpha, beta;
  for (std::size_t i = 0; i < split.mu.support.size(); ++i) {
    const auto& [g, p] = split.mu.support[i];
    (split.in_trigger[i] ? alpha : beta).mass[g] += p;
  }
  // ||alpha|| gets collected once per beta power; the tail after N terms is
  // ||beta||^(N+1), so N = ceil(log eps / log ||beta||) reaches the target.
  int terms = 0;
  if (out.beta_mass > 0.0 && eps < 1.0) {
    terms = static_cast<int>(std::ceil(std::log(eps) / std::log(out.beta_mass)));
    terms = std::max(terms, 0);
  }
  out.theta = alpha;
  SparseLaw beta_power_alpha = alpha;
  for (int n = 1; n <= terms; ++n) {
    beta_power_alpha = sparse_convolve(beta, beta_power_alpha, budget);
    for (const auto& [g, p] : beta_power_alpha.mass) out.theta.mass[g] += p;
  }
  out.terms = terms + 1;
  out.deficit = 1.0 - out.theta.total();
  if (out.deficit > eps + 1e-12) {
    throw BudgetError("induced_measure: truncation deficit " + std::to_string(out.deficit) +
                      " above target " + std::to_string(eps));
  }
  return out;
}

std::vector<std::int64_t> stopping_times(const std::vector<GroupElement>& increments,
                                         const TriggerPredicate& trigger) {
  std::vector<std::int64_t> times;
  for (std::size_t i = 0; i < increments.size(); ++i) {
    if (trigger(increments[i])) times.push_back(static_cast<std::int64_t>(i) + 1);
  }
  if (times.empty()) {
    throw ResolutionError("stopping_times: no trigger before the horizon");
  }
  return times;
}

std::int64_t sample_tau(const MeasureSplit& split, Rng& rng, std::int64_t max_steps) {
  for (std::int64_t n = 1; n <= max_steps; ++n) {
    if (split.triggers(split.mu.sample(rng))) return n;
  }
  throw BudgetError("sample_tau: no trigger within max_steps");
}

TauCheck expected_tau_check(const MeasureSplit& split, std::uint64_t samples, std::uint64_t seed,
                            int threads) {
  auto taus = ensemble_map<double>(samples, threads, [&](std::size_t i) {
    Rng rng = Rng::for_path(seed, i);
    return static_cast<double>(sample_tau(split, rng));
  });
  const MeanStderr ms = mean_stderr(taus);
  TauCheck check;
  check.mean = ms.mean;
  check.stderr_ = ms.stderr_;
  check.expected = 1.0 / split.alpha_mass;
  check.residual = std::fabs(check.mean - check.expected);
  check.samples = samples;
  return check;
}

EntropyScalingCheck entropy_scaling_check(const MeasureSplit& split,
                                          const RNDerivativeOracle& oracle, std::uint64_t paths,
                                          std::int64_t horizon, std::uint64_t seed, int threads) {
  EntropyScalingCheck check;
  check.expected_tau = 1.0 / split.alpha_mass;
  check.h_mu = furstenberg_entropy_estimate(split.mu, oracle, paths, horizon, seed, threads);
  const TriggerPredicate trigger = [&split](const GroupElement& g) { return split.triggers(g); };
  check.h_theta = furstenberg_entropy_stopped(split.mu, trigger, oracle, paths, horizon,
                                              seed + 1, threads);
  check.residual = std::fabs(check.h_theta.estimate - check.expected_tau * check.h_mu.estimate);
  check.joint_stderr = std::sqrt(check.h_theta.stderr_ * check.h_theta.stderr_ +
                                 check.expected_tau * check.expected_tau * check.h_mu.stderr_ *
                                     check.h_mu.stderr_);
  return check;
}

FirstMomentCheck first_moment_check(const MeasureSplit& split, const Gauge& gauge,
                                    std::uint64_t samples, std::uint64_t seed, int threads) {
  FirstMomentCheck check;
  check.samples = samples;
  for (const auto& [g, p] : split.mu.support) {
    check.moment_mu += p * static_cast<double>(gauge.norm(g));
  }
  struct TauAndNorm {
    double tau = 0.0;
    double norm = 0.0;
  };
  auto draws = ensemble_map<TauAndNorm>(samples, threads, [&](std::size_t i) {
    Rng rng = Rng::for_path(seed, i);
    GroupElement pos = split.mu.identity();
    for (std::int64_t n = 1;; ++n) {
      const GroupElement inc = split.mu.sample(rng);
      pos = compose(pos, inc);
      if (split.triggers(inc)) {
        return TauAndNorm{static_cast<double>(n), static_cast<double>(gauge.norm(pos))};
      }
      if (n > (1 << 24)) throw BudgetError("first_moment_check: no trigger");
    }
  });
  std::vector<double> taus, norms;
  taus.reserve(samples);
  norms.reserve(samples);
  for (const auto& d : draws) {
    taus.push_back(d.tau);
    norms.push_back(d.norm);
  }
  const MeanStderr t = mean_stderr(taus);
  const MeanStderr n = mean_stderr(norms);
  check.tau_mean = t.mean;
  check.moment_theta_mean = n.mean;
  check.moment_theta_stderr = n.stderr_;
  check.holds = n.mean <= (1.0 / split.alpha_mass) * check.moment_mu + 2.0 * n.stderr_;
  return check;
}

namespace {

GridSplit split_grid_by(const DensityGrid& mu, const std::function<bool(std::size_t, double)>& in_alpha) {
  GridSplit split;
  split.alpha = mu;
  split.beta = mu;
  for (std::size_t i = 0; i < mu.values.size(); ++i) {
    if (in_alpha(i, mu.values[i])) {
      split.beta.values[i] = 0.0;
      split.sup_alpha = std::max(split.sup_alpha, mu.values[i]);
    } else {
      split.alpha.values[i] = 0.0;
    }
  }
  split.alpha_mass = split.alpha.mass();
  if (split.alpha_mass <= 0.0) {
    throw ValidationError("grid split: trigger set has zero mass");
  }
  return split;
}

}  // namespace

GridSplit split_grid_at_threshold(const DensityGrid& mu, double threshold) {
  return split_grid_by(mu, [threshold](std::size_t, double v) { return v <= threshold; });
}

GridSplit split_grid_on_interval(const DensityGrid& mu, double lo, double hi) {
  return split_grid_by(mu, [&](std::size_t i, double) {
    const double x = mu.lo + (static_cast<double>(i) + 0.5) * mu.width;
    return x >= lo && x < hi;
  });
}

double default_density_threshold(const DensityGrid& mu) {
  // Grid quantile: smallest value j with mu({rho <= j}) >= 1/2.
  std::vector<double> sorted = mu.values;
  std::sort(sorted.begin(), sorted.end());
  double mass = 0.0;
  for (double v : sorted) {
    mass += v * mu.width;
    if (mass >= 0.5) return v;
  }
  return sorted.empty() ? 0.0 : sorted.back();
}

BoundedDensityTransform bounded_density_series(const GridSplit& split, double eps,
                                               int max_terms) {
  const double beta_mass = split.beta.mass();
  BoundedDensityTransform out;
  int terms = 0;
  if (beta_mass > 0.0 && eps < 1.0) {
    terms = static_cast<int>(std::ceil(std::log(eps) / std::log(beta_mass)));
    if (terms > max_terms) {
      throw BudgetError("bounded_density_series: series needs " + std::to_string(terms) +
                        " terms, budget " + std::to_string(max_terms));
    }
  }
  out.theta = split.alpha;
  DensityGrid term = split.alpha;
  for (int n = 1; n <= terms; ++n) {
    term = convolve(split.beta, term);
    out.theta = grid_add(out.theta, term);
  }
  out.terms = terms + 1;
  out.deficit = 1.0 - out.theta.mass();
  out.sup_observed = out.theta.max_value();
  out.sup_bound = split.sup_alpha / std::max(1e-300, 1.0 - beta_mass);
  return out;
}

BoundedDensityTransform bounded_density_transform(const DensityGrid& mu, double threshold,
                                                  double eps, int max_terms) {
  return bounded_density_series(split_grid_at_threshold(mu, threshold), eps, max_terms);
}

}  // namespace rwdiag
