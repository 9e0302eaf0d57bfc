#include "rwdiag/estimators.hpp"

#include "rwdiag/ensemble.hpp"
#include "rwdiag/errors.hpp"
#include "rwdiag/stats.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

namespace rwdiag {

namespace {

enum class WalkFamily { Free, Lamplighter, DLMoves, Affine, Sol };

WalkFamily walk_family(const StepDistribution& dist) {
  if (!dist.finite()) return WalkFamily::Affine;
  const auto& head = dist.support.front().first;
  if (std::holds_alternative<FreeWord>(head)) return WalkFamily::Free;
  if (std::holds_alternative<LampElement>(head)) return WalkFamily::Lamplighter;
  if (std::holds_alternative<DLMoveElement>(head)) return WalkFamily::DLMoves;
  if (std::holds_alternative<AffineElement>(head)) return WalkFamily::Affine;
  return WalkFamily::Sol;
}

std::vector<std::int64_t> window_steps(std::int64_t horizon) {
  // Five probes over the last tenth of the walk.
  std::set<std::int64_t> steps;
  const std::int64_t start = std::max<std::int64_t>(1, (9 * horizon) / 10);
  for (int i = 0; i < 5; ++i) {
    steps.insert(start + ((horizon - start) * i) / 4);
  }
  steps.insert(horizon);
  return {steps.begin(), steps.end()};
}

/// Trace value without the depth precondition: the common prefix against a
/// truncated end under-counts once |w| outgrows the resolution, which only
/// affects trailing trace entries, never the strict estimators.
double free_lenient_log_rn(const FreeWord& w, const WordEnd& xi, double log_base) {
  const std::int64_t c = common_prefix_length(w, xi.prefix);
  return static_cast<double>(2 * c - word_length(w)) * log_base;
}

std::vector<std::pair<std::int64_t, double>> running_mean_trace(const std::vector<double>& values) {
  std::vector<std::pair<std::int64_t, double>> trace;
  if (values.empty()) return trace;
  const auto marks = decade_checkpoints(static_cast<std::int64_t>(values.size()));
  double acc = 0.0;
  std::size_t next = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    acc += values[i];
    if (next < marks.size() && static_cast<std::int64_t>(i + 1) == marks[next]) {
      trace.emplace_back(marks[next], acc / static_cast<double>(i + 1));
      ++next;
    }
  }
  return trace;
}

struct PathValue {
  double value = 0.0;
  bool ok = false;
};

EstimatorReport reduce_path_values(std::vector<PathValue> values, std::string method) {
  std::vector<double> ok_values;
  ok_values.reserve(values.size());
  std::uint64_t excluded = 0;
  for (const auto& v : values) {
    if (v.ok) {
      ok_values.push_back(v.value);
    } else {
      ++excluded;
    }
  }
  const MeanStderr ms = mean_stderr(ok_values);
  EstimatorReport rep;
  rep.estimate = ms.mean;
  rep.stderr_ = ms.stderr_;
  rep.ensemble = ok_values.size();
  rep.excluded = excluded;
  rep.trace = running_mean_trace(ok_values);
  rep.method = std::move(method);
  return rep;
}

}  // namespace

std::vector<std::int64_t> decade_checkpoints(std::int64_t horizon) {
  std::vector<std::int64_t> out;
  if (horizon < 1) return out;
  for (std::int64_t scale = 1; scale <= horizon; scale *= 10) {
    for (std::int64_t d = 1; d <= 9; ++d) {
      const std::int64_t n = d * scale;
      if (n > horizon) break;
      out.push_back(n);
    }
  }
  if (out.empty() || out.back() != horizon) out.push_back(horizon);
  return out;
}

FreeWalkCapture capture_free_walk(const StepDistribution& dist,
                                  const std::vector<std::int64_t>& checkpoints,
                                  std::int64_t horizon, std::uint64_t seed) {
  if (walk_family(dist) != WalkFamily::Free) {
    throw FamilyError("capture_free_walk: free-family walk required");
  }
  FreeWalkCapture cap;
  cap.at.reserve(checkpoints.size());
  const auto window = window_steps(horizon);
  std::vector<FreeWord> window_words;
  std::size_t next_cp = 0;

  Rng rng(seed);
  FreeWord pos = std::get<FreeWord>(dist.identity());
  pos.letters.reserve(static_cast<std::size_t>(horizon) + 8);
  for (std::int64_t step = 1; step <= horizon; ++step) {
    const auto inc = std::get<FreeWord>(dist.sample(rng));
    if (step == 1) cap.first_increment = inc;
    // In-place reduced product: O(|inc|) per step.
    for (std::int16_t s : inc.letters) {
      if (!pos.letters.empty() && pos.letters.back() == -s) {
        pos.letters.pop_back();
      } else {
        pos.letters.push_back(s);
      }
    }
    while (next_cp < checkpoints.size() && checkpoints[next_cp] == step) {
      cap.at.push_back(pos);
      ++next_cp;
    }
    if (std::binary_search(window.begin(), window.end(), step)) window_words.push_back(pos);
  }
  cap.final_position = pos;
  cap.drift_hat =
      horizon > 0 ? static_cast<double>(word_length(cap.final_position)) / horizon : 0.0;
  const auto required = static_cast<std::int64_t>(
      std::ceil(cap.drift_hat * static_cast<double>(horizon) / 2.0));
  if (window_words.empty()) window_words.push_back(cap.final_position);
  cap.boundary = extract_word_end(window_words, required);
  return cap;
}

namespace {

/// Mutable DL walker: digit maps keyed by height, O(1) per move; sorted
/// vertices are materialized only at snapshots.
struct DLWalkerState {
  std::int32_t p = 2, q = 2;
  std::int32_t hl = 0, hr = 0;
  std::unordered_map<std::int32_t, std::int16_t> left, right;

  void apply(const DLStep& step) {
    if (step.dir == +1) {
      if (step.digit != 0) left[hl] = step.digit;
      ++hl;
      --hr;
      right.erase(hr);
    } else {
      --hl;
      left.erase(hl);
      if (step.digit != 0) right[hr] = step.digit;
      ++hr;
    }
  }

  DLVertex snapshot() const {
    DLVertex v;
    v.left.height = hl;
    v.right.height = hr;
    v.left.digits.assign(left.begin(), left.end());
    v.right.digits.assign(right.begin(), right.end());
    std::sort(v.left.digits.begin(), v.left.digits.end());
    std::sort(v.right.digits.begin(), v.right.digits.end());
    return v;
  }
};

/// Mutable lamplighter walker with the same interface.
struct LampWalkerState {
  std::int32_t mod = 2;
  std::int32_t shift = 0;
  std::unordered_map<std::int32_t, std::int16_t> lamps;

  void apply(const LampElement& inc) {
    for (const auto& [pos, v] : inc.lamps) {
      const std::int32_t at = pos + shift;
      const auto it = lamps.find(at);
      const int cur = it == lamps.end() ? 0 : it->second;
      const int next = (cur + v) % mod;
      if (next == 0) {
        if (it != lamps.end()) lamps.erase(it);
      } else if (it == lamps.end()) {
        lamps.emplace(at, static_cast<std::int16_t>(next));
      } else {
        it->second = static_cast<std::int16_t>(next);
      }
    }
    shift += inc.shift;
  }

  DLVertex snapshot() const {
    DLVertex v;
    v.left.height = shift;
    v.right.height = -shift;
    for (const auto& [pos, val] : lamps) {
      if (pos < shift) {
        v.left.digits.emplace_back(pos, val);
      } else {
        v.right.digits.emplace_back(-1 - pos, val);
      }
    }
    std::sort(v.left.digits.begin(), v.left.digits.end());
    std::sort(v.right.digits.begin(), v.right.digits.end());
    return v;
  }
};

}  // namespace

DLWalkCapture capture_dl_walk(const StepDistribution& dist,
                              const std::vector<std::int64_t>& checkpoints, std::int64_t horizon,
                              std::uint64_t seed) {
  DLWalkCapture cap;
  cap.at.reserve(checkpoints.size());
  const auto window = window_steps(horizon);
  std::vector<TreeVertex> window_left;
  const WalkFamily fam = walk_family(dist);
  if (fam != WalkFamily::Lamplighter && fam != WalkFamily::DLMoves) {
    throw FamilyError("capture_dl_walk: lamplighter or DL-move walk required");
  }

  DLWalkerState dl_state;
  LampWalkerState lamp_state;
  if (fam == WalkFamily::Lamplighter) {
    lamp_state.mod = std::get<LampElement>(dist.identity()).mod;
  } else {
    const auto& m = std::get<DLMoveElement>(dist.support.front().first);
    dl_state.p = m.p;
    dl_state.q = m.q;
  }
  const auto snapshot = [&]() {
    return fam == WalkFamily::Lamplighter ? lamp_state.snapshot() : dl_state.snapshot();
  };

  Rng rng(seed);
  std::size_t next_cp = 0;
  for (std::int64_t step = 1; step <= horizon; ++step) {
    const GroupElement inc = dist.sample(rng);
    if (fam == WalkFamily::Lamplighter) {
      lamp_state.apply(std::get<LampElement>(inc));
    } else {
      dl_state.apply(std::get<DLMoveElement>(inc).step);
    }
    const bool want_cp = next_cp < checkpoints.size() && checkpoints[next_cp] == step;
    const bool want_window = std::binary_search(window.begin(), window.end(), step);
    if (want_cp || want_window) {
      const DLVertex v = snapshot();
      while (next_cp < checkpoints.size() && checkpoints[next_cp] == step) {
        cap.at.push_back(v);
        ++next_cp;
      }
      if (want_window) window_left.push_back(v.left);
    }
  }
  cap.final_vertex = snapshot();
  cap.drift_hat = horizon > 0 ? static_cast<double>(cap.final_vertex.left.height) /
                                    static_cast<double>(horizon)
                              : 0.0;
  const auto required = static_cast<std::int64_t>(
      std::ceil(std::max(0.0, cap.drift_hat) * static_cast<double>(horizon) / 2.0));
  if (window_left.empty()) window_left.push_back(cap.final_vertex.left);
  cap.boundary = extract_tree_end(window_left, required);
  return cap;
}

namespace {

PathValue furstenberg_path_value(const StepDistribution& dist, const RNDerivativeOracle& oracle,
                                 std::int64_t horizon, std::uint64_t path_seed) {
  PathValue out;
  if (!oracle.uses_boundary) {
    Rng rng(path_seed);
    const GroupElement g1 = dist.sample(rng);
    out.value = oracle.log_derivative(g1, TrivialBoundary{});
    out.ok = true;
    return out;
  }
  switch (walk_family(dist)) {
    case WalkFamily::Free: {
      const FreeWalkCapture cap = capture_free_walk(dist, {}, horizon, path_seed);
      if (!cap.boundary.stable) return out;
      try {
        out.value = oracle.log_derivative(GroupElement{cap.first_increment},
                                          BoundaryPoint{cap.boundary.end});
        out.ok = true;
      } catch (const ResolutionError&) {
        out.ok = false;
      }
      return out;
    }
    case WalkFamily::Affine: {
      Rng rng(path_seed);
      AffineElement pos;
      AffineElement g1;
      double b_at_window_start = 0.0;
      const std::int64_t window_start = std::max<std::int64_t>(1, (9 * horizon) / 10);
      for (std::int64_t step = 1; step <= horizon; ++step) {
        const auto inc = std::get<AffineElement>(dist.sample(rng));
        if (step == 1) g1 = inc;
        pos = compose(pos, inc);
        if (step == window_start) b_at_window_start = pos.b;
      }
      // Contracting walks have b_n Cauchy; anything still moving is excluded.
      if (std::fabs(pos.b - b_at_window_start) > 1e-6 * (1.0 + std::fabs(pos.b))) return out;
      out.value = oracle.log_derivative(GroupElement{g1}, BoundaryPoint{RealLimit{pos.b}});
      out.ok = true;
      return out;
    }
    default:
      throw FamilyError(
          "furstenberg_entropy_estimate: no boundary model for this family with a "
          "boundary-dependent oracle");
  }
}

}  // namespace

EstimatorReport furstenberg_entropy_estimate(const StepDistribution& dist,
                                             const RNDerivativeOracle& oracle,
                                             std::uint64_t paths, std::int64_t horizon,
                                             std::uint64_t seed, int threads) {
  auto values = ensemble_map<PathValue>(paths, threads, [&](std::size_t i) {
    return furstenberg_path_value(dist, oracle, horizon, Rng::derive_path_seed(seed, i));
  });
  return reduce_path_values(std::move(values), "furstenberg-mc/" + oracle.name);
}

EstimatorReport furstenberg_entropy_stopped(const StepDistribution& dist,
                                            const std::function<bool(const GroupElement&)>& trigger,
                                            const RNDerivativeOracle& oracle, std::uint64_t paths,
                                            std::int64_t horizon, std::uint64_t seed,
                                            int threads) {
  if (walk_family(dist) != WalkFamily::Free && oracle.uses_boundary) {
    throw FamilyError("furstenberg_entropy_stopped: free-family walks only");
  }
  auto values = ensemble_map<PathValue>(paths, threads, [&](std::size_t i) {
    PathValue out;
    const std::uint64_t path_seed = Rng::derive_path_seed(seed, i);
    // One pass for the stopped position, sharing the seed with the boundary
    // capture so both see the same path.
    FreeWord stopped;
    bool found = false;
    {
      Rng rng(path_seed);
      FreeWord pos = std::get<FreeWord>(dist.identity());
      for (std::int64_t step = 1; step <= horizon && !found; ++step) {
        const auto inc = std::get<FreeWord>(dist.sample(rng));
        for (std::int16_t s : inc.letters) {
          if (!pos.letters.empty() && pos.letters.back() == -s) {
            pos.letters.pop_back();
          } else {
            pos.letters.push_back(s);
          }
        }
        if (trigger(inc)) {
          stopped = pos;
          found = true;
        }
      }
    }
    if (!found) return out;
    if (!oracle.uses_boundary) {
      out.value = oracle.log_derivative(GroupElement{stopped}, TrivialBoundary{});
      out.ok = true;
      return out;
    }
    const FreeWalkCapture cap = capture_free_walk(dist, {}, horizon, path_seed);
    if (!cap.boundary.stable) return out;
    try {
      out.value =
          oracle.log_derivative(GroupElement{stopped}, BoundaryPoint{cap.boundary.end});
      out.ok = true;
    } catch (const ResolutionError&) {
      out.ok = false;
    }
    return out;
  });
  return reduce_path_values(std::move(values), "furstenberg-stopped/" + oracle.name);
}

EstimatorReport ergodic_rn_average(const StepDistribution& dist, const RNDerivativeOracle& oracle,
                                   std::int64_t horizon, std::uint64_t seed) {
  EstimatorReport rep;
  rep.ensemble = 1;
  rep.method = "ergodic-rn/" + oracle.name;
  const auto checkpoints = decade_checkpoints(horizon);
  if (oracle.uses_boundary) {
    if (walk_family(dist) != WalkFamily::Free) {
      throw FamilyError("ergodic_rn_average: boundary-dependent oracles need a free-family walk");
    }
    // Simulate twice the horizon so the limit point is resolved deeper than
    // any position evaluated along the trace.
    const FreeWalkCapture cap = capture_free_walk(dist, checkpoints, 2 * horizon, seed);
    const double log_base =
        std::log(2.0 * std::get<FreeWord>(dist.identity()).rank - 1.0);
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
      const double v = free_lenient_log_rn(cap.at[i], cap.boundary.end, log_base) /
                       static_cast<double>(checkpoints[i]);
      rep.trace.emplace_back(checkpoints[i], v);
    }
  } else {
    double acc = 0.0;
    std::size_t next = 0;
    std::vector<std::pair<std::int64_t, double>>& trace = rep.trace;
    walk_scan(dist, horizon, seed, [&](std::int64_t step, const GroupElement& inc,
                                       const GroupElement&) {
      acc += oracle.log_derivative(inc, TrivialBoundary{});
      if (next < checkpoints.size() && checkpoints[next] == step) {
        trace.emplace_back(step, acc / static_cast<double>(step));
        ++next;
      }
    });
  }
  rep.estimate = rep.trace.empty() ? 0.0 : rep.trace.back().second;
  return rep;
}

EstimatorReport ergodic_rn_tail_ensemble(const StepDistribution& dist,
                                         const RNDerivativeOracle& oracle, std::uint64_t paths,
                                         std::int64_t horizon, std::uint64_t seed, int threads) {
  auto values = ensemble_map<PathValue>(paths, threads, [&](std::size_t i) {
    PathValue out;
    const EstimatorReport one =
        ergodic_rn_average(dist, oracle, horizon, Rng::derive_path_seed(seed, i));
    out.value = one.estimate;
    out.ok = true;
    return out;
  });
  return reduce_path_values(std::move(values), "ergodic-rn-tail/" + oracle.name);
}

SmbReport smb_statistic(const StepDistribution& dist, int n_max, std::uint64_t paths,
                        std::uint64_t seed, std::uint64_t budget, int threads) {
  const auto laws = exact_nstep_sequence(dist, n_max, budget);
  auto per_path = ensemble_map<std::vector<double>>(paths, threads, [&](std::size_t i) {
    std::vector<double> stats(static_cast<std::size_t>(n_max));
    walk_scan(dist, n_max, Rng::derive_path_seed(seed, i),
              [&](std::int64_t step, const GroupElement&, const GroupElement& pos) {
                const double p = laws[static_cast<std::size_t>(step - 1)].at(pos);
                stats[static_cast<std::size_t>(step - 1)] =
                    -std::log(p) / static_cast<double>(step);
              });
    return stats;
  });
  SmbReport rep;
  rep.paths = paths;
  std::vector<double> at_horizon;
  at_horizon.reserve(paths);
  for (int n = 1; n <= n_max; ++n) {
    double sum = 0.0;
    for (const auto& stats : per_path) sum += stats[static_cast<std::size_t>(n - 1)];
    rep.ns.push_back(n);
    rep.mean_statistic.push_back(sum / static_cast<double>(paths));
    rep.running_min.push_back(rep.running_min.empty()
                                  ? rep.mean_statistic.back()
                                  : std::min(rep.running_min.back(), rep.mean_statistic.back()));
  }
  for (const auto& stats : per_path) at_horizon.push_back(stats.back());
  const MeanStderr ms = mean_stderr(at_horizon);
  rep.value_at_horizon = ms.mean;
  rep.stderr_at_horizon = ms.stderr_;
  return rep;
}

BorelCantelliReport borel_cantelli_check(
    const std::function<double(std::uint64_t path, std::int64_t n)>& f, std::uint64_t paths,
    std::int64_t n_max, double bound, double eps) {
  BorelCantelliReport rep;
  rep.bound = bound;
  rep.eps = eps;
  const std::int64_t tail_start = std::max<std::int64_t>(1, n_max / 2);
  for (std::int64_t n = 1; n <= n_max; ++n) {
    double sum = 0.0;
    for (std::uint64_t i = 0; i < paths; ++i) {
      const double v = f(i, n);
      sum += v;
      if (n >= tail_start && v > 0.0) {
        rep.max_tail_statistic =
            std::max(rep.max_tail_statistic, std::log(v) / static_cast<double>(n));
      }
    }
    rep.max_mean = std::max(rep.max_mean, sum / static_cast<double>(paths));
  }
  rep.integrable = rep.max_mean <= bound * 1.05 + 1e-9;
  rep.pass = rep.integrable && rep.max_tail_statistic <= eps;
  return rep;
}

}  // namespace rwdiag
