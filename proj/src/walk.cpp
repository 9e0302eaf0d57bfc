#include "rwdiag/walk.hpp"

#include "rwdiag/errors.hpp"
#include "rwdiag/stats.hpp"

#include <cmath>
#include <ostream>

namespace rwdiag {

SamplePath simulate_walk(const StepDistribution& dist, std::int64_t n, std::uint64_t seed) {
  if (n < 0) throw ValidationError("simulate_walk: negative step count");
  SamplePath path;
  path.seed = seed;
  path.increments.reserve(static_cast<std::size_t>(n));
  path.positions.reserve(static_cast<std::size_t>(n) + 1);
  path.positions.push_back(dist.identity());
  walk_scan(dist, n, seed, [&](std::int64_t, const GroupElement& inc, const GroupElement& pos) {
    path.increments.push_back(inc);
    path.positions.push_back(pos);
  });
  return path;
}

DLOrbitPath simulate_dl_orbit(const StepDistribution& dist, std::int64_t n, std::uint64_t seed) {
  if (n < 0) throw ValidationError("simulate_dl_orbit: negative step count");
  if (!dist.finite() || !std::holds_alternative<DLMoveElement>(dist.support.front().first)) {
    throw FamilyError("simulate_dl_orbit: distribution must be over DL moves");
  }
  const auto& first = std::get<DLMoveElement>(dist.support.front().first);
  DLOrbitPath path;
  path.seed = seed;
  path.p = first.p;
  path.q = first.q;
  path.vertices.push_back(dl_base());
  Rng rng(seed);
  for (std::int64_t i = 0; i < n; ++i) {
    const auto& move = std::get<DLMoveElement>(dist.sample(rng));
    path.steps.push_back(move.step);
    path.vertices.push_back(dl_apply(path.vertices.back(), move.step, path.p, path.q));
  }
  return path;
}

double vertical_drift(const StepDistribution& dist) {
  if (!dist.finite()) throw FamilyError("vertical_drift: finite support required");
  const auto& head = dist.support.front().first;
  if (!std::holds_alternative<LampElement>(head) && !std::holds_alternative<DLMoveElement>(head) &&
      !std::holds_alternative<SolElement>(head)) {
    throw FamilyError("vertical_drift: defined for lamplighter, DL and Sol families");
  }
  double v = 0.0;
  for (const auto& [g, p] : dist.support) v += p * family_height(g);
  return v;
}

DriftEstimate vertical_drift_mc(const StepDistribution& dist, std::uint64_t paths,
                                std::int64_t steps, std::uint64_t seed) {
  std::vector<double> finals;
  std::vector<double> halfway;
  finals.reserve(paths);
  halfway.reserve(paths);
  for (std::uint64_t i = 0; i < paths; ++i) {
    Rng rng = Rng::for_path(seed, i);
    double h = 0.0, h_half = 0.0;
    for (std::int64_t s = 1; s <= steps; ++s) {
      h += family_height(dist.sample(rng));
      if (s == steps / 2) h_half = h;
    }
    finals.push_back(h / static_cast<double>(steps));
    halfway.push_back(h_half / static_cast<double>(std::max<std::int64_t>(1, steps / 2)));
  }
  const MeanStderr f = mean_stderr(finals);
  const MeanStderr h = mean_stderr(halfway);
  DriftEstimate out{f.mean, f.stderr_, false};
  // Running mean still moving by much more than noise: treat as divergent.
  const double noise = 3.0 * (f.stderr_ + h.stderr_) + 1e-12;
  out.diverged = std::fabs(f.mean - h.mean) > std::max(1.0, noise) &&
                 std::fabs(f.mean) > 2.0 * std::fabs(h.mean) + noise;
  return out;
}

void write_path_csv(const SamplePath& path,
                    const std::function<std::int64_t(const GroupElement&)>& norm,
                    std::ostream& os) {
  os << "step,height,norm,coordinates\n";
  for (std::size_t i = 0; i < path.positions.size(); ++i) {
    const auto& pos = path.positions[i];
    os << i << "," << family_height(pos) << ",";
    if (norm) {
      os << norm(pos);
    } else {
      os << "";
    }
    os << "," << format_element(pos) << "\n";
  }
}

void write_dl_path_csv(const DLOrbitPath& path, std::ostream& os) {
  os << "step,height,norm,coordinates\n";
  const DLVertex base = dl_base();
  for (std::size_t i = 0; i < path.vertices.size(); ++i) {
    const auto& v = path.vertices[i];
    os << i << "," << v.left.height << "," << dl_distance(base, v) << ","
       << format_dl_vertex(v) << "\n";
  }
}

}  // namespace rwdiag
