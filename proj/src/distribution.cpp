#include "rwdiag/distribution.hpp"

#include "rwdiag/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace rwdiag {

double ScalarDist::sample(Rng& rng) const {
  switch (kind) {
    case Kind::Point: return a;
    case Kind::Uniform: return rng.uniform(a, b);
    case Kind::Normal: return a + b * rng.normal();
  }
  return a;
}

double ScalarDist::mean() const {
  switch (kind) {
    case Kind::Point: return a;
    case Kind::Uniform: return 0.5 * (a + b);
    case Kind::Normal: return a;
  }
  return a;
}

void StepDistribution::finalize() {
  if (affine_spec.has_value()) {
    if (!support.empty()) throw ValidationError("step distribution: both support and parametric spec");
    return;
  }
  if (support.empty()) throw ValidationError("step distribution: empty support");
  double mass = 0.0;
  for (const auto& [g, p] : support) {
    if (p < 0.0) throw ValidationError("step distribution: negative probability");
    if (!same_family(support.front().first, g)) {
      throw ValidationError("step distribution: mixed families in support");
    }
    mass += p;
  }
  if (std::fabs(mass - 1.0) > 1e-12) {
    throw ValidationError("step distribution: probabilities sum to " + std::to_string(mass));
  }
  cumulative_.clear();
  cumulative_.reserve(support.size());
  double acc = 0.0;
  for (const auto& [g, p] : support) {
    acc += p;
    cumulative_.push_back(acc);
  }
  cumulative_.back() = 1.0;
}

GroupElement StepDistribution::sample(Rng& rng) const {
  if (affine_spec.has_value()) {
    return AffineElement{affine_spec->log_a.sample(rng), affine_spec->b.sample(rng)};
  }
  return support[rng.pick(cumulative_)].first;
}

GroupElement StepDistribution::identity() const {
  if (affine_spec.has_value()) return affine_identity();
  return identity_like(support.front().first);
}

StepDistribution free_srw(std::int32_t k) {
  if (k < 1) throw ValidationError("free_srw: rank must be >= 1");
  StepDistribution d;
  const double p = 1.0 / (2.0 * k);
  for (std::int32_t i = 1; i <= k; ++i) {
    d.support.emplace_back(free_generator(k, i, false), p);
    d.support.emplace_back(free_generator(k, i, true), p);
  }
  d.finalize();
  return d;
}

StepDistribution integer_srw() { return free_srw(1); }

StepDistribution point_mass(const GroupElement& g) {
  StepDistribution d;
  d.support.emplace_back(g, 1.0);
  d.finalize();
  return d;
}

StepDistribution lamplighter_generator_walk(std::int32_t p) {
  StepDistribution d;
  LampElement right{p, {}, 1};
  LampElement left{p, {}, -1};
  LampElement toggle{p, {{0, 1}}, 0};
  LampElement untoggle{p, {{0, static_cast<std::int16_t>((p - 1) % p)}}, 0};
  if (p == 2) {
    // toggle is an involution; keep the support canonical.
    d.support.emplace_back(right, 0.25);
    d.support.emplace_back(left, 0.25);
    d.support.emplace_back(toggle, 0.5);
  } else {
    d.support.emplace_back(right, 0.25);
    d.support.emplace_back(left, 0.25);
    d.support.emplace_back(toggle, 0.25);
    d.support.emplace_back(untoggle, 0.25);
  }
  d.finalize();
  return d;
}

StepDistribution lamplighter_sws(std::int32_t p) {
  // Increment law of switch-walk-switch: set the lamp here and at the target
  // uniformly, move +-1 with equal probability.
  StepDistribution d;
  const double w = 1.0 / (2.0 * p * p);
  for (int move : {+1, -1}) {
    for (std::int32_t here = 0; here < p; ++here) {
      for (std::int32_t there = 0; there < p; ++there) {
        LampElement e{p, {}, move};
        if (here != 0) e.lamps.emplace_back(0, static_cast<std::int16_t>(here));
        if (there != 0) e.lamps.emplace_back(move, static_cast<std::int16_t>(there));
        std::sort(e.lamps.begin(), e.lamps.end());
        d.support.emplace_back(std::move(e), w);
      }
    }
  }
  d.finalize();
  return d;
}

StepDistribution lamplighter_dl_walk(std::int32_t p, double up) {
  if (up <= 0.0 || up >= 1.0) throw ValidationError("lamplighter_dl_walk: up must be in (0,1)");
  // Right multiplications realizing the DL_{p,p} edges: (c delta_0, +1) and
  // (c delta_{-1}, -1) for c in Z_p.
  StepDistribution d;
  for (std::int32_t c = 0; c < p; ++c) {
    LampElement r{p, {}, 1};
    if (c != 0) r.lamps.emplace_back(0, static_cast<std::int16_t>(c));
    d.support.emplace_back(std::move(r), up / p);
    LampElement l{p, {}, -1};
    if (c != 0) l.lamps.emplace_back(-1, static_cast<std::int16_t>(c));
    d.support.emplace_back(std::move(l), (1.0 - up) / p);
  }
  d.finalize();
  return d;
}

StepDistribution dl_move_walk(std::int32_t p, std::int32_t q, double up) {
  if (p < 2 || q < 2) throw ValidationError("dl_move_walk: tree degree >= 2 required");
  if (up <= 0.0 || up >= 1.0) throw ValidationError("dl_move_walk: up must be in (0,1)");
  StepDistribution d;
  for (std::int32_t c = 0; c < p; ++c) {
    d.support.emplace_back(DLMoveElement{p, q, DLStep{+1, static_cast<std::int16_t>(c)}}, up / p);
  }
  for (std::int32_t c = 0; c < q; ++c) {
    d.support.emplace_back(DLMoveElement{p, q, DLStep{-1, static_cast<std::int16_t>(c)}},
                           (1.0 - up) / q);
  }
  d.finalize();
  return d;
}

StepDistribution sol_coordinate_walk(double p, double q) {
  StepDistribution d;
  const double w = 1.0 / 6.0;
  for (double s : {+1.0, -1.0}) {
    d.support.emplace_back(SolElement{p, q, s, 0, 0}, w);
    d.support.emplace_back(SolElement{p, q, 0, s, 0}, w);
    d.support.emplace_back(SolElement{p, q, 0, 0, s}, w);
  }
  d.finalize();
  return d;
}

StepDistribution sol_vertical_walk(double p, double q) {
  StepDistribution d;
  for (double c : {-1.0, 0.0, 1.0}) {
    d.support.emplace_back(SolElement{p, q, 0, 0, c}, 1.0 / 3.0);
  }
  d.finalize();
  return d;
}

StepDistribution affine_parametric(const ScalarDist& log_a, const ScalarDist& b) {
  StepDistribution d;
  d.affine_spec = AffineStepSpec{log_a, b};
  d.finalize();
  return d;
}

namespace {

using ojson = nlohmann::ordered_json;

void require_keys(const ojson& j, const std::set<std::string>& allowed, const char* where) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!allowed.count(key)) {
      throw ValidationError(std::string(where) + ": unknown field '" + key + "'");
    }
  }
}

ScalarDist scalar_from_json(const ojson& j) {
  require_keys(j, {"dist", "value", "lo", "hi", "mean", "sd"}, "scalar distribution");
  const std::string kind = j.at("dist").get<std::string>();
  ScalarDist out;
  if (kind == "point") {
    out.kind = ScalarDist::Kind::Point;
    out.a = j.at("value").get<double>();
  } else if (kind == "uniform") {
    out.kind = ScalarDist::Kind::Uniform;
    out.a = j.at("lo").get<double>();
    out.b = j.at("hi").get<double>();
    if (out.b <= out.a) throw ValidationError("scalar uniform: hi must exceed lo");
  } else if (kind == "normal") {
    out.kind = ScalarDist::Kind::Normal;
    out.a = j.at("mean").get<double>();
    out.b = j.at("sd").get<double>();
    if (out.b <= 0) throw ValidationError("scalar normal: sd must be positive");
  } else {
    throw ValidationError("scalar distribution: unknown kind '" + kind + "'");
  }
  return out;
}

struct FamilySpec {
  std::string type;
  std::int32_t k = 0, p = 0, q = 0;
  double sol_p = 1.0, sol_q = 1.0;
};

FamilySpec family_from_json(const ojson& family) {
  require_keys(family, {"type", "k", "p", "q"}, "family");
  FamilySpec f;
  f.type = family.at("type").get<std::string>();
  if (f.type == "free") {
    f.k = family.at("k").get<std::int32_t>();
    if (f.k < 1) throw ValidationError("family free: k must be >= 1");
  } else if (f.type == "lamplighter") {
    f.p = family.at("p").get<std::int32_t>();
    if (f.p < 2) throw ValidationError("family lamplighter: p must be >= 2");
  } else if (f.type == "dl") {
    f.p = family.at("p").get<std::int32_t>();
    f.q = family.at("q").get<std::int32_t>();
    if (f.p < 2 || f.q < 2) throw ValidationError("family dl: tree degree >= 2 required");
  } else if (f.type == "sol") {
    f.sol_p = family.value("p", 1.0);
    f.sol_q = family.value("q", 1.0);
    if (f.sol_p <= 0 || f.sol_q <= 0) throw ValidationError("family sol: p, q must be positive");
  } else if (f.type == "affine") {
    // no parameters
  } else {
    throw ValidationError("family: unknown type '" + f.type + "'");
  }
  return f;
}

}  // namespace

GroupElement element_from_json(const ojson& family, const ojson& payload) {
  const FamilySpec f = family_from_json(family);
  if (f.type == "free") {
    return parse_word(f.k, payload.get<std::string>());
  }
  if (f.type == "lamplighter") {
    require_keys(payload, {"lamps", "shift"}, "lamplighter element");
    LampElement e{f.p, {}, payload.value("shift", 0)};
    if (payload.contains("lamps")) {
      for (const auto& [pos, val] : payload.at("lamps").items()) {
        const int v = val.get<int>();
        if (v % f.p != 0) {
          e.lamps.emplace_back(std::stoi(pos), static_cast<std::int16_t>(((v % f.p) + f.p) % f.p));
        }
      }
    }
    std::sort(e.lamps.begin(), e.lamps.end());
    return e;
  }
  if (f.type == "dl") {
    require_keys(payload, {"dir", "digit"}, "dl move");
    const int dir = payload.at("dir").get<int>();
    const int digit = payload.value("digit", 0);
    if (dir != 1 && dir != -1) throw ValidationError("dl move: dir must be +-1");
    const int fan = dir == 1 ? f.p : f.q;
    if (digit < 0 || digit >= fan) throw ValidationError("dl move: digit out of range");
    return DLMoveElement{f.p, f.q,
                         DLStep{static_cast<std::int8_t>(dir), static_cast<std::int16_t>(digit)}};
  }
  if (f.type == "affine") {
    require_keys(payload, {"a", "b", "log_a"}, "affine element");
    double log_a = 0.0;
    if (payload.contains("log_a")) {
      log_a = payload.at("log_a").get<double>();
    } else {
      const double a = payload.at("a").get<double>();
      if (a <= 0) throw ValidationError("affine element: scale a must be positive");
      log_a = std::log(a);
    }
    return AffineElement{log_a, payload.value("b", 0.0)};
  }
  require_keys(payload, {"a", "b", "c"}, "sol element");
  return SolElement{f.sol_p, f.sol_q, payload.value("a", 0.0), payload.value("b", 0.0),
                    payload.value("c", 0.0)};
}

nlohmann::ordered_json element_to_json(const GroupElement& g) {
  ojson out;
  if (const auto* w = std::get_if<FreeWord>(&g)) {
    return format_word(*w);
  }
  if (const auto* l = std::get_if<LampElement>(&g)) {
    ojson lamps = ojson::object();
    for (const auto& [pos, v] : l->lamps) lamps[std::to_string(pos)] = v;
    out["lamps"] = lamps;
    out["shift"] = l->shift;
    return out;
  }
  if (const auto* m = std::get_if<DLMoveElement>(&g)) {
    out["dir"] = static_cast<int>(m->step.dir);
    out["digit"] = m->step.digit;
    return out;
  }
  if (const auto* a = std::get_if<AffineElement>(&g)) {
    out["log_a"] = a->log_a;
    out["b"] = a->b;
    return out;
  }
  const auto& s = std::get<SolElement>(g);
  out["a"] = s.a;
  out["b"] = s.b;
  out["c"] = s.c;
  return out;
}

StepDistribution step_distribution_from_json(const ojson& family, const ojson& step) {
  const FamilySpec f = family_from_json(family);
  require_keys(step, {"named", "up", "support", "log_a", "b"}, "step");
  if (step.contains("support")) {
    StepDistribution d;
    for (const auto& atom : step.at("support")) {
      require_keys(atom, {"element", "prob"}, "support atom");
      d.support.emplace_back(element_from_json(family, atom.at("element")),
                             atom.at("prob").get<double>());
    }
    d.finalize();
    return d;
  }
  if (f.type == "affine") {
    if (!step.contains("log_a") || !step.contains("b")) {
      throw ValidationError("affine step: needs log_a and b scalar distributions");
    }
    return affine_parametric(scalar_from_json(step.at("log_a")), scalar_from_json(step.at("b")));
  }
  const std::string named = step.value("named", "");
  if (named.empty()) throw ValidationError("step: needs 'named' or 'support'");
  if (f.type == "free") {
    if (named == "srw") return free_srw(f.k);
  } else if (f.type == "lamplighter") {
    if (named == "srw") return lamplighter_generator_walk(f.p);
    if (named == "sws") return lamplighter_sws(f.p);
    if (named == "dl-srw") return lamplighter_dl_walk(f.p, 0.5);
    if (named == "dl-drift") return lamplighter_dl_walk(f.p, step.at("up").get<double>());
  } else if (f.type == "dl") {
    if (named == "srw") return dl_move_walk(f.p, f.q, 0.5);
    if (named == "drift") return dl_move_walk(f.p, f.q, step.at("up").get<double>());
  } else if (f.type == "sol") {
    if (named == "coordinate") return sol_coordinate_walk(f.sol_p, f.sol_q);
    if (named == "vertical") return sol_vertical_walk(f.sol_p, f.sol_q);
  }
  throw ValidationError("step: unknown named walk '" + named + "' for family " + f.type);
}

}  // namespace rwdiag
