#include "rwdiag/scenario.hpp"

#include "rwdiag/criteria.hpp"
#include "rwdiag/density.hpp"
#include "rwdiag/errors.hpp"
#include "rwdiag/estimators.hpp"
#include "rwdiag/stats.hpp"
#include "rwdiag/stopping.hpp"
#include "rwdiag/walk.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace rwdiag {

namespace {

using ojson = nlohmann::ordered_json;

void require_keys(const ojson& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!allowed.count(key)) {
      throw ValidationError(where + ": unknown field '" + key + "'");
    }
  }
}

ojson trace_json(const std::vector<std::pair<std::int64_t, double>>& trace) {
  ojson arr = ojson::array();
  for (const auto& [n, v] : trace) arr.push_back(ojson::array({n, v}));
  return arr;
}

ojson series_json(const std::vector<std::int64_t>& ns, const std::vector<double>& vs) {
  ojson arr = ojson::array();
  for (std::size_t i = 0; i < ns.size(); ++i) arr.push_back(ojson::array({ns[i], vs[i]}));
  return arr;
}

ojson report_json(const EstimatorReport& rep) {
  ojson out;
  out["estimate"] = rep.estimate;
  out["stderr"] = rep.stderr_;
  out["ensemble"] = rep.ensemble;
  out["excluded"] = rep.excluded;
  out["method"] = rep.method;
  out["trace"] = trace_json(rep.trace);
  return out;
}

struct FamilyInfo {
  std::string type;
  std::int32_t k = 0, p = 0, q = 0;
};

FamilyInfo family_info(const ojson& family) {
  FamilyInfo f;
  f.type = family.at("type").get<std::string>();
  if (f.type == "free") f.k = family.at("k").get<std::int32_t>();
  if (f.type == "lamplighter") f.p = f.q = family.at("p").get<std::int32_t>();
  if (f.type == "dl") {
    f.p = family.at("p").get<std::int32_t>();
    f.q = family.at("q").get<std::int32_t>();
  }
  return f;
}

Gauge family_word_gauge(const FamilyInfo& f) {
  if (f.type == "free") return free_word_gauge(f.k);
  if (f.type == "lamplighter") return lamplighter_word_gauge(f.p);
  if (f.type == "sol") return sol_orbit_gauge(1.0, 1.0);
  if (f.type == "affine") return affine_orbit_gauge();
  throw ValidationError("no element gauge for family " + f.type);
}

bool step_is_named_srw(const ojson& step) {
  return step.contains("named") && step.at("named").get<std::string>() == "srw";
}

DensityGrid density_from_spec(const ojson& spec) {
  require_keys(spec, {"type", "lo", "hi", "sd", "cells_per_unit", "tail_sigmas"},
               "experiment.density");
  const std::string type = spec.at("type").get<std::string>();
  if (type == "uniform") {
    const double lo = spec.value("lo", 0.0);
    const double hi = spec.value("hi", 1.0);
    const auto cpu = spec.value("cells_per_unit", std::int64_t{16384});
    return uniform_density(lo, hi, std::max<std::int64_t>(8, static_cast<std::int64_t>(
                                                                 (hi - lo) * static_cast<double>(cpu))));
  }
  if (type == "gaussian") {
    const double sd = spec.value("sd", 1.0);
    const auto cpu = spec.value("cells_per_unit", std::int64_t{1024});
    const double tail = spec.value("tail_sigmas", 10.0);
    return gaussian_density(0.0, sd, tail, cpu);
  }
  throw ValidationError("experiment.density: unknown type '" + type + "'");
}

struct Ctx {
  const Scenario& sc;
  const RunOverrides& ov;
  ojson experiment;
  std::uint64_t seed;
  std::uint64_t ensemble;
  std::int64_t horizon;
  std::filesystem::path out_dir;
  ojson results;
  bool verdict = true;
  std::vector<std::string> artifacts;

  void write_artifact(const std::string& name, const std::string& content) {
    std::filesystem::create_directories(out_dir);
    const auto path = out_dir / name;
    std::ofstream os(path, std::ios::binary);
    os << content;
    artifacts.push_back(path.string());
  }
};

StepDistribution ctx_distribution(const Ctx& ctx) {
  return step_distribution_from_json(ctx.sc.raw.at("family"), ctx.sc.raw.at("step"));
}

// ---- experiment runners ----------------------------------------------------

void run_walk(Ctx& ctx) {
  require_keys(ctx.experiment, {"kind", "csv"}, "experiment(walk)");
  const FamilyInfo fam = family_info(ctx.sc.raw.at("family"));
  const StepDistribution dist = ctx_distribution(ctx);
  ojson& res = ctx.results;

  if (fam.type == "dl") {
    const DLOrbitPath path = simulate_dl_orbit(dist, ctx.horizon, ctx.seed);
    std::ostringstream csv;
    write_dl_path_csv(path, csv);
    ctx.write_artifact(ctx.experiment.value("csv", "path.csv"), csv.str());
    std::vector<double> drifts;
    for (std::uint64_t i = 0; i < ctx.ensemble; ++i) {
      const auto p = simulate_dl_orbit(dist, ctx.horizon, Rng::derive_path_seed(ctx.seed, i));
      drifts.push_back(static_cast<double>(dl_distance(dl_base(), p.vertices.back())) /
                       static_cast<double>(ctx.horizon));
    }
    const MeanStderr ms = mean_stderr(drifts);
    res["norm_drift"] = {{"mean", ms.mean}, {"stderr", ms.stderr_}};
    res["vertical_drift_exact"] = vertical_drift(dist);
    return;
  }

  const Gauge gauge = family_word_gauge(fam);
  const SamplePath path = simulate_walk(dist, std::min<std::int64_t>(ctx.horizon, 10000),
                                        ctx.seed);
  std::ostringstream csv;
  write_path_csv(path, gauge.norm, csv);
  ctx.write_artifact(ctx.experiment.value("csv", "path.csv"), csv.str());

  std::vector<double> drifts(ctx.ensemble);
  for (std::uint64_t i = 0; i < ctx.ensemble; ++i) {
    const std::uint64_t path_seed = Rng::derive_path_seed(ctx.seed, i);
    if (fam.type == "free") {
      const auto cap = capture_free_walk(dist, {}, ctx.horizon, path_seed);
      drifts[i] = static_cast<double>(word_length(cap.final_position)) /
                  static_cast<double>(ctx.horizon);
    } else if (fam.type == "lamplighter") {
      const auto cap = capture_dl_walk(dist, {}, ctx.horizon, path_seed);
      const LampElement final_el = lamplighter_from_dl(cap.final_vertex, fam.p);
      drifts[i] = static_cast<double>(lamplighter_word_norm(final_el)) /
                  static_cast<double>(ctx.horizon);
    } else {
      GroupElement pos = dist.identity();
      Rng rng(path_seed);
      for (std::int64_t s = 0; s < ctx.horizon; ++s) pos = compose(pos, dist.sample(rng));
      drifts[i] = static_cast<double>(gauge.norm(pos)) / static_cast<double>(ctx.horizon);
    }
  }
  const MeanStderr ms = mean_stderr(drifts);
  res["norm_drift"] = {{"mean", ms.mean}, {"stderr", ms.stderr_}};
  if (fam.type == "lamplighter" || fam.type == "sol") {
    res["vertical_drift_exact"] = vertical_drift(dist);
  }
}

void run_entropy_sequence(Ctx& ctx) {
  require_keys(ctx.experiment, {"kind", "density", "n_max", "derriennic_n"},
               "experiment(entropy-sequence)");
  const DensityGrid base = density_from_spec(ctx.experiment.at("density"));
  const int n_max = ctx.experiment.value("n_max", 2);
  const auto hs = entropy_sequence(base, n_max);
  ojson& res = ctx.results;
  std::ostringstream csv;
  csv << "n,H_n,increment\n";
  ojson entropies = ojson::array();
  ojson increments = ojson::array();
  bool increments_nonincreasing = true;
  for (int n = 1; n <= n_max; ++n) {
    const double h = hs[static_cast<std::size_t>(n - 1)];
    const double inc = n == 1 ? h : h - hs[static_cast<std::size_t>(n - 2)];
    entropies.push_back(ojson::array({n, h}));
    if (n >= 2) {
      increments.push_back(ojson::array({n, inc}));
      if (n >= 3 && inc > hs[static_cast<std::size_t>(n - 2)] -
                              hs[static_cast<std::size_t>(n - 3)] + 1e-9) {
        increments_nonincreasing = false;
      }
    }
    csv << n << "," << h << "," << inc << "\n";
  }
  ctx.write_artifact("entropy_sequence.csv", csv.str());
  res["entropy"] = entropies;
  res["increments"] = increments;
  res["increments_nonincreasing"] = increments_nonincreasing;
  if (n_max >= 2) {
    res["subadditivity_defect"] = hs[1] - 2.0 * hs[0];
  }
  if (ctx.experiment.contains("derriennic_n")) {
    const int n = ctx.experiment.at("derriennic_n").get<int>();
    res["derriennic_residual"] = derriennic_residual(base, n);
  }
}

void run_smb(Ctx& ctx) {
  require_keys(ctx.experiment, {"kind", "n_max", "budget"}, "experiment(smb)");
  const StepDistribution dist = ctx_distribution(ctx);
  const int n_max = ctx.experiment.value("n_max", 16);
  const auto budget = ctx.experiment.value("budget", std::uint64_t{10'000'000});
  const SmbReport rep = smb_statistic(dist, n_max, ctx.ensemble, ctx.seed, budget,
                                      ctx.ov.threads);
  ojson& res = ctx.results;
  res["mean_statistic"] = series_json(rep.ns, rep.mean_statistic);
  res["running_min"] = series_json(rep.ns, rep.running_min);
  res["value_at_horizon"] = rep.value_at_horizon;
  res["stderr_at_horizon"] = rep.stderr_at_horizon;
  std::ostringstream csv;
  csv << "n,mean,running_min\n";
  for (std::size_t i = 0; i < rep.ns.size(); ++i) {
    csv << rep.ns[i] << "," << rep.mean_statistic[i] << "," << rep.running_min[i] << "\n";
  }
  ctx.write_artifact("smb_trace.csv", csv.str());
  ctx.verdict = rep.value_at_horizon >= 0.0;
}

void run_furstenberg(Ctx& ctx) {
  require_keys(ctx.experiment, {"kind", "tail_paths"}, "experiment(furstenberg)");
  const FamilyInfo fam = family_info(ctx.sc.raw.at("family"));
  const StepDistribution dist = ctx_distribution(ctx);
  ojson& res = ctx.results;
  if (fam.type == "free" && fam.k >= 2) {
    if (!step_is_named_srw(ctx.sc.raw.at("step"))) {
      throw ValidationError(
          "furstenberg: the exact boundary oracle covers the simple random walk only");
    }
    const RNDerivativeOracle oracle = free_srw_oracle(fam.k);
    const EstimatorReport h =
        furstenberg_entropy_estimate(dist, oracle, ctx.ensemble, ctx.horizon, ctx.seed,
                                     ctx.ov.threads);
    const auto tail_paths = ctx.experiment.value("tail_paths", std::uint64_t{200});
    const EstimatorReport tail = ergodic_rn_tail_ensemble(dist, oracle, tail_paths, ctx.horizon,
                                                          ctx.seed + 1, ctx.ov.threads);
    res["furstenberg"] = report_json(h);
    res["ergodic_tail"] = report_json(tail);
    const double gap = std::fabs(h.estimate - tail.estimate);
    const double joint = 2.0 * (h.stderr_ + tail.stderr_);
    res["agreement_gap"] = gap;
    res["agreement_bound"] = joint;
    res["bias_controlled"] = true;
    ctx.verdict = gap <= joint && h.estimate >= -2.0 * h.stderr_;
    return;
  }
  if (fam.type == "affine") {
    // Pilot limit points feed the cylinder-frequency oracle; the result is an
    // estimate with uncontrolled bias and never gates acceptance.
    std::vector<double> limits;
    for (std::uint64_t i = 0; i < ctx.ensemble; ++i) {
      Rng rng = Rng::for_path(ctx.seed ^ 0xB0A7ull, i);
      AffineElement pos;
      for (std::int64_t s = 0; s < ctx.horizon; ++s) {
        pos = compose(pos, std::get<AffineElement>(dist.sample(rng)));
      }
      limits.push_back(pos.b);
    }
    const RNDerivativeOracle oracle = affr_cylinder_oracle(std::move(limits));
    const EstimatorReport h =
        furstenberg_entropy_estimate(dist, oracle, ctx.ensemble, ctx.horizon, ctx.seed,
                                     ctx.ov.threads);
    res["furstenberg"] = report_json(h);
    res["bias_controlled"] = false;
    res["note"] = "estimate, uncontrolled bias";
    return;
  }
  throw ValidationError("furstenberg: no boundary oracle for family " + fam.type);
}

void run_stopping(Ctx& ctx) {
  require_keys(ctx.experiment,
               {"kind", "trigger", "tau_samples", "theta_eps", "scaling_rel_tol", "theta_paths"},
               "experiment(stopping)");
  const FamilyInfo fam = family_info(ctx.sc.raw.at("family"));
  const StepDistribution dist = ctx_distribution(ctx);
  const GroupElement trigger_el =
      element_from_json(ctx.sc.raw.at("family"), ctx.experiment.at("trigger"));
  const MeasureSplit split =
      make_split(dist, [&](const GroupElement& g) { return g == trigger_el; });
  ojson& res = ctx.results;
  res["alpha_mass"] = split.alpha_mass;
  res["expected_tau"] = 1.0 / split.alpha_mass;

  const auto tau_samples = ctx.experiment.value("tau_samples", ctx.ensemble);
  const TauCheck tau = expected_tau_check(split, tau_samples, ctx.seed, ctx.ov.threads);
  res["tau"] = {{"mean", tau.mean},
                {"stderr", tau.stderr_},
                {"expected", tau.expected},
                {"residual", tau.residual},
                {"samples", tau.samples}};
  bool ok = tau.residual <= 0.01 * tau.expected + 3.0 * tau.stderr_;

  const double theta_eps = ctx.experiment.value("theta_eps", 1e-10);
  const InducedMeasure induced = induced_measure(split, theta_eps);
  res["theta"] = {{"support", induced.theta.mass.size()},
                  {"deficit", induced.deficit},
                  {"terms", induced.terms},
                  {"beta_mass", induced.beta_mass}};

  // Empirical law of the stopped position against the series.
  if (induced.theta.mass.size() <= 4096) {
    std::vector<std::pair<GroupElement, double>> atoms(induced.theta.mass.begin(),
                                                       induced.theta.mass.end());
    std::sort(atoms.begin(), atoms.end(), [](const auto& a, const auto& b) {
      return format_element(a.first) < format_element(b.first);
    });
    std::vector<double> observed(atoms.size(), 0.0), expected;
    expected.reserve(atoms.size());
    for (const auto& [g, m] : atoms) expected.push_back(m);
    std::uint64_t misses = 0;
    for (std::uint64_t i = 0; i < tau_samples; ++i) {
      Rng rng = Rng::for_path(ctx.seed ^ 0x7AEu, i);
      GroupElement pos = split.mu.identity();
      for (;;) {
        const GroupElement inc = split.mu.sample(rng);
        pos = compose(pos, inc);
        if (split.triggers(inc)) break;
      }
      bool found = false;
      for (std::size_t a = 0; a < atoms.size(); ++a) {
        if (atoms[a].first == pos) {
          observed[a] += 1.0;
          found = true;
          break;
        }
      }
      if (!found) ++misses;
    }
    const ChiSquareResult chi =
        chi_square_test(observed, expected, static_cast<double>(tau_samples));
    res["theta_chi_square"] = {{"statistic", chi.statistic},
                               {"dof", chi.dof},
                               {"p_value", chi.p_value},
                               {"unmatched_samples", misses}};
    ok = ok && chi.p_value > 0.01;
  }

  if (fam.type == "free" && fam.k >= 2 && step_is_named_srw(ctx.sc.raw.at("step"))) {
    const RNDerivativeOracle oracle = free_srw_oracle(fam.k);
    const auto theta_paths = ctx.experiment.value("theta_paths", ctx.ensemble);
    const EntropyScalingCheck scaling = entropy_scaling_check(
        split, oracle, theta_paths, ctx.horizon, ctx.seed + 2, ctx.ov.threads);
    res["entropy_scaling"] = {{"h_mu", report_json(scaling.h_mu)},
                              {"h_theta", report_json(scaling.h_theta)},
                              {"expected_tau", scaling.expected_tau},
                              {"residual", scaling.residual},
                              {"joint_stderr", scaling.joint_stderr}};
    const double rel_tol = ctx.experiment.value("scaling_rel_tol", 0.05);
    const double target = scaling.expected_tau * scaling.h_mu.estimate;
    ok = ok && scaling.residual <= rel_tol * std::fabs(target) + 2.0 * scaling.joint_stderr;
  }

  const Gauge gauge = family_word_gauge(fam);
  const FirstMomentCheck moment =
      first_moment_check(split, gauge, tau_samples, ctx.seed + 3, ctx.ov.threads);
  res["first_moment"] = {{"moment_mu", moment.moment_mu},
                         {"moment_theta_mean", moment.moment_theta_mean},
                         {"moment_theta_stderr", moment.moment_theta_stderr},
                         {"tau_mean", moment.tau_mean},
                         {"holds", moment.holds}};
  ctx.verdict = ok && moment.holds;
}

void run_ray(Ctx& ctx) {
  require_keys(ctx.experiment, {"kind", "rate", "max_at", "strict_decreasing_at"},
               "experiment(ray)");
  const FamilyInfo fam = family_info(ctx.sc.raw.at("family"));
  const StepDistribution dist = ctx_distribution(ctx);
  std::optional<double> rate;
  if (ctx.experiment.contains("rate")) rate = ctx.experiment.at("rate").get<double>();
  const RayTrackingReport rep =
      fam.type == "free"
          ? ray_tracking_free(dist, rate, ctx.ensemble, ctx.horizon, ctx.seed, ctx.ov.threads)
          : ray_tracking_dl(dist, rate, ctx.ensemble, ctx.horizon, ctx.seed, ctx.ov.threads);
  ojson& res = ctx.results;
  res["rate_used"] = rep.rate_used;
  res["paths"] = rep.paths;
  res["excluded"] = rep.excluded;
  res["mean_ratio"] = series_json(rep.checkpoints, rep.mean_ratio);
  res["max_ratio"] = series_json(rep.checkpoints, rep.max_ratio);
  std::ostringstream csv;
  csv << "n,mean_ratio,max_ratio\n";
  for (std::size_t i = 0; i < rep.checkpoints.size(); ++i) {
    csv << rep.checkpoints[i] << "," << rep.mean_ratio[i] << "," << rep.max_ratio[i] << "\n";
  }
  ctx.write_artifact("ray_trace.csv", csv.str());

  bool ok = true;
  if (ctx.experiment.contains("max_at")) {
    for (const auto& pair : ctx.experiment.at("max_at")) {
      const std::int64_t n = pair.at(0).get<std::int64_t>();
      const double bound = pair.at(1).get<double>();
      for (std::size_t i = 0; i < rep.checkpoints.size(); ++i) {
        if (rep.checkpoints[i] == n && rep.mean_ratio[i] > bound) ok = false;
      }
    }
  }
  if (ctx.experiment.contains("strict_decreasing_at")) {
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& nj : ctx.experiment.at("strict_decreasing_at")) {
      const std::int64_t n = nj.get<std::int64_t>();
      for (std::size_t i = 0; i < rep.checkpoints.size(); ++i) {
        if (rep.checkpoints[i] == n) {
          if (rep.mean_ratio[i] >= prev) ok = false;
          prev = rep.mean_ratio[i];
        }
      }
    }
  }
  ctx.verdict = ok;
}

void run_strip(Ctx& ctx) {
  require_keys(ctx.experiment, {"kind", "width", "trace_margin"}, "experiment(strip)");
  const FamilyInfo fam = family_info(ctx.sc.raw.at("family"));
  const StepDistribution dist = ctx_distribution(ctx);
  const auto width = ctx.experiment.value("width", std::int64_t{2});
  const StripReport rep =
      fam.type == "free"
          ? strip_statistic_free(dist, width, ctx.ensemble, ctx.horizon, ctx.seed, ctx.ov.threads)
          : strip_statistic_dl(dist, width, ctx.ensemble, ctx.horizon, ctx.seed, ctx.ov.threads);
  ojson& res = ctx.results;
  res["p_hat"] = rep.p_hat;
  res["pairs"] = rep.pairs;
  res["excluded"] = rep.excluded;
  res["trace"] = series_json(rep.checkpoints, rep.trace);
  std::ostringstream csv;
  csv << "n,log_count_rate\n";
  for (std::size_t i = 0; i < rep.checkpoints.size(); ++i) {
    csv << rep.checkpoints[i] << "," << rep.trace[i] << "\n";
  }
  ctx.write_artifact("strip_trace.csv", csv.str());
  bool ok = rep.pass;
  if (ctx.experiment.contains("trace_margin")) {
    const double margin = ctx.experiment.at("trace_margin").get<double>();
    for (std::size_t i = 0; i < rep.checkpoints.size(); ++i) {
      const double n = static_cast<double>(rep.checkpoints[i]);
      if (rep.trace[i] > std::log(2.0 * n + 1.0) / n + margin) ok = false;
    }
  }
  ctx.verdict = ok;
}

void run_entropy_criterion(Ctx& ctx) {
  require_keys(ctx.experiment, {"kind", "n_max", "eps", "injected_drift", "budget"},
               "experiment(entropy-criterion)");
  const FamilyInfo fam = family_info(ctx.sc.raw.at("family"));
  const StepDistribution dist = ctx_distribution(ctx);
  const int n_max = ctx.experiment.value("n_max", 16);
  const double eps = ctx.experiment.value("eps", 0.2);
  const double injected = ctx.experiment.value("injected_drift", 0.0);
  const auto budget = ctx.experiment.value("budget", std::uint64_t{10'000'000});
  RNDerivativeOracle oracle = trivial_oracle();
  if (injected > 0.0) {
    oracle = uniform_drift_oracle(injected, family_word_gauge(fam));
  } else if (fam.type == "free" && fam.k >= 2 && step_is_named_srw(ctx.sc.raw.at("step"))) {
    oracle = free_srw_oracle(fam.k);
  }
  const EntropyCriterionReport rep = entropy_criterion_check(
      dist, oracle, n_max, ctx.ensemble, ctx.seed, eps, budget, ctx.ov.threads);
  ojson& res = ctx.results;
  res["oracle"] = oracle.name;
  res["mean_statistic"] = series_json(rep.ns, rep.mean_statistic);
  res["running_min"] = series_json(rep.ns, rep.running_min);
  res["final_running_min"] = rep.final_running_min;
  res["eps"] = rep.eps;
  ctx.verdict = rep.pass;
}

void run_an_sets(Ctx& ctx) {
  require_keys(ctx.experiment,
               {"kind", "center", "radius_coef", "eps_threshold", "condition_depth", "ns",
                "ray_rate"},
               "experiment(an-sets)");
  const FamilyInfo fam = family_info(ctx.sc.raw.at("family"));
  if (fam.type != "free") throw ValidationError("an-sets: free-family scenarios only");
  const StepDistribution dist = ctx_distribution(ctx);
  const std::string center_s = ctx.experiment.value("center", std::string("ray"));
  const TrapSetCenter center =
      center_s == "identity" ? TrapSetCenter::Identity : TrapSetCenter::RayPoint;
  const double radius_coef = ctx.experiment.at("radius_coef").get<double>();
  const double eps_threshold = ctx.experiment.at("eps_threshold").get<double>();
  const auto condition_depth = ctx.experiment.value("condition_depth", std::int64_t{2});
  std::vector<std::int64_t> ns;
  if (ctx.experiment.contains("ns")) {
    for (const auto& nj : ctx.experiment.at("ns")) ns.push_back(nj.get<std::int64_t>());
  } else {
    for (std::int64_t n = 8; n <= ctx.horizon; n *= 2) ns.push_back(n);
  }
  const double ray_rate =
      ctx.experiment.contains("ray_rate")
          ? ctx.experiment.at("ray_rate").get<double>()
          : estimate_escape_rate(dist, 200, 500, ctx.seed, ctx.ov.threads);
  const std::int64_t max_n = *std::max_element(ns.begin(), ns.end());
  const auto pilot = capture_free_walk(dist, {}, 4 * max_n, ctx.seed ^ 0xF00Dull);
  const TrapSetsReport rep =
      trap_sets_check(dist, center, radius_coef, ray_rate, pilot.boundary.end, condition_depth,
                      ns, ctx.ensemble, 500 * ctx.ensemble, ctx.seed, eps_threshold, 0.01,
                      ctx.ov.threads);
  ojson& res = ctx.results;
  res["ns"] = rep.ns;
  res["hit_freq"] = series_json(rep.ns, rep.hit_freq);
  res["log_measure_rate"] = series_json(rep.ns, rep.log_measure_rate);
  res["acceptance_rate"] = rep.acceptance_rate;
  res["accepted"] = rep.accepted;
  res["condition1"] = rep.condition1;
  res["condition2"] = rep.condition2;
  res["eps_threshold"] = rep.eps_threshold;
  res["ray_rate"] = ray_rate;
  ctx.verdict = rep.condition1 && rep.condition2;
}

void run_temperance(Ctx& ctx) {
  require_keys(ctx.experiment, {"kind", "gauge", "max_radius", "rate_near", "rate_below"},
               "experiment(temperance)");
  const FamilyInfo fam = family_info(ctx.sc.raw.at("family"));
  const std::string which = ctx.experiment.value("gauge", std::string("word"));
  Gauge gauge;
  if (which == "word") {
    if (fam.type == "free") gauge = free_word_gauge(fam.k);
    else if (fam.type == "lamplighter") gauge = lamplighter_word_gauge(fam.p);
    else throw ValidationError("temperance: word gauge needs a free or lamplighter family");
  } else if (which == "dl-orbit") {
    if (fam.type != "lamplighter") throw ValidationError("temperance: dl-orbit needs lamplighter");
    gauge = dl_orbit_gauge(fam.p);
  } else {
    throw ValidationError("temperance: unknown gauge '" + which + "'");
  }
  const auto max_radius = ctx.experiment.value("max_radius", std::int64_t{8});
  const GrowthReport rep = temperance_estimate(gauge, max_radius);
  ojson& res = ctx.results;
  res["gauge"] = gauge.name;
  res["rate"] = rep.rate;
  res["temperate"] = rep.temperate;
  res["stability"] = rep.stability;
  ojson rows = ojson::array();
  std::ostringstream csv;
  csv << "radius,count\n";
  for (std::size_t i = 0; i < rep.radii.size(); ++i) {
    const auto count = static_cast<std::uint64_t>(std::llround(std::exp(rep.log_volumes[i])));
    rows.push_back(ojson::array({rep.radii[i], count}));
    csv << rep.radii[i] << "," << count << "\n";
  }
  res["volumes"] = rows;
  ctx.write_artifact("ball_volumes.csv", csv.str());
  bool ok = rep.temperate;
  if (ctx.experiment.contains("rate_near")) {
    const double target = ctx.experiment.at("rate_near").at(0).get<double>();
    const double tol = ctx.experiment.at("rate_near").at(1).get<double>();
    ok = ok && std::fabs(rep.rate - target) <= tol;
  }
  if (ctx.experiment.contains("rate_below")) {
    ok = ok && rep.rate < ctx.experiment.at("rate_below").get<double>();
  }
  ctx.verdict = ok;
}

}  // namespace

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds = {
      "walk",  "entropy-sequence", "smb",  "furstenberg", "stopping",
      "ray",   "strip",            "entropy-criterion",   "an-sets",
      "temperance"};
  return kinds;
}

Scenario parse_scenario(const ojson& j) {
  require_keys(j,
               {"schema", "name", "family", "step", "experiment", "horizon", "ensemble", "seed",
                "expect", "out_dir", "thresholds"},
               "scenario");
  if (!j.contains("schema") || j.at("schema").get<int>() != 1) {
    throw ValidationError("scenario: schema version 1 required");
  }
  Scenario sc;
  sc.raw = j;
  sc.name = j.at("name").get<std::string>();
  if (!j.contains("experiment") || !j.at("experiment").contains("kind")) {
    throw ValidationError("scenario: experiment.kind required");
  }
  sc.kind = j.at("experiment").at("kind").get<std::string>();
  const auto& kinds = experiment_kinds();
  if (std::find(kinds.begin(), kinds.end(), sc.kind) == kinds.end()) {
    throw ValidationError("scenario: unknown experiment kind '" + sc.kind + "'");
  }
  if (!j.contains("seed")) throw ValidationError("scenario: explicit seed required");
  sc.seed = j.at("seed").get<std::uint64_t>();
  sc.horizon = j.value("horizon", std::int64_t{0});
  sc.ensemble = j.value("ensemble", std::uint64_t{0});
  sc.expect = j.value("expect", std::string("pass"));
  if (sc.expect != "pass" && sc.expect != "fail") {
    throw ValidationError("scenario: expect must be 'pass' or 'fail'");
  }
  const bool density_kind = sc.kind == "entropy-sequence";
  if (!density_kind) {
    if (!j.contains("family") || !j.contains("step")) {
      throw ValidationError("scenario: family and step required for kind " + sc.kind);
    }
    if (sc.horizon < 1) throw ValidationError("scenario: horizon must be >= 1");
    if (sc.ensemble < 1) throw ValidationError("scenario: ensemble must be >= 1");
    // Validate eagerly so `validate` catches bad families/steps.
    step_distribution_from_json(j.at("family"), j.at("step"));
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream is(file);
  if (!is) throw ValidationError("cannot open scenario file " + file.string());
  ojson j;
  try {
    j = ojson::parse(is);
  } catch (const std::exception& e) {
    throw ValidationError(std::string("scenario parse error: ") + e.what());
  }
  return parse_scenario(j);
}

RunOutcome run_scenario(const Scenario& scenario, const RunOverrides& overrides) {
  const auto t0 = std::chrono::steady_clock::now();
  Ctx ctx{scenario, overrides, scenario.raw.at("experiment"), 0, 0, 0, {}, {}, true, {}};
  ctx.seed = overrides.seed.value_or(scenario.seed);
  ctx.ensemble = overrides.paths.value_or(scenario.ensemble);
  ctx.horizon = overrides.steps.value_or(scenario.horizon);
  std::string out_dir = scenario.raw.value("out_dir", std::string("out/") + scenario.name);
  if (overrides.out_dir) out_dir = *overrides.out_dir;
  ctx.out_dir = out_dir;

  if (scenario.kind == "walk") run_walk(ctx);
  else if (scenario.kind == "entropy-sequence") run_entropy_sequence(ctx);
  else if (scenario.kind == "smb") run_smb(ctx);
  else if (scenario.kind == "furstenberg") run_furstenberg(ctx);
  else if (scenario.kind == "stopping") run_stopping(ctx);
  else if (scenario.kind == "ray") run_ray(ctx);
  else if (scenario.kind == "strip") run_strip(ctx);
  else if (scenario.kind == "entropy-criterion") run_entropy_criterion(ctx);
  else if (scenario.kind == "an-sets") run_an_sets(ctx);
  else if (scenario.kind == "temperance") run_temperance(ctx);
  else throw ValidationError("unknown experiment kind " + scenario.kind);

  RunOutcome outcome;
  outcome.verdict_pass = ctx.verdict;
  outcome.matches_expectation = ctx.verdict == (scenario.expect == "pass");

  ojson report;
  report["version"] = RWDIAG_VERSION;
  report["scenario"] = scenario.raw;
  ojson ov = ojson::object();
  if (overrides.seed) ov["seed"] = *overrides.seed;
  if (overrides.paths) ov["paths"] = *overrides.paths;
  if (overrides.steps) ov["steps"] = *overrides.steps;
  if (overrides.out_dir) ov["out"] = *overrides.out_dir;
  report["overrides"] = ov;
  report["results"] = ctx.results;
  report["verdict"] = ctx.verdict ? "pass" : "fail";
  report["expected"] = scenario.expect;
  outcome.report = report;

  std::filesystem::create_directories(ctx.out_dir);
  const auto report_path = ctx.out_dir / "report.json";
  {
    std::ofstream os(report_path, std::ios::binary);
    os << report.dump(2) << "\n";
  }
  outcome.artifacts = ctx.artifacts;
  outcome.artifacts.push_back(report_path.string());
  outcome.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return outcome;
}

std::vector<CatalogEntry> list_scenarios(const std::filesystem::path& dir) {
  std::vector<CatalogEntry> out;
  if (!std::filesystem::exists(dir)) return out;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    try {
      const Scenario sc = load_scenario(f);
      out.push_back({f.string(), sc.name, sc.kind});
    } catch (const std::exception&) {
      out.push_back({f.string(), "<invalid>", "?"});
    }
  }
  return out;
}

}  // namespace rwdiag
