#pragma once

#include "rwdiag/group.hpp"
#include "rwdiag/rng.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rwdiag {

/// Named scalar distribution used by parametric Aff(R) step specs.
struct ScalarDist {
  enum class Kind { Point, Uniform, Normal };
  Kind kind = Kind::Point;
  double a = 0.0;  // point value / uniform lo / normal mean
  double b = 0.0;  // uniform hi / normal sd

  double sample(Rng& rng) const;
  double mean() const;
};

struct AffineStepSpec {
  ScalarDist log_a;
  ScalarDist b;
};

/// Step distribution of a random walk: either a finite support (canonical
/// elements with probabilities summing to 1 within 1e-12) or a parametric
/// Aff(R) spec with samplers for log a and b.
struct StepDistribution {
  std::vector<std::pair<GroupElement, double>> support;
  std::optional<AffineStepSpec> affine_spec;

  bool finite() const { return !affine_spec.has_value(); }
  GroupElement sample(Rng& rng) const;
  GroupElement identity() const;

  /// Validates invariants and builds the sampling table. Throws ValidationError.
  void finalize();

 private:
  std::vector<double> cumulative_;
};

// Named walks used across the test and scenario galleries.
StepDistribution free_srw(std::int32_t k);
StepDistribution integer_srw();  // = free_srw(1)
StepDistribution point_mass(const GroupElement& g);
StepDistribution lamplighter_generator_walk(std::int32_t p);      // {move +-1, toggle +-1}
StepDistribution lamplighter_sws(std::int32_t p);                 // switch-walk-switch
StepDistribution lamplighter_dl_walk(std::int32_t p, double up);  // DL-graph steps, P(up)=up
StepDistribution dl_move_walk(std::int32_t p, std::int32_t q, double up);
StepDistribution sol_coordinate_walk(double p, double q);   // +-1 in each coordinate
StepDistribution sol_vertical_walk(double p, double q);     // c uniform on {-1,0,1}
StepDistribution affine_parametric(const ScalarDist& log_a, const ScalarDist& b);

// JSON wire format (family-tagged); see the scenario schema in scenario.hpp.
StepDistribution step_distribution_from_json(const nlohmann::ordered_json& family,
                                             const nlohmann::ordered_json& step);
nlohmann::ordered_json element_to_json(const GroupElement& g);
GroupElement element_from_json(const nlohmann::ordered_json& family,
                               const nlohmann::ordered_json& payload);

}  // namespace rwdiag
