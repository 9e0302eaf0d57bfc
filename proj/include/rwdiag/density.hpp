#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

namespace rwdiag {

/// Density on a real interval sampled at uniform cell centers: values[i]
/// approximates the density at lo + (i + 1/2) * width. Probability densities
/// keep Riemann mass within 1e-9 of 1; all values are nonnegative.
struct DensityGrid {
  double lo = 0.0;
  double width = 1.0;
  std::vector<double> values;

  double hi() const { return lo + width * static_cast<double>(values.size()); }
  double mass() const;
  double max_value() const;
  double value_at(double x) const;  // nearest cell, 0 outside the support
};

DensityGrid uniform_density(double lo, double hi, std::int64_t cells);
DensityGrid gaussian_density(double mean, double sd, double tail_sigmas, std::int64_t cells_per_unit);
DensityGrid density_from_fn(double lo, double hi, std::int64_t cells,
                            const std::function<double(double)>& f, bool normalize);

/// Convolution of two grids with matching cell width (FFT with zero padding;
/// mass is preserved to ~1e-12 per application). Cells below `trim_eps` at
/// the edges are trimmed.
DensityGrid convolve(const DensityGrid& f, const DensityGrid& g, double trim_eps = 1e-300);

/// Cellwise sum respecting grid alignment (offsets must be integer cells).
DensityGrid grid_add(const DensityGrid& a, const DensityGrid& b);
DensityGrid grid_scale(const DensityGrid& a, double factor);
DensityGrid grid_shift(const DensityGrid& a, double offset);

/// -sum rho log rho * width over cells with rho > 1e-300 (0 log 0 := 0).
/// May be negative.
double differential_entropy(const DensityGrid& f);

/// H_1..H_{n_max} of the iterated self-convolutions of f.
std::vector<double> entropy_sequence(const DensityGrid& f, int n_max);

/// Closed form for the standard Gaussian walk: I(x_1, x_n) = log(n/(n-1))/2.
double gaussian_walk_mutual_information(int n);

/// |I(x_1, x_n) - (H_n - H_{n-1})| with I evaluated by direct 2-d quadrature
/// of the joint density against the product of marginals. The two routes are
/// independent: the right side uses only the 1-d entropy integrals.
double derriennic_residual(const DensityGrid& f, int n);
double direct_mutual_information(const DensityGrid& f, int n);

void write_density_csv(const DensityGrid& f, std::ostream& os);

}  // namespace rwdiag
