#pragma once

#include <cstdint>
#include <vector>

namespace rwdiag {

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::uint64_t n = 0;
};

MeanStderr mean_stderr(const std::vector<double>& xs);

/// Least-squares slope of ys against xs.
double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Pearson chi-square of observed counts against expected probabilities.
/// Bins with expected count below `min_expected` are pooled into a tail bin.
ChiSquareResult chi_square_test(const std::vector<double>& observed_counts,
                                const std::vector<double>& expected_probs,
                                double total, double min_expected = 5.0);

double chi_square_pvalue(double statistic, int dof);

}  // namespace rwdiag
