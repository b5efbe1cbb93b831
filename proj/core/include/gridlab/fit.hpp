#pragma once

// Log-log power-law fitting for query-count scaling experiments.

#include <vector>

#include "gridlab/geometry.hpp"

namespace gridlab {

struct FitResult {
  double slope = 0.0;      // fitted exponent
  double intercept = 0.0;  // log-space intercept
  double r_squared = 0.0;
  double predicted = 0.0;  // theory exponent
  double abs_delta = 0.0;  // |slope - predicted|
};

// Least squares of log(y) on log(x). Throws DomainError on degenerate
// (constant) data or fewer than two distinct x values.
FitResult fit_power_law(const std::vector<double>& x, const std::vector<double>& y,
                        double predicted_exponent);

double theory_exponent_const_ls(int d, int k);       // (d^{k+1} - d^k) / (d^k - 1)
double theory_exponent_poly_ls(int d, double alpha); // (d-1) - alpha*(d-2)/d
double theory_exponent_one_d(int k);                 // 1/k

}  // namespace gridlab
