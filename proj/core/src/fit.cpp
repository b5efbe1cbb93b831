#include "gridlab/fit.hpp"

#include <cmath>

namespace gridlab {

FitResult fit_power_law(const std::vector<double>& x, const std::vector<double>& y,
                        double predicted_exponent) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("fit needs >= 2 points");
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("fit needs positive data");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    syy += ly * ly;
  }
  const double nn = static_cast<double>(n);
  const double vxx = sxx - sx * sx / nn;
  const double vyy = syy - sy * sy / nn;
  const double vxy = sxy - sx * sy / nn;
  if (!(vxx > 1e-12 * std::max(1.0, sxx))) throw DomainError("degenerate fit: constant x");
  FitResult r;
  r.slope = vxy / vxx;
  r.intercept = (sy - r.slope * sx) / nn;
  r.r_squared = vyy > 0.0 ? (vxy * vxy) / (vxx * vyy) : 1.0;
  r.predicted = predicted_exponent;
  r.abs_delta = std::fabs(r.slope - predicted_exponent);
  return r;
}

double theory_exponent_const_ls(int d, int k) {
  const double dk = std::pow(static_cast<double>(d), static_cast<double>(k));
  return (dk * d - dk) / (dk - 1.0);
}

double theory_exponent_poly_ls(int d, double alpha) {
  return (d - 1) - alpha * (d - 2) / static_cast<double>(d);
}

double theory_exponent_one_d(int k) { return 1.0 / static_cast<double>(k); }

}  // namespace gridlab
