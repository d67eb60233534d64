#pragma once

// Oscillatory integrals over the real line regularized by exp(-beta x^2)
// and extrapolated to beta -> 0+.

#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace superosc {

/// Local angular frequency of the integrand is bounded by
/// |2 quadratic x + linear| + bandwidth; used to size the panels.
struct OscillatoryHint {
  double quadratic = 0.0;
  double linear = 0.0;
  double bandwidth = 0.0;
};

struct RegularizedOptions {
  std::vector<double> betas{1e-2, 5e-3, 2.5e-3, 1.25e-3};
  int degree = 2;
  /// The domain is cut where exp(-beta x^2) drops below this value.
  double cutoff = 1e-16;
  double abs_tol = 1e-13;
  double rel_tol = 1e-11;
  double radians_per_panel = 4.0 * std::numbers::pi;
};

struct RegularizedIntegral {
  std::complex<double> value;
  std::vector<double> betas;
  std::vector<std::complex<double>> values;  ///< one regularized integral per beta
  double fit_residual = 0.0;
  double quadrature_error = 0.0;
  long evaluations = 0;
};

/// \int f(x) exp(-beta x^2) dx for each beta, then a least-squares
/// polynomial in beta evaluated at 0. Throws NumericError when the
/// successive differences fail to shrink (the beta tail is not monotone).
RegularizedIntegral regularized_integral(const std::function<std::complex<double>(double)>& f,
                                         const OscillatoryHint& hint,
                                         const RegularizedOptions& options = {});

/// Breakpoints on [lo, hi] with at most `radians` of phase per panel.
std::vector<double> oscillatory_partition(const OscillatoryHint& hint, double lo, double hi,
                                          double radians, double max_width);

}  // namespace superosc
