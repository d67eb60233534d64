#include "superosc/quadrature.hpp"

#include <numbers>

#include "superosc/errors.hpp"

namespace superosc {

GaussRule gauss_legendre(int n) {
  if (n < 1) throw DomainError("Gauss-Legendre rule needs at least one node");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

double simpson(std::span<const double> samples, double h) {
  const std::size_t n = samples.size();
  if (n < 3 || n % 2 == 0) throw DomainError("composite Simpson needs an odd number (>= 3) of samples");
  double odd = 0.0, even = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) (i % 2 ? odd : even) += samples[i];
  return h / 3.0 * (samples.front() + samples.back() + 4.0 * odd + 2.0 * even);
}

Extrapolation extrapolate_to_zero(std::span<const double> x,
                                  std::span<const std::complex<double>> y, int degree) {
  const std::size_t rows = x.size();
  const std::size_t cols = static_cast<std::size_t>(degree) + 1;
  if (degree < 0 || rows < cols || y.size() != rows)
    throw DomainError("extrapolation needs at least degree+1 points");

  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) scale = 1.0;

  // Vandermonde in scaled abscissae, column-major, thin QR by modified Gram-Schmidt.
  std::vector<std::vector<double>> q(cols, std::vector<double>(rows));
  for (std::size_t i = 0; i < rows; ++i) {
    double p = 1.0;
    for (std::size_t j = 0; j < cols; ++j) {
      q[j][i] = p;
      p *= x[i] / scale;
    }
  }
  std::vector<std::vector<double>> r(cols, std::vector<double>(cols, 0.0));
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < rows; ++i) s += q[k][i] * q[j][i];
      r[k][j] = s;
      for (std::size_t i = 0; i < rows; ++i) q[j][i] -= s * q[k][i];
    }
    double nrm = 0.0;
    for (std::size_t i = 0; i < rows; ++i) nrm += q[j][i] * q[j][i];
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) throw DomainError("extrapolation abscissae are degenerate");
    r[j][j] = nrm;
    for (std::size_t i = 0; i < rows; ++i) q[j][i] /= nrm;
  }
  std::vector<std::complex<double>> qty(cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) qty[j] += q[j][i] * y[i];
  std::vector<std::complex<double>> c(cols);
  for (std::size_t jj = cols; jj-- > 0;) {
    std::complex<double> s = qty[jj];
    for (std::size_t k = jj + 1; k < cols; ++k) s -= r[jj][k] * c[k];
    c[jj] = s / r[jj][jj];
  }
  Extrapolation out{c[0], 0.0};
  for (std::size_t i = 0; i < rows; ++i) {
    std::complex<double> fit = 0.0;
    for (std::size_t j = cols; j-- > 0;) fit = fit * (x[i] / scale) + c[j];
    out.residual = std::max(out.residual, std::abs(fit - y[i]));
  }
  return out;
}

}  // namespace superosc
