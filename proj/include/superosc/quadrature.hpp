#pragma once

// Adaptive Gauss-Kronrod integration, fixed Gauss-Legendre rules, composite
// Simpson and polynomial extrapolation to zero.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <span>
#include <vector>

namespace superosc {

template <class T>
struct QuadratureResult {
  T value{};
  double error = 0.0;       ///< estimated absolute error
  double l1 = 0.0;          ///< estimate of the integral of |f|
  long evaluations = 0;
  bool converged = true;
};

struct QuadratureOptions {
  double abs_tol = 1e-12;
  /// Relative to the integral of |f|, not of f: oscillatory integrands
  /// cancel, and the attainable error scales with the mass.
  double rel_tol = 0.0;
  int max_depth = 30;
  long max_intervals = 4'000'000;
};

namespace detail {

/// Magnitude used for error control; found by ADL for bundled value types.
template <class T>
double magnitude(const T& v) {
  using std::abs;
  return abs(v);
}

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
inline constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077634356355515, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

template <class T>
struct Panel {
  double a, b;
  T value;
  double error;
  double l1;
  int depth;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class T, class F>
Panel<T> gk21(F& f, double a, double b, int depth) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double ahalf = std::abs(half);
  const T fc = f(center);
  T kronrod = fc * kWgk[10];
  T gauss{};
  double l1 = magnitude(fc) * kWgk[10];
  T fv1[10], fv2[10];
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    fv1[j] = f(center - dx);
    fv2[j] = f(center + dx);
    kronrod += (fv1[j] + fv2[j]) * kWgk[j];
    l1 += (magnitude(fv1[j]) + magnitude(fv2[j])) * kWgk[j];
    if (j % 2 == 1) gauss += (fv1[j] + fv2[j]) * kWg[j / 2];
  }
  const T mean = kronrod * 0.5;
  double asc = magnitude(fc - mean) * kWgk[10];
  for (int j = 0; j < 10; ++j)
    asc += (magnitude(fv1[j] - mean) + magnitude(fv2[j] - mean)) * kWgk[j];
  asc *= ahalf;
  double err = magnitude((kronrod - gauss) * half);
  if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  return {a, b, kronrod * half, err, l1 * ahalf, depth};
}

}  // namespace detail

/// Globally adaptive G10/K21 quadrature over consecutive breakpoints.
///
/// Subdivides the panel with the largest error estimate until the summed
/// estimate falls below max(abs_tol, rel_tol * l1). Oriented: breakpoints
/// may be decreasing. Panels at max_depth are frozen.
template <class T, class F>
QuadratureResult<T> integrate(F&& f, std::span<const double> breakpoints,
                              const QuadratureOptions& opt = {}) {
  QuadratureResult<T> out;
  if (breakpoints.size() < 2) return out;
  std::priority_queue<detail::Panel<T>> open;
  T frozen_value{};
  double frozen_error = 0.0, frozen_l1 = 0.0;
  double total_error = 0.0, total_l1 = 0.0;
  long intervals = 0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (breakpoints[i] == breakpoints[i + 1]) continue;
    auto p = detail::gk21<T>(f, breakpoints[i], breakpoints[i + 1], 0);
    out.evaluations += 21;
    total_error += p.error;
    total_l1 += p.l1;
    ++intervals;
    open.push(p);
  }
  auto tolerance = [&] { return std::max(opt.abs_tol, opt.rel_tol * total_l1); };
  while (!open.empty() && total_error > tolerance() && intervals < opt.max_intervals) {
    auto worst = open.top();
    open.pop();
    if (worst.depth >= opt.max_depth) {
      frozen_value += worst.value;
      frozen_error += worst.error;
      frozen_l1 += worst.l1;
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    auto left = detail::gk21<T>(f, worst.a, mid, worst.depth + 1);
    auto right = detail::gk21<T>(f, mid, worst.b, worst.depth + 1);
    out.evaluations += 42;
    total_error += left.error + right.error - worst.error;
    total_l1 += left.l1 + right.l1 - worst.l1;
    ++intervals;
    open.push(left);
    open.push(right);
  }
  // Sum small contributions first.
  std::vector<detail::Panel<T>> rest;
  rest.reserve(open.size());
  while (!open.empty()) {
    rest.push_back(open.top());
    open.pop();
  }
  std::sort(rest.begin(), rest.end(),
            [](const auto& x, const auto& y) {
              return detail::magnitude(x.value) < detail::magnitude(y.value);
            });
  T value = frozen_value;
  double error = frozen_error;
  double l1 = frozen_l1;
  for (const auto& p : rest) {
    value += p.value;
    error += p.error;
    l1 += p.l1;
  }
  out.value = value;
  out.error = error;
  out.l1 = l1;
  out.converged = error <= std::max(opt.abs_tol, opt.rel_tol * l1);
  return out;
}

template <class T, class F>
QuadratureResult<T> integrate(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
  const double bp[2] = {a, b};
  return integrate<T>(std::forward<F>(f), std::span<const double>(bp, 2), opt);
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(int n);

/// Composite Simpson on an odd number of equally spaced samples.
double simpson(std::span<const double> samples, double h);

struct Extrapolation {
  std::complex<double> value;
  double residual = 0.0;  ///< max |fit - data| over the input points
};

/// Least-squares polynomial of the given degree through (x_i, y_i),
/// evaluated at x = 0.
Extrapolation extrapolate_to_zero(std::span<const double> x,
                                  std::span<const std::complex<double>> y, int degree);

}  // namespace superosc
