#include "superosc/regularized.hpp"

#include <array>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "superosc/errors.hpp"
#include "superosc/quadrature.hpp"

namespace superosc {

std::vector<double> oscillatory_partition(const OscillatoryHint& hint, double lo, double hi,
                                          double radians, double max_width) {
  auto freq = [&](double x) {
    return std::abs(2.0 * hint.quadratic * x + hint.linear) + std::abs(hint.bandwidth);
  };
  std::vector<double> bp{lo};
  double x = lo;
  while (x < hi) {
    double h = std::min(max_width, radians / std::max(freq(x), 1e-300));
    // The frequency is piecewise linear, so its panel maximum sits at an end.
    h = std::min(h, radians / std::max(freq(std::min(x + h, hi)), 1e-300));
    h = std::min(max_width, std::max(h, 1e-12 * (hi - lo)));
    x = std::min(hi, x + h);
    if (hi - x < 1e-3 * h) x = hi;
    bp.push_back(x);
  }
  return bp;
}

namespace {

constexpr std::size_t kMaxBetas = 8;

// One regularized integrand per beta, sharing the quadrature nodes.
template <std::size_t N>
struct BetaBundle {
  std::array<std::complex<double>, N> v{};

  BetaBundle& operator+=(const BetaBundle& o) {
    for (std::size_t i = 0; i < N; ++i) v[i] += o.v[i];
    return *this;
  }
  friend BetaBundle operator+(BetaBundle a, const BetaBundle& b) { return a += b; }
  friend BetaBundle operator-(BetaBundle a, const BetaBundle& b) {
    for (std::size_t i = 0; i < N; ++i) a.v[i] -= b.v[i];
    return a;
  }
  friend BetaBundle operator*(BetaBundle a, double s) {
    for (auto& x : a.v) x *= s;
    return a;
  }
  friend double abs(const BetaBundle& b) {
    double m = 0.0;
    for (const auto& x : b.v) m = std::max(m, std::norm(x));
    return std::sqrt(m);
  }
};

template <std::size_t N>
QuadratureResult<std::vector<std::complex<double>>> integrate_bundle(
    const std::function<std::complex<double>(double)>& f, const std::vector<double>& betas,
    const std::array<double, kMaxBetas>& cut2, const std::vector<double>& bp,
    const QuadratureOptions& qopt) {
  // Each beta's integrand vanishes beyond its own cut, where exp(-beta x^2) < cutoff.
  // Schedules whose betas are integer multiples of the smallest one (the
  // default halving schedule is) reuse a single exponential.
  const double beta_min = *std::min_element(betas.begin(), betas.end());
  std::array<int, N> ratio{};
  bool integral = true;
  for (std::size_t i = 0; i < N; ++i) {
    const double q = betas[i] / beta_min;
    ratio[i] = static_cast<int>(std::lround(q));
    integral = integral && std::abs(q - ratio[i]) <= 1e-12 * q && ratio[i] <= 64;
  }
  auto integrand = [&](double x) {
    BetaBundle<N> b;
    const double x2 = x * x;
    const std::complex<double> g = f(x);
    const double base = integral ? std::exp(-beta_min * x2) : 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      if (x2 > cut2[i]) continue;
      double w;
      if (integral) {
        w = 1.0;
        double sq = base;
        for (int e = ratio[i]; e > 0; e >>= 1, sq *= sq)
          if (e & 1) w *= sq;
      } else {
        w = std::exp(-betas[i] * x2);
      }
      b.v[i] = g * w;
    }
    return b;
  };
  const auto r = integrate<BetaBundle<N>>(integrand, bp, qopt);
  QuadratureResult<std::vector<std::complex<double>>> out;
  out.value.assign(r.value.v.begin(), r.value.v.end());
  out.error = r.error;
  out.l1 = r.l1;
  out.evaluations = r.evaluations;
  out.converged = r.converged;
  return out;
}

}  // namespace

RegularizedIntegral regularized_integral(const std::function<std::complex<double>(double)>& f,
                                         const OscillatoryHint& hint,
                                         const RegularizedOptions& options) {
  const std::size_t nb = options.betas.size();
  if (nb < static_cast<std::size_t>(options.degree) + 1)
    throw DomainError("regularized_integral: need at least degree+1 beta values");
  if (nb > kMaxBetas)
    throw DomainError("regularized_integral: at most " + std::to_string(kMaxBetas) +
                      " beta values");
  for (double b : options.betas)
    if (!(b > 0.0) || !std::isfinite(b))
      throw DomainError("regularized_integral: beta values must be positive");

  RegularizedIntegral out;
  out.betas = options.betas;
  const double log_cut = -std::log(options.cutoff);
  std::array<double, kMaxBetas> cut2{};
  double beta_min = options.betas.front();
  for (std::size_t i = 0; i < nb; ++i) {
    cut2[i] = log_cut / options.betas[i];
    beta_min = std::min(beta_min, options.betas[i]);
  }
  const double cut = std::sqrt(log_cut / beta_min);
  const auto bp =
      oscillatory_partition(hint, -cut, cut, options.radians_per_panel, 0.5 / std::sqrt(beta_min));

  QuadratureOptions qopt;
  qopt.abs_tol = options.abs_tol;
  qopt.rel_tol = options.rel_tol;
  QuadratureResult<std::vector<std::complex<double>>> r;
  switch (nb) {
    case 1: r = integrate_bundle<1>(f, options.betas, cut2, bp, qopt); break;
    case 2: r = integrate_bundle<2>(f, options.betas, cut2, bp, qopt); break;
    case 3: r = integrate_bundle<3>(f, options.betas, cut2, bp, qopt); break;
    case 4: r = integrate_bundle<4>(f, options.betas, cut2, bp, qopt); break;
    case 5: r = integrate_bundle<5>(f, options.betas, cut2, bp, qopt); break;
    case 6: r = integrate_bundle<6>(f, options.betas, cut2, bp, qopt); break;
    case 7: r = integrate_bundle<7>(f, options.betas, cut2, bp, qopt); break;
    default: r = integrate_bundle<8>(f, options.betas, cut2, bp, qopt); break;
  }
  out.values = r.value;
  out.quadrature_error = r.error;
  out.evaluations = r.evaluations;
  if (!r.converged)
    throw NumericError("regularized_integral: quadrature did not converge", r.error, out.values);

  double scale = 0.0;
  for (const auto& v : out.values) scale = std::max(scale, std::abs(v));
  const double floor = 100.0 * out.quadrature_error + 1e-13 * scale;
  for (std::size_t i = 2; i < nb; ++i) {
    const double prev = std::abs(out.values[i - 1] - out.values[i - 2]);
    const double next = std::abs(out.values[i] - out.values[i - 1]);
    if (next > prev && next > floor) {
      std::ostringstream os;
      os << "regularized_integral: beta tail is not monotone (|dv| " << prev << " -> " << next
         << ")";
      throw NumericError(os.str(), next, out.values);
    }
  }
  const auto ex = extrapolate_to_zero(out.betas, out.values, options.degree);
  out.value = ex.value;
  out.fit_residual = ex.residual;
  return out;
}

}  // namespace superosc
