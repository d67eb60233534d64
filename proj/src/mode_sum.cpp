#include "superosc/mode_sum.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <variant>

#include "superosc/errors.hpp"

namespace superosc {

namespace mp = boost::multiprecision;

double coefficient(int n, int k, double a) {
  if (n < 1) throw DomainError("coefficient: order n must be at least 1");
  if (k < 0 || k > n) throw DomainError("coefficient: k must satisfy 0 <= k <= n");
  const double h1 = 0.5 * (1.0 + a);
  const double h2 = 0.5 * (1.0 - a);
  if ((h1 == 0.0 && k < n) || (h2 == 0.0 && k > 0)) return 0.0;
  if (n <= 60) {
    double binom = 1.0;
    for (int j = 1; j <= k; ++j) binom = binom * (n - k + j) / j;
    return binom * std::pow(h1, n - k) * std::pow(h2, k);
  }
  double log_mag = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  if (n - k > 0) log_mag += (n - k) * std::log(std::abs(h1));
  if (k > 0) log_mag += k * std::log(std::abs(h2));
  const bool negative = ((h1 < 0.0) && ((n - k) % 2 == 1)) != ((h2 < 0.0) && (k % 2 == 1));
  const double mag = std::exp(log_mag);
  return negative ? -mag : mag;
}

namespace {

template <class Real>
struct Table {
  std::vector<Real> coeffs;
  std::vector<Real> u;
  int n = 0;
};

template <unsigned Digits>
using BigFloat = mp::number<mp::cpp_bin_float<Digits>, mp::et_off>;

template <class Real>
Table<Real> make_table(int n, double a) {
  Table<Real> t;
  t.n = n;
  const Real ra(a);
  const Real h1 = (Real(1) + ra) / 2;
  const Real h2 = (Real(1) - ra) / 2;
  t.coeffs.resize(n + 1);
  t.u.resize(n + 1);
  Real binom(1);
  for (int k = 0; k <= n; ++k) {
    using std::pow;
    t.coeffs[k] = binom * pow(h1, n - k) * pow(h2, k);
    t.u[k] = Real(1) - Real(2 * k) / Real(n);
    binom = binom * Real(n - k) / Real(k + 1);
  }
  return t;
}

template <class Real>
struct Cx {
  Real re, im;
  Cx operator*(const Cx& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
  Cx& operator+=(const Cx& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
};

template <class Real>
Cx<Real> unit(const Real& theta) {
  using std::cos;
  using std::sin;
  return {cos(theta), sin(theta)};
}

template <class Real>
Real horner(std::span<const double> p, const Real& u) {
  Real v(0);
  for (std::size_t j = p.size(); j-- > 0;) v = v * u + Real(p[j]);
  return v;
}

template <class Real>
Cx<Real> horner(std::span<const std::complex<double>> q, const Real& u) {
  Cx<Real> v{Real(0), Real(0)};
  for (std::size_t j = q.size(); j-- > 0;) {
    v.re = v.re * u + Real(q[j].real());
    v.im = v.im * u + Real(q[j].imag());
  }
  return v;
}

std::size_t effective_degree(std::span<const double> p) {
  std::size_t deg = p.size();
  while (deg > 0 && p[deg - 1] == 0.0) --deg;
  return deg == 0 ? 0 : deg - 1;
}

// Pairwise summation for the double path.
Cx<double> pairwise(std::span<const Cx<double>> terms) {
  if (terms.size() <= 8) {
    Cx<double> s{0.0, 0.0};
    for (const auto& t : terms) s += t;
    return s;
  }
  const std::size_t half = terms.size() / 2;
  Cx<double> a = pairwise(terms.subspan(0, half));
  a += pairwise(terms.subspan(half));
  return a;
}

template <class Real>
std::complex<double> evaluate(const Table<Real>& t, std::span<const double> phase,
                              std::span<const std::complex<double>> amplitude) {
  const int n = t.n;
  std::vector<Cx<Real>> terms(n + 1);
  if (amplitude.empty() && effective_degree(phase) <= 2) {
    // theta_k = A + B k + C k^2 evaluated by a multiplicative recurrence.
    const Real p0(phase.size() > 0 ? phase[0] : 0.0);
    const Real p1(phase.size() > 1 ? phase[1] : 0.0);
    const Real p2(phase.size() > 2 ? phase[2] : 0.0);
    const Real delta = Real(-2) / Real(n);
    const Real A = p0 + p1 + p2;
    const Real B = (p1 + 2 * p2) * delta;
    const Real C = p2 * delta * delta;
    Cx<Real> e = unit(A);
    Cx<Real> r = unit(Real(B + C));
    const Cx<Real> q = unit(Real(2 * C));
    for (int k = 0; k <= n; ++k) {
      terms[k] = {t.coeffs[k] * e.re, t.coeffs[k] * e.im};
      e = e * r;
      r = r * q;
    }
  } else {
    for (int k = 0; k <= n; ++k) {
      Cx<Real> e = unit(horner(phase, t.u[k]));
      if (!amplitude.empty()) e = e * horner(amplitude, t.u[k]);
      terms[k] = {t.coeffs[k] * e.re, t.coeffs[k] * e.im};
    }
  }
  if constexpr (std::is_same_v<Real, double>) {
    const Cx<double> s = pairwise(terms);
    return {s.re, s.im};
  } else {
    Cx<Real> s{Real(0), Real(0)};
    for (const auto& term : terms) s += term;
    return {static_cast<double>(s.re), static_cast<double>(s.im)};
  }
}

}  // namespace

struct ModeSum::Impl {
  int n;
  double a;
  double cancellation;
  int digits;
  std::vector<double> coeffs;
  std::variant<Table<double>, Table<BigFloat<50>>, Table<BigFloat<100>>, Table<BigFloat<200>>,
               Table<BigFloat<400>>>
      table;
};

ModeSum::ModeSum(int n, double a) {
  if (n < 1) throw DomainError("mode sum: order n must be at least 1");
  if (!std::isfinite(a)) throw DomainError("mode sum: a must be finite");
  auto impl = std::make_shared<Impl>();
  impl->n = n;
  impl->a = a;
  const double base = std::max(1.0, std::abs(a));
  impl->cancellation = std::pow(base, n);
  impl->coeffs.resize(n + 1);
  for (int k = 0; k <= n; ++k) impl->coeffs[k] = superosc::coefficient(n, k, a);

  const double needed = n * std::log10(base) + 20.0;
  if (impl->cancellation <= kDoubleLimit) {
    impl->digits = 16;
    impl->table = make_table<double>(n, a);
  } else if (needed <= 50) {
    impl->digits = 50;
    impl->table = make_table<BigFloat<50>>(n, a);
  } else if (needed <= 100) {
    impl->digits = 100;
    impl->table = make_table<BigFloat<100>>(n, a);
  } else if (needed <= 200) {
    impl->digits = 200;
    impl->table = make_table<BigFloat<200>>(n, a);
  } else if (needed <= 400) {
    impl->digits = 400;
    impl->table = make_table<BigFloat<400>>(n, a);
  } else {
    throw DomainError("mode sum: n * log10(max(1,|a|)) exceeds the supported 380 digits");
  }
  impl_ = std::move(impl);
}

int ModeSum::order() const noexcept { return impl_->n; }
double ModeSum::a() const noexcept { return impl_->a; }
double ModeSum::cancellation_factor() const noexcept { return impl_->cancellation; }
int ModeSum::working_digits() const noexcept { return impl_->digits; }

double ModeSum::coefficient(int k) const {
  if (k < 0 || k > impl_->n) throw DomainError("coefficient: k must satisfy 0 <= k <= n");
  return impl_->coeffs[k];
}

std::complex<double> ModeSum::sum(std::span<const double> phase) const {
  return sum(phase, {});
}

std::complex<double> ModeSum::sum(std::span<const double> phase,
                                  std::span<const std::complex<double>> amplitude) const {
  return std::visit([&](const auto& table) { return evaluate(table, phase, amplitude); },
                    impl_->table);
}

}  // namespace superosc
