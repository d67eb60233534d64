#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "superosc/errors.hpp"
#include "superosc/mode_sum.hpp"
#include "superosc/sequences.hpp"

using namespace superosc;
using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;

namespace {

SuperoscSpec spec1(double a, int n, double p = 1.0, double hbar = 1.0) {
  SuperoscSpec s;
  s.a = a;
  s.p = {p};
  s.n = {n};
  s.hbar = hbar;
  return s;
}

cplx oracle_product(double a, int n, double px) {
  return std::pow(cplx(std::cos(px / n), a * std::sin(px / n)), n);
}

// sum_k C_k exp(i z u_k^q) with complex z, evaluated with 100 decimal digits.
cplx oracle_power_sum(double a, int n, int q, cplx z) {
  using big = boost::multiprecision::cpp_bin_float_100;
  big re = 0, im = 0;
  const big half_plus = (big(1) + a) / 2, half_minus = (big(1) - a) / 2;
  big binom = 1;
  for (int k = 0; k <= n; ++k) {
    if (k > 0) binom = binom * (n - k + 1) / k;
    const big c = binom * pow(half_plus, n - k) * pow(half_minus, k);
    const big u = big(1) - big(2 * k) / n;
    const big uq = pow(u, q);
    // exp(i z u^q) = exp(-Im z u^q) (cos(Re z u^q) + i sin(Re z u^q))
    const big mag = exp(-big(z.imag()) * uq);
    const big ph = big(z.real()) * uq;
    re += c * mag * cos(ph);
    im += c * mag * sin(ph);
  }
  return {static_cast<double>(re), static_cast<double>(im)};
}

}  // namespace

TEST_CASE("coefficients") {
  CHECK(coefficient(2, 0, 2.0) == doctest::Approx(9.0 / 4));
  CHECK(coefficient(2, 1, 2.0) == doctest::Approx(-1.5));
  CHECK(coefficient(2, 2, 2.0) == doctest::Approx(0.25));
  for (int k = 0; k <= 7; ++k) CHECK(coefficient(7, k, 1.0) == (k == 0 ? 1.0 : 0.0));
  CHECK_THROWS_AS(coefficient(3, 4, 2.0), DomainError);
  CHECK_THROWS_AS(coefficient(3, -1, 2.0), DomainError);
  for (int n : {1, 5, 20, 40, 61, 100}) {
    for (double a : {0.5, 2.0, 3.0, -1.5}) {
      double sum = 0.0, abs_sum = 0.0;
      for (int k = 0; k <= n; ++k) {
        const double c = coefficient(n, k, a);
        const double ref = oracle::binomial(n, k) * std::pow((1 + a) / 2, n - k) * std::pow((1 - a) / 2, k);
        CHECK(std::abs(c - ref) <= 1e-12 * std::abs(ref) + 1e-300);
        sum += c;
        abs_sum += std::abs(c);
      }
      if (n <= 40 && std::abs(a) <= 2.0) CHECK(std::abs(sum - 1.0) < 1e-12 * abs_sum);
    }
  }
}

TEST_CASE("mode-sum precision tiers follow the cancellation factor") {
  CHECK(ModeSum(40, 0.5).working_digits() == 16);
  CHECK(ModeSum(4, 2.0).working_digits() == 16);
  const ModeSum big(40, 3.0);
  CHECK(big.cancellation_factor() == doctest::Approx(std::pow(3.0, 40)));
  CHECK(big.working_digits() >= 40);
  CHECK_THROWS_AS(ModeSum(0, 2.0), DomainError);
  CHECK_THROWS_AS(ModeSum(1000, 10.0), DomainError);
}

TEST_CASE("F_n examples") {
  const auto s = spec1(2.0, 2);
  const double h = pi / 2;
  CHECK(std::abs(f_n_product(s, {&h, 1}) - cplx(-1.5, 2.0)) < 1e-15);
  CHECK(std::abs(f_n_sum(s, {&h, 1}) - cplx(-1.5, 2.0)) < 1e-15);
  const double zero = 0.0;
  for (int n : {1, 5, 40}) {
    CHECK(std::abs(f_n_sum(spec1(3.0, n), {&zero, 1}) - 1.0) < 1e-14);
    CHECK(f_n_product(spec1(3.0, n), {&zero, 1}) == cplx(1.0));
  }
  for (double x : {-2.0, 0.3, 1.7}) {
    const cplx base(std::cos(x), 2.0 * std::sin(x));
    CHECK(std::abs(f_n_product(spec1(2.0, 1), {&x, 1}) - base) < 1e-15);
    const cplx expanded = 1.5 * std::polar(1.0, x) - 0.5 * std::polar(1.0, -x);
    CHECK(std::abs(f_n_sum(spec1(2.0, 1), {&x, 1}) - expanded) < 1e-15);
  }
}

TEST_CASE("dual forms agree against an independent product") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> ux(-10.0, 10.0);
  std::uniform_int_distribution<int> un(1, 40);
  for (double a : {0.5, 2.0, 3.0}) {
    for (int i = 0; i < 200; ++i) {
      const int n = un(rng);
      const double x = ux(rng);
      const auto s = spec1(a, n);
      const cplx ref = oracle_product(a, n, x);
      const cplx prod = f_n_product(s, {&x, 1});
      const cplx sum = f_n_sum(s, {&x, 1});
      CHECK(std::abs(prod - ref) / std::max(1.0, std::abs(ref)) < 1e-12);
      CHECK(std::abs(sum - prod) / std::max(1.0, std::abs(prod)) < 1e-12);
    }
  }
}

TEST_CASE("p and hbar enter through p x / hbar") {
  const double x = 0.8, y = 0.8 * 3.0 / 0.5;
  CHECK(std::abs(f_n_sum(spec1(2.0, 9, 3.0, 0.5), {&x, 1}) - f_n_sum(spec1(2.0, 9), {&y, 1})) < 1e-13);
}

TEST_CASE("conjugate symmetry and limit") {
  const auto s = spec1(2.5, 13);
  for (double x : {0.1, 1.0, 4.0}) {
    const double mx = -x;
    CHECK(std::abs(f_n_sum(s, {&mx, 1}) - std::conj(f_n_sum(s, {&x, 1}))) < 1e-12);
    CHECK(std::abs(std::abs(f_limit(s, {&x, 1})) - 1.0) < 1e-15);
    CHECK(std::abs(f_limit(s, {&x, 1}) - std::polar(1.0, 2.5 * x)) < 1e-15);
  }
}

TEST_CASE("tensor product in two dimensions") {
  SuperoscSpec s;
  s.a = 2.0;
  s.p = {1.0, -0.5};
  s.n = {6, 9};
  const Vector x{0.7, -1.2};
  const cplx ref = oracle_product(2.0, 6, 0.7) * oracle_product(2.0, 9, 0.6);
  CHECK(std::abs(f_n_product(s, x) - ref) < 1e-13);
  CHECK(std::abs(f_n_sum(s, x) - ref) < 1e-13);
  CHECK_THROWS_AS(s.scalar_order(), DomainError);
}

TEST_CASE("spec validation") {
  auto s = spec1(2.0, 3);
  s.p = {0.0};
  CHECK_THROWS_AS(SuperoscSequence{s}, DomainError);
  s = spec1(2.0, 0);
  CHECK_THROWS_AS(SuperoscSequence{s}, DomainError);
  s = spec1(std::numeric_limits<double>::quiet_NaN(), 3);
  CHECK_THROWS_AS(SuperoscSequence{s}, DomainError);
}

TEST_CASE("Y_n and Z_n") {
  const auto s = spec1(2.0, 50);
  const double zero = 0.0;
  for (double x : {-0.7, 0.0, 0.4}) {
    CHECK(std::abs(y_n(s, 0, {&x, 1}) - std::polar(1.0, x)) < 1e-12);
  }
  CHECK(std::abs(y_n(s, 2, {&zero, 1}) - 1.0) < 1e-12);
  CHECK(std::abs(z_n(s, 3, {&zero, 1}) - 1.0) < 1e-12);
  CHECK_THROWS_AS(y_n(s, 3, {&zero, 1}), DomainError);
  CHECK_THROWS_AS(z_n(s, 2, {&zero, 1}), DomainError);
  CHECK_THROWS_AS(y_n(s, -2, {&zero, 1}), DomainError);

  // (-i)^q u^q exponents against a high-precision oracle:
  // Y_n: exp(i x (-i)^q u^q); Z_n: exp(x (-i)^q u^q) = exp(i (-i x) (-i)^q u^q).
  for (int q : {2, 4}) {
    for (double x : {-0.9, 0.5}) {
      const cplx z = x * std::pow(cplx(0.0, -1.0), q);
      CHECK(std::abs(y_n(s, q, {&x, 1}) - oracle_power_sum(2.0, 50, q, z)) < 1e-10);
    }
  }
  for (int q : {1, 3}) {
    for (double x : {-0.9, 0.5}) {
      const cplx z = cplx(0.0, -x) * std::pow(cplx(0.0, -1.0), q);
      CHECK(std::abs(z_n(s, q, {&x, 1}) - oracle_power_sum(2.0, 50, q, z)) < 1e-10);
    }
  }
  // Limits.
  const double x = 0.6;
  CHECK(std::abs(y_limit(s, 2, {&x, 1}) - std::exp(cplx(0.0, x) * std::pow(cplx(0.0, -2.0), 2))) < 1e-14);
  CHECK(std::abs(z_limit(s, 3, {&x, 1}) - std::exp(x * std::pow(cplx(0.0, -2.0), 3))) < 1e-14);
  // Z_1 is F_n at -x: the (-i) turns exp(x u) into exp(-i x u).
  const auto s1 = spec1(2.0, 20);
  CHECK(std::abs(z_n(s1, 1, {&x, 1}) - std::conj(oracle_product(2.0, 20, x))) < 1e-12);
  CHECK(std::abs(z_limit(s1, 1, {&x, 1}) - std::polar(1.0, -2.0 * x)) < 1e-15);
}

TEST_CASE("mode signs") {
  CHECK(y_mode_sign(0) == 1);
  CHECK(y_mode_sign(2) == -1);
  CHECK(y_mode_sign(4) == 1);
  CHECK(z_mode_sign(1) == -1);
  CHECK(z_mode_sign(3) == 1);
}

TEST_CASE("Y_n converges towards its limit") {
  const auto err = [](int n) {
    const auto s = spec1(2.0, n);
    return sup_error_on_compact([&](std::span<const double> x) { return y_n(s, 2, x); },
                                [&](std::span<const double> x) { return y_limit(s, 2, x); },
                                Box{{-1.0}, {1.0}}, 201);
  };
  CHECK(err(50) < err(10));
}

TEST_CASE("local frequency") {
  const int N = 101;
  const double h = 0.01;
  std::vector<cplx> wave(N), real(N);
  for (int i = 0; i < N; ++i) {
    const double x = -0.5 + i * h;
    wave[i] = std::polar(1.0, 2.0 * 1.5 * x);
    real[i] = 1.0 + x * x;
  }
  const auto kw = local_frequency(wave, h);
  const auto kr = local_frequency(real, h);
  for (int i = 1; i + 1 < N; ++i) {
    CHECK(kw[i] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(kr[i] == 0.0);
  }
  // Zeros are masked rather than extrapolated.
  std::vector<cplx> dip{1.0, 1e-12, 1.0};
  const auto kd = local_frequency(dip, 0.1);
  for (double v : kd) CHECK(std::isnan(v));
}

TEST_CASE("superoscillation near the origin") {
  const auto local_max = [](double a) {
    const auto s = spec1(a, 20);
    const double h = 1e-3;
    std::vector<cplx> v;
    for (int i = -20; i <= 20; ++i) {
      const double x = i * h;
      v.push_back(f_n_product(s, {&x, 1}));
    }
    const auto k = local_frequency(v, h);
    double m = 0.0;
    for (std::size_t i = 1; i + 1 < k.size(); ++i) m = std::max(m, k[i]);
    return std::pair{m, k[20]};
  };
  const auto [m2, k0] = local_max(2.0);
  CHECK(k0 == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(m2 > band_limit(spec1(2.0, 20)).kmax[0]);
  CHECK(local_max(0.5).first < 1.0);
}

TEST_CASE("sup error on compact sets") {
  const auto lim = [&](const SuperoscSpec& s) {
    return Field([s](std::span<const double> x) { return f_limit(s, x); });
  };
  const Box unit{{-1.0}, {1.0}};
  const double e10 = sup_error_on_compact(spec1(2.0, 10), lim(spec1(2.0, 10)), unit, 201);
  const double e100 = sup_error_on_compact(spec1(2.0, 100), lim(spec1(2.0, 100)), unit, 201);
  const double e160 = sup_error_on_compact(spec1(2.0, 160), lim(spec1(2.0, 160)), unit, 201);
  CHECK(e100 < e10);
  CHECK(e160 <= 0.5 * e10);
  CHECK(sup_error_on_compact(spec1(2.0, 10), lim(spec1(2.0, 10)), Box{{0.0}, {0.0}}, 2) == 0.0);
  const double wide = sup_error_on_compact(spec1(2.0, 10), lim(spec1(2.0, 10)), Box{{-10.0}, {10.0}}, 2001);
  CHECK(wide >= e10);
}
