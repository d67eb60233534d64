#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "superosc/errors.hpp"
#include "superosc/quadrature.hpp"
#include "superosc/regularized.hpp"

using namespace superosc;
using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;

TEST_CASE("adaptive Gauss-Kronrod integrates smooth functions") {
  const auto r = integrate<double>([](double x) { return std::exp(x); }, 0.0, 1.0);
  CHECK(r.converged);
  CHECK(std::abs(r.value - (std::exp(1.0) - 1.0)) < 1e-13);
  const auto s = integrate<double>([](double x) { return std::sin(x); }, 0.0, pi);
  CHECK(std::abs(s.value - 2.0) < 1e-13);
}

TEST_CASE("orientation: reversed limits flip the sign") {
  const auto f = [](double x) { return x * x; };
  const auto fwd = integrate<double>(f, 0.0, 2.0);
  const auto bwd = integrate<double>(f, 2.0, 0.0);
  CHECK(std::abs(fwd.value - 8.0 / 3.0) < 1e-13);
  CHECK(std::abs(bwd.value + 8.0 / 3.0) < 1e-13);
}

TEST_CASE("adaptivity resolves endpoint singularities") {
  QuadratureOptions opt;
  opt.abs_tol = 1e-10;
  const auto r = integrate<double>([](double x) { return std::log(x); }, 0.0, 1.0, opt);
  CHECK(std::abs(r.value + 1.0) < 1e-9);
  // The depth cap of 30 bisections bounds what 1/sqrt(x) can reach: the
  // innermost panel [0, 2^-30] alone carries 2^-14 of the integral.
  const auto s = integrate<double>([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, opt);
  CHECK(std::abs(s.value - 2.0) < 1e-5);
  CHECK_FALSE(s.converged);
}

TEST_CASE("complex integrands and breakpoints") {
  std::vector<double> bp{0.0, 1.0, 2.0, 3.0};
  const auto r = integrate<cplx>([](double x) { return std::polar(1.0, 5.0 * x); }, bp);
  const cplx exact = (std::polar(1.0, 15.0) - 1.0) / cplx(0.0, 5.0);
  CHECK(std::abs(r.value - exact) < 1e-12);
  CHECK(r.l1 == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("Gauss-Legendre rules are exact up to degree 2n-1") {
  for (int n : {1, 2, 5, 12, 40}) {
    const GaussRule g = gauss_legendre(n);
    REQUIRE(g.nodes.size() == static_cast<std::size_t>(n));
    double wsum = 0.0;
    for (double w : g.weights) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    const int deg = 2 * n - 2;  // even degree below the exactness limit
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += g.weights[i] * std::pow(g.nodes[i], deg);
    CHECK(acc == doctest::Approx(2.0 / (deg + 1)).epsilon(1e-13));
  }
}

TEST_CASE("composite Simpson: exact for cubics, fourth order otherwise") {
  std::vector<double> cubic(9);
  const double h = 0.25;
  for (int i = 0; i < 9; ++i) {
    const double x = i * h;
    cubic[i] = x * x * x - x;
  }
  CHECK(simpson(cubic, h) == doctest::Approx(4.0 - 2.0).epsilon(1e-14));
  auto err = [](int panels) {
    std::vector<double> v(panels + 1);
    const double hh = 1.0 / panels;
    for (int i = 0; i <= panels; ++i) v[i] = std::exp(i * hh);
    return std::abs(simpson(v, hh) - (std::exp(1.0) - 1.0));
  };
  CHECK(std::log2(err(16) / err(32)) > 3.9);
  CHECK_THROWS_AS(simpson(std::vector<double>(4, 1.0), 0.1), DomainError);
}

TEST_CASE("polynomial extrapolation to zero") {
  std::vector<double> x{0.4, 0.2, 0.1, 0.05};
  std::vector<cplx> y;
  for (double v : x) y.push_back(cplx(1.0, -2.0) + 3.0 * v - cplx(0.0, 5.0) * v * v);
  const auto e = extrapolate_to_zero(x, y, 2);
  CHECK(std::abs(e.value - cplx(1.0, -2.0)) < 1e-13);
  CHECK(e.residual < 1e-13);
  const auto lin = extrapolate_to_zero(x, y, 1);
  CHECK(lin.residual > 1e-3);
}

TEST_CASE("regularized Fresnel integrals") {
  for (double alpha : {0.5, 1.0, 2.0}) {
    OscillatoryHint hint{alpha, 0.0, 0.0};
    const auto r = regularized_integral([&](double x) { return std::polar(1.0, alpha * x * x); },
                                        hint);
    const cplx exact = std::sqrt(cplx(0.0, pi / alpha));
    CHECK(std::abs(r.value - exact) < 1e-6);
    REQUIRE(r.values.size() == 4);
    // Each regularized value matches its own closed form sqrt(pi/(beta - i alpha)).
    for (std::size_t i = 0; i < r.values.size(); ++i) {
      const cplx ref = std::sqrt(pi / cplx(r.betas[i], -alpha));
      CHECK(std::abs(r.values[i] - ref) < 1e-9);
    }
  }
}

TEST_CASE("regularized integral of a Gaussian-free plane wave mixture") {
  // \int exp(i x^2 + 2 i x) dx = sqrt(i pi) exp(-i).
  OscillatoryHint hint{1.0, 2.0, 0.0};
  const auto r = regularized_integral(
      [](double x) { return std::polar(1.0, x * x + 2.0 * x); }, hint);
  const cplx exact = std::sqrt(cplx(0.0, pi)) * std::polar(1.0, -1.0);
  CHECK(std::abs(r.value - exact) < 1e-6);
}

TEST_CASE("regularized integral rejects bad schedules") {
  RegularizedOptions opt;
  opt.betas = {1e-2, 5e-3};
  CHECK_THROWS_AS(regularized_integral([](double) { return cplx(1.0); }, {}, opt), DomainError);
  opt.betas = {1e-2, -5e-3, 1e-3};
  CHECK_THROWS_AS(regularized_integral([](double) { return cplx(1.0); }, {}, opt), DomainError);
}

TEST_CASE("oscillatory partition bounds the phase per panel") {
  OscillatoryHint hint{2.0, 1.0, 0.5};
  const auto bp = oscillatory_partition(hint, -10.0, 10.0, pi, 1.0);
  CHECK(bp.front() == -10.0);
  CHECK(bp.back() == 10.0);
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    const double a = bp[i], b = bp[i + 1];
    const double fa = std::abs(4.0 * a + 1.0) + 0.5, fb = std::abs(4.0 * b + 1.0) + 0.5;
    CHECK(b > a);
    CHECK((b - a) * std::max(fa, fb) <= pi * (1.0 + 1e-9));
  }
}
