#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "superosc/errors.hpp"
#include "superosc/oscillator.hpp"
#include "superosc/quadrature.hpp"
#include "superosc/regularized.hpp"

using namespace superosc;
using cplx = std::complex<double>;
using HC = HamiltonianCase;
constexpr double pi = std::numbers::pi;

namespace {

PhysicalParams unit_params(double omega, double m = 1.0) {
  PhysicalParams p;
  p.m = m;
  p.omega = omega;
  return p;
}

// Oracle: 1/(m omega) \int_{t'}^{t} f(s) sin(omega (s - t')) ds by Simpson.
double oracle_I(const PhysicalParams& p, const ForceModel& f, double t, double tp) {
  std::function<double(double)> g = [&](double s) { return f(s)[0] * std::sin(p.omega * (s - tp)); };
  return oracle::simpson_richardson(g, tp, t, 400) / (p.m * p.omega);
}

// Oracle: the nested double integral for J, inner variable first.
double oracle_J(const PhysicalParams& p, const ForceModel& f, double t, double tp) {
  std::function<double(double)> outer = [&](double s) {
    std::function<double(double)> inner = [&](double sp) {
      return f(sp)[0] * std::sin(p.omega * (sp - tp));
    };
    const double in = (s == tp) ? 0.0 : oracle::simpson_richardson(inner, tp, s, 200);
    return f(s)[0] * std::sin(p.omega * (t - s)) * in;
  };
  return oracle::simpson_richardson(outer, tp, t, 200) / std::pow(p.m * p.omega, 2);
}

}  // namespace

TEST_CASE("g factor closed forms") {
  const auto p = unit_params(2.0);
  CHECK(g_factor(p, 1.0, 0.0, HC::free) == 1.0);
  CHECK(g_factor(p, 1.0, 0.0, HC::uniform) == 1.0);
  CHECK(g_factor(p, pi / 4, 0.0, HC::harmonic) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(g_factor(p, pi / 4, 0.0, HC::driven) == doctest::Approx(0.5).epsilon(1e-15));
  for (auto c : {HC::free, HC::uniform, HC::harmonic, HC::driven})
    CHECK(g_factor(p, 0.7, 0.7, c) == 0.0);
  CHECK_THROWS_AS(g_factor(unit_params(0.0), 1.0, 0.0, HC::harmonic), DomainError);
}

TEST_CASE("g satisfies its initial value problem") {
  const auto p = unit_params(1.7);
  const double h = 1e-4, tp = 0.3;
  for (double t : {0.5, 1.0, 2.0}) {
    const double gpp = (g_factor(p, t + h, tp, HC::harmonic) - 2.0 * g_factor(p, t, tp, HC::harmonic) +
                        g_factor(p, t - h, tp, HC::harmonic)) /
                       (h * h);
    CHECK(std::abs(gpp + p.omega * p.omega * g_factor(p, t, tp, HC::harmonic)) < 1e-5);
  }
  const double slope = (g_factor(p, tp + h, tp, HC::harmonic) - g_factor(p, tp - h, tp, HC::harmonic)) / (2 * h);
  CHECK(std::abs(slope - 1.0) < h * h);
}

TEST_CASE("case names round-trip") {
  for (auto c : {HC::free, HC::uniform, HC::harmonic, HC::driven})
    CHECK(parse_case(to_string(c)) == c);
  CHECK_THROWS_AS(parse_case("anharmonic"), DomainError);
}

TEST_CASE("force integral I") {
  const auto p = unit_params(1.3, 1.5);
  const auto zero = ForceModel::zero(1);
  CHECK(force_integral_I(p, zero, 1.0, 0.2)[0] == 0.0);
  const auto cst = ForceModel::constant({0.8});
  CHECK(force_integral_I(p, cst, 0.4, 0.4)[0] == 0.0);
  for (double t : {0.3, 1.0, 2.5}) {
    const double closed = 0.8 * (1.0 - std::cos(p.omega * t)) / (p.m * p.omega * p.omega);
    CHECK(std::abs(force_integral_I(p, cst, t, 0.0)[0] - closed) < 1e-14);
    CHECK(std::abs(force_integral_I_quadrature(p, cst, t, 0.0)[0] - closed) < 1e-12);
    CHECK(std::abs(oracle_I(p, cst, t, 0.0) - closed) < 1e-12);
  }
  // Oriented bounds: I(0, t) integrates from t down to 0.
  const auto sin_force = ForceModel::sinusoidal({0.5}, 2.1, 0.4);
  for (auto [t, tp] : {std::pair{1.0, 0.0}, std::pair{0.0, 1.0}, std::pair{-0.5, 0.7}}) {
    const double ref = oracle_I(p, sin_force, t, tp);
    CHECK(std::abs(force_integral_I(p, sin_force, t, tp)[0] - ref) < 1e-12);
  }
}

TEST_CASE("force integral J against nested quadrature") {
  const auto p = unit_params(1.0);
  const auto cst = ForceModel::constant({1.0});
  const double ref = oracle_J(p, cst, pi, 0.0);
  CHECK(std::abs(force_integral_J(p, cst, pi, 0.0) - ref) < 1e-10);
  CHECK(force_integral_J(p, cst, 0.5, 0.5) == 0.0);
  CHECK(force_integral_J(p, ForceModel::zero(1), 1.0, 0.0) == 0.0);

  const auto p2 = unit_params(0.9, 1.3);
  const auto sinus = ForceModel::sinusoidal({0.7}, 1.6, -0.3);
  for (auto [t, tp] : {std::pair{1.2, 0.1}, std::pair{0.0, 1.0}}) {
    const double r = oracle_J(p2, sinus, t, tp);
    CHECK(std::abs(force_integral_J(p2, sinus, t, tp) - r) < 1e-10);
    CHECK(std::abs(force_integral_J_quadrature(p2, sinus, t, tp) - r) < 1e-9);
  }
  // A sampled force takes the quadrature route.
  const auto sampled = ForceModel::sampled(1, [](double s) { return Vector{std::exp(-s)}; });
  CHECK(std::abs(force_integral_J(p2, sampled, 1.0, 0.0) - oracle_J(p2, sampled, 1.0, 0.0)) < 1e-9);
}

TEST_CASE("closed-form dispatch") {
  const auto p = unit_params(1.4);
  PhysicalParams p2 = p;
  p2.d = 2;
  const auto z = closed_form_IJ(p2, ForceModel::zero(2), 1.0, 0.0);
  CHECK(z.I == Vector{0.0, 0.0});
  CHECK(z.J == 0.0);
  CHECK_THROWS_AS(closed_form_IJ(p, ForceModel::sampled(1, [](double) { return Vector{1.0}; }), 1.0, 0.0),
                  DomainError);
  SUBCASE("resonant sinusoid") {
    const auto res = ForceModel::sinusoidal({0.6}, p.omega, 0.2);
    const auto r = closed_form_IJ(p, res, 1.1, 0.0);
    CHECK(r.resonant);
    CHECK(std::abs(r.I[0] - oracle_I(p, res, 1.1, 0.0)) < 1e-12);
    CHECK(std::abs(r.J - oracle_J(p, res, 1.1, 0.0)) < 1e-10);
    const auto near = ForceModel::sinusoidal({0.6}, p.omega * (1 + 1e-11), 0.2);
    CHECK(closed_form_IJ(p, near, 1.1, 0.0).resonant);
    CHECK_FALSE(closed_form_IJ(p, ForceModel::sinusoidal({0.6}, 2.0, 0.2), 1.1, 0.0).resonant);
  }
}

TEST_CASE("action closed forms") {
  const auto p = unit_params(1.0);
  const Vector x{2.0}, x0{0.0};
  CHECK(action(p, ForceModel::zero(1), 1.0, x, 0.0, x0, HC::free) == doctest::Approx(2.0));
  CHECK(action(p, ForceModel::zero(1), 1.0, x, 0.0, x0, HC::uniform) ==
        action(p, ForceModel::zero(1), 1.0, x, 0.0, x0, HC::free));
  for (double t : {0.3, 1.0, 2.0}) {
    const Vector a{0.4}, b{-1.1};
    CHECK(action(p, ForceModel::zero(1), t, a, 0.1, b, HC::driven) ==
          doctest::Approx(action(p, ForceModel::zero(1), t, a, 0.1, b, HC::harmonic)).epsilon(1e-15));
  }
  CHECK_THROWS_AS(action(p, ForceModel::zero(1), 0.5, x, 0.5, x0, HC::free), CausticError);
  try {
    action(p, ForceModel::zero(1), pi, x, 0.0, x0, HC::harmonic);
    FAIL("expected a caustic");
  } catch (const CausticError& e) {
    CHECK(e.singular_time() == doctest::Approx(pi));
  }
  CHECK_THROWS_AS(action(p, ForceModel::constant({1.0}), 1.0, x, 0.0, x0, HC::harmonic), DomainError);
}

TEST_CASE("trajectory oracle agrees with the closed-form action") {
  struct Setup {
    HC c;
    double omega, m;
    ForceModel f;
  };
  const std::vector<Setup> setups{
      {HC::free, 0.0, 1.0, ForceModel::zero(1)},
      {HC::uniform, 0.0, 2.0, ForceModel::constant({0.7})},
      {HC::harmonic, 1.2, 1.0, ForceModel::zero(1)},
      {HC::driven, 1.0, 2.0, ForceModel::constant({0.5})},
      {HC::driven, 0.8, 1.0, ForceModel::sinusoidal({0.9}, 1.7, 0.3)},
      {HC::driven, 1.1, 1.0, ForceModel::sampled(1, [](double s) { return Vector{std::cos(s) * s}; })},
  };
  for (const auto& s : setups) {
    const auto p = unit_params(s.omega, s.m);
    const Vector x{0.9}, xp{-0.4};
    const double exact = action(p, s.f, 1.3, x, 0.2, xp, s.c);
    const double traj = action_from_trajectory(p, s.f, 1.3, x, 0.2, xp, 2048);
    CHECK(std::abs(traj - exact) < 1e-8);
  }
  const auto p = unit_params(1.0);
  CHECK(action_from_trajectory(p, ForceModel::zero(1), 1.0, Vector{0.0}, 0.0, Vector{0.0}, 64) == 0.0);
  CHECK(std::abs(action_from_trajectory(unit_params(0.0), ForceModel::zero(1), 1.0, Vector{2.0}, 0.0,
                                        Vector{0.0}, 16) - 2.0) < 1e-10);
  CHECK_THROWS_AS(action_from_trajectory(p, ForceModel::zero(1), 1.0, Vector{0.0}, 0.0, Vector{0.0}, 15),
                  DomainError);
  CHECK_THROWS_AS(action_from_trajectory(p, ForceModel::zero(1), pi, Vector{0.0}, 0.0, Vector{1.0}, 64),
                  CausticError);
}

TEST_CASE("Simpson error of the trajectory oracle is fourth order") {
  const auto p = unit_params(1.0);
  const auto f = ForceModel::sampled(1, [](double s) { return Vector{std::sin(3 * s)}; });
  const Vector x{1.0}, xp{0.5};
  const double exact = action(p, f, 2.0, x, 0.0, xp, HC::driven);
  const double e1 = std::abs(action_from_trajectory(p, f, 2.0, x, 0.0, xp, 16) - exact);
  const double e2 = std::abs(action_from_trajectory(p, f, 2.0, x, 0.0, xp, 32) - exact);
  CHECK(e2 < e1);
  CHECK(std::log2(e1 / e2) > 3.5);
}

TEST_CASE("trajectory boundary values and spacing") {
  const auto p = unit_params(0.9);
  const auto f = ForceModel::sinusoidal({0.3}, 0.5, 0.0);
  const auto tr = solve_trajectory(p, f, 1.5, Vector{0.2}, 0.0, Vector{-0.7}, 100);
  REQUIRE(tr.samples.size() == 101);
  CHECK(std::abs(tr.samples.front().y[0] + 0.7) < 1e-12);
  CHECK(std::abs(tr.samples.back().y[0] - 0.2) < 1e-10);
  CHECK(tr.spacing == doctest::Approx(0.015));
}

TEST_CASE("kernel values and modulus law") {
  const auto free = unit_params(0.0);
  const Vector x{0.3};
  const cplx g = propagator_kernel(free, ForceModel::zero(1), 1.0, x, 0.0, x, HC::free);
  CHECK(std::abs(g - std::pow(cplx(0.0, 2.0 * pi), -0.5)) < 1e-15);

  const auto p = unit_params(1.3, 1.7);
  const auto f = ForceModel::constant({0.4});
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (auto c : {HC::harmonic, HC::driven}) {
    const auto& force = c == HC::driven ? f : ForceModel::zero(1);
    const double mod = propagator_modulus(p, 1.1, 0.0, c);
    CHECK(mod == doctest::Approx(std::sqrt(p.m / (2 * pi * p.hbar * std::abs(std::sin(1.3 * 1.1) / 1.3)))));
    for (int i = 0; i < 50; ++i) {
      const Vector a{u(rng)}, b{u(rng)};
      CHECK(std::abs(std::abs(propagator_kernel(p, force, 1.1, a, 0.0, b, c)) - mod) < 1e-14 * mod);
    }
  }
  PhysicalParams p3 = p;
  p3.d = 3;
  CHECK(propagator_modulus(p3, 1.1, 0.0, HC::harmonic) ==
        doctest::Approx(std::pow(propagator_modulus(p, 1.1, 0.0, HC::harmonic), 3)));
  CHECK_THROWS_AS(propagator_kernel(p, ForceModel::zero(1), 0.0, x, 0.0, x, HC::harmonic), CausticError);
}

TEST_CASE("kernel concentrates on the datum as t -> t'") {
  // Free evolution of exp(-x^2) is (1 + 2it)^{-1/2} exp(-x^2/(1 + 2it)) for m = hbar = 1.
  const auto p = unit_params(0.0);
  for (double t : {1e-2, 1e-3}) {
    for (double x : {0.0, 0.5}) {
      const auto slice = propagator_slice(p, ForceModel::zero(1), t, Vector{x}, 0.0, HC::free);
      OscillatoryHint hint{slice.phase.s2, slice.phase.s1[0], 0.0};
      const auto bp = oscillatory_partition(hint, -7.0, 7.0, pi, 0.25);
      QuadratureOptions opt;
      opt.abs_tol = 1e-12;
      const auto r = integrate<cplx>(
          [&](double y) { return slice(std::span<const double>(&y, 1)) * std::exp(-y * y); }, bp, opt);
      const cplx exact = std::exp(-x * x / cplx(1.0, 2.0 * t)) / std::sqrt(cplx(1.0, 2.0 * t));
      CHECK(std::abs(r.value - exact) < 1e-9);
      CHECK(std::abs(r.value - std::exp(-x * x)) < 3.0 * t);
    }
  }
}

TEST_CASE("Chapman-Kolmogorov composition") {
  struct Setup {
    HC c;
    double omega;
  };
  for (const auto& s : {Setup{HC::free, 0.0}, Setup{HC::harmonic, 1.0}}) {
    const auto p = unit_params(s.omega);
    const auto zero = ForceModel::zero(1);
    const double t = 1.0, mid = 0.6, tp = 0.0;
    const Vector x{0.4}, xp{-0.3};
    // The zero-force action is symmetric in its two points, so G(mid, y, tp, xp) is a
    // slice in y with source xp.
    const auto left = propagator_slice(p, zero, t, x, mid, s.c);
    const auto right = propagator_slice(p, zero, mid, xp, tp, s.c);
    OscillatoryHint hint{(left.phase.s2 + right.phase.s2) / p.hbar,
                         (left.phase.s1[0] + right.phase.s1[0]) / p.hbar, 0.0};
    const auto r = regularized_integral(
        [&](double y) {
          const std::span<const double> yy(&y, 1);
          return left(yy) * right(yy);
        },
        hint);
    const cplx direct = propagator_kernel(p, zero, t, x, tp, xp, s.c);
    CHECK(std::abs(r.value - direct) < 1e-4);
  }
}

TEST_CASE("case reductions") {
  const Vector x{0.7}, xp{-0.2};
  const auto f0 = ForceModel::constant({0.6});
  SUBCASE("driven with zero force equals harmonic") {
    const auto p = unit_params(1.5);
    CHECK(propagator_kernel(p, ForceModel::zero(1), 0.8, x, 0.0, xp, HC::driven) ==
          propagator_kernel(p, ForceModel::zero(1), 0.8, x, 0.0, xp, HC::harmonic));
  }
  SUBCASE("uniform with zero force equals free") {
    const auto p = unit_params(0.0);
    CHECK(action(p, ForceModel::zero(1), 0.8, x, 0.0, xp, HC::uniform) ==
          action(p, ForceModel::zero(1), 0.8, x, 0.0, xp, HC::free));
  }
  SUBCASE("driven tends to uniform as omega -> 0") {
    const double sd = action(unit_params(1e-4), f0, 0.8, x, 0.0, xp, HC::driven);
    const double su = action(unit_params(0.0), f0, 0.8, x, 0.0, xp, HC::uniform);
    CHECK(std::abs(sd - su) < 1e-6 * std::abs(su));
    const double hd = action(unit_params(1e-4), ForceModel::zero(1), 0.8, x, 0.0, xp, HC::harmonic);
    const double hf = action(unit_params(0.0), ForceModel::zero(1), 0.8, x, 0.0, xp, HC::free);
    CHECK(std::abs(hd - hf) < 1e-6 * std::abs(hf));
  }
  SUBCASE("free and harmonic cases reject forces") {
    CHECK_THROWS_AS(action(unit_params(0.0), f0, 0.8, x, 0.0, xp, HC::free), DomainError);
  }
}
