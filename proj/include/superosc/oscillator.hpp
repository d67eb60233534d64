#pragma once

// Classical ingredients of the (driven) harmonic oscillator propagator:
// g(t,t'), the force integrals I and J, the action S and the kernel.

#include <complex>
#include <span>
#include <vector>

#include "superosc/force.hpp"
#include "superosc/params.hpp"

namespace superosc {

enum class HamiltonianCase { free, uniform, harmonic, driven };

const char* to_string(HamiltonianCase c);
HamiltonianCase parse_case(const std::string& name);

/// t - t' for the free and uniform cases, sin(omega (t - t')) / omega otherwise.
double g_factor(const PhysicalParams& params, double t, double t_prime, HamiltonianCase c);

/// I(t,t') = 1/(m omega) \int_{t'}^{t} f(s) sin(omega (s - t')) ds, oriented.
Vector force_integral_I(const PhysicalParams& params, const ForceModel& force, double t,
                        double t_prime);

/// J(t,t') = 1/(m omega)^2 \int_{t'}^{t} \int_{t'}^{s} f(s).f(s') sin(omega (t-s)) sin(omega (s'-t')) ds' ds.
double force_integral_J(const PhysicalParams& params, const ForceModel& force, double t,
                        double t_prime);

/// Quadrature routes for I and J, valid for every force kind.
Vector force_integral_I_quadrature(const PhysicalParams& params, const ForceModel& force,
                                   double t, double t_prime, double abs_tol = 1e-12);
double force_integral_J_quadrature(const PhysicalParams& params, const ForceModel& force,
                                   double t, double t_prime, double abs_tol = 1e-10);

struct ForceIntegrals {
  Vector I;
  double J = 0.0;
  bool resonant = false;  ///< sinusoidal drive with nu == omega
};

/// Analytic (I, J) for zero, constant and sinusoidal forces.
ForceIntegrals closed_form_IJ(const PhysicalParams& params, const ForceModel& force, double t,
                              double t_prime);

/// Classical action from the closed forms of the four Hamiltonian cases.
double action(const PhysicalParams& params, const ForceModel& force, double t,
              std::span<const double> x, double t_prime, std::span<const double> x_prime,
              HamiltonianCase c);

struct TrajectorySample {
  double s;
  Vector y;
  Vector velocity;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  double spacing = 0.0;
};

/// Solves y'' + omega^2 y = f/m with y(t') = x', y(t) = x on `intervals`
/// equal subintervals. Closed form for zero/constant forces, shooting with
/// RK4 for the particular solution otherwise.
Trajectory solve_trajectory(const PhysicalParams& params, const ForceModel& force, double t,
                            std::span<const double> x, double t_prime,
                            std::span<const double> x_prime, int intervals);

/// Action as the Simpson integral of the Lagrangian along solve_trajectory.
/// `steps` is the (even, >= 16) number of subintervals.
double action_from_trajectory(const PhysicalParams& params, const ForceModel& force, double t,
                              std::span<const double> x, double t_prime,
                              std::span<const double> x_prime, int steps);

/// Action restricted to a fixed (t, x, t'): S(x') = s0 + s1.x' + s2 |x'|^2.
struct ActionQuadratic {
  double s0 = 0.0;
  Vector s1;
  double s2 = 0.0;
  double operator()(std::span<const double> x_prime) const {
    return s0 + dot(s1, x_prime) + s2 * norm2(x_prime);
  }
};

/// Kernel as a function of the source point x' for fixed (t, x, t').
struct PropagatorSlice {
  std::complex<double> prefactor;
  ActionQuadratic phase;  ///< action (not divided by hbar)
  double hbar = 1.0;
  std::complex<double> operator()(std::span<const double> x_prime) const;
};

PropagatorSlice propagator_slice(const PhysicalParams& params, const ForceModel& force, double t,
                                 std::span<const double> x, double t_prime, HamiltonianCase c);

/// [m / (2 pi i hbar g)]^{d/2} exp(i S / hbar) with the principal square root.
/// Oscillator cases are restricted to 0 < omega (t - t') < pi.
std::complex<double> propagator_kernel(const PhysicalParams& params, const ForceModel& force,
                                       double t, std::span<const double> x, double t_prime,
                                       std::span<const double> x_prime, HamiltonianCase c);

/// |kernel| = (m / (2 pi hbar |g|))^{d/2}.
double propagator_modulus(const PhysicalParams& params, double t, double t_prime,
                          HamiltonianCase c);

namespace detail {
/// \int_0^1 exp(i a v) dv.
std::complex<double> exp_integral1(double a);
/// \int_0^1 \int_0^v exp(i (a v + b w)) dw dv.
std::complex<double> exp_integral2(double a, double b);
}  // namespace detail

}  // namespace superosc
