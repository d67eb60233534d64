#include "superosc/oscillator.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "superosc/quadrature.hpp"

namespace superosc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCausticTol = 1e-12;
constexpr double kResonanceTol = 1e-9;

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

// 1 - cos x - x sin(x) / 2, which starts at x^4 / 24.
double drive_shape(double x) {
  if (std::abs(x) < 1.0) {
    const double x2 = x * x;
    double term = x2 * x2 / 24.0;  // j = 2 term without the (j-1) factor
    double sum = 0.0;
    for (int j = 2; j < 30; ++j) {
      sum += (j - 1) * term;
      term *= -x2 / ((2.0 * j + 1.0) * (2.0 * j + 2.0));
      if (std::abs(term) * j < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  return 1.0 - std::cos(x) - 0.5 * x * std::sin(x);
}

bool oscillatory(HamiltonianCase c) {
  return c == HamiltonianCase::harmonic || c == HamiltonianCase::driven;
}

double nearest_caustic(const PhysicalParams& params, double t_prime, double elapsed,
                       HamiltonianCase c) {
  if (!oscillatory(c)) return t_prime;
  const double k = std::round(params.omega * elapsed / kPi);
  return t_prime + k * kPi / params.omega;
}

void check_caustic(const PhysicalParams& params, double t, double t_prime, HamiltonianCase c) {
  const double elapsed = t - t_prime;
  bool singular;
  if (oscillatory(c))
    singular = std::abs(std::sin(params.omega * elapsed)) < kCausticTol;
  else
    singular = std::abs(elapsed) <= kCausticTol * std::max(1.0, std::abs(t));
  if (singular) {
    const double ts = nearest_caustic(params, t_prime, elapsed, c);
    std::ostringstream os;
    os.precision(17);
    os << "caustic: g(t,t') = 0 at t = " << t << " (singular time t* = " << ts << ")";
    throw CausticError(os.str(), ts);
  }
}

void require_force_zero(const ForceModel& force, HamiltonianCase c) {
  if (!force.is_zero())
    throw DomainError(std::string("the ") + to_string(c) +
                      " case has no driving force; use the uniform or driven case");
}

void require_dims(const PhysicalParams& params, const ForceModel& force) {
  params.validate();
  if (force.dimension() != params.d) throw DomainError("force dimension does not match params.d");
}

std::complex<double> kernel_prefactor(const PhysicalParams& params, double t, double t_prime,
                                      HamiltonianCase c) {
  check_caustic(params, t, t_prime, c);
  const double g = g_factor(params, t, t_prime, c);
  if (oscillatory(c) && std::abs(params.omega * (t - t_prime)) >= kPi) {
    throw DomainError(
        "t - t' lies outside the branch window (-pi/omega, pi/omega); re-anchor t' before the "
        "caustic");
  }
  const std::complex<double> base(0.0, -params.m / (2.0 * kPi * params.hbar * g));
  const std::complex<double> root = std::sqrt(base);
  std::complex<double> out = 1.0;
  for (int i = 0; i < params.d; ++i) out *= root;
  return out;
}

}  // namespace

const char* to_string(HamiltonianCase c) {
  switch (c) {
    case HamiltonianCase::free: return "free";
    case HamiltonianCase::uniform: return "uniform";
    case HamiltonianCase::harmonic: return "harmonic";
    case HamiltonianCase::driven: return "driven";
  }
  return "unknown";
}

HamiltonianCase parse_case(const std::string& name) {
  if (name == "free") return HamiltonianCase::free;
  if (name == "uniform") return HamiltonianCase::uniform;
  if (name == "harmonic") return HamiltonianCase::harmonic;
  if (name == "driven") return HamiltonianCase::driven;
  throw DomainError("unknown Hamiltonian case '" + name + "'");
}

double g_factor(const PhysicalParams& params, double t, double t_prime, HamiltonianCase c) {
  if (!oscillatory(c)) return t - t_prime;
  params.require_oscillator();
  return std::sin(params.omega * (t - t_prime)) / params.omega;
}

namespace detail {

std::complex<double> exp_integral1(double a) {
  return std::polar(sinc(0.5 * a), 0.5 * a);
}

namespace {

// Second divided difference of exp at i*y0, i*y1, i*y2.
std::complex<double> exp_dd2(double y0, double y1, double y2) {
  double lo = std::min({y0, y1, y2});
  double hi = std::max({y0, y1, y2});
  double mid = y0 + y1 + y2 - lo - hi;
  const double spread = hi - lo;
  const std::complex<double> i(0.0, 1.0);
  if (spread <= 2.0) {
    const double c = 0.5 * (hi + lo);
    const std::complex<double> z[3] = {i * (y0 - c), i * (y1 - c), i * (y2 - c)};
    // complete homogeneous symmetric polynomials h_k(z0, z1, z2)
    constexpr int K = 34;
    std::complex<double> h1[K], h2[K], h3[K];
    h1[0] = h2[0] = h3[0] = 1.0;
    for (int k = 1; k < K; ++k) {
      h1[k] = h1[k - 1] * z[0];
      h2[k] = h1[k] + z[1] * h2[k - 1];
      h3[k] = h2[k] + z[2] * h3[k - 1];
    }
    std::complex<double> sum = 0.0;
    double fact = 2.0;  // (k+2)!
    for (int k = 0; k < K; ++k) {
      sum += h3[k] / fact;
      fact *= (k + 3);
    }
    return std::polar(1.0, c) * sum;
  }
  auto dd1 = [](double p, double q) { return std::polar(sinc(0.5 * (q - p)), 0.5 * (p + q)); };
  return (dd1(mid, hi) - dd1(lo, mid)) / (i * spread);
}

}  // namespace

std::complex<double> exp_integral2(double a, double b) { return exp_dd2(0.0, a, a + b); }

}  // namespace detail

ForceIntegrals closed_form_IJ(const PhysicalParams& params, const ForceModel& force, double t,
                              double t_prime) {
  require_dims(params, force);
  params.require_oscillator();
  const double w = params.omega;
  const double m = params.m;
  const double T = t - t_prime;
  ForceIntegrals out;
  out.I.assign(params.d, 0.0);
  switch (force.kind()) {
    case ForceModel::Kind::zero:
      return out;
    case ForceModel::Kind::constant: {
      const double s = std::sin(0.5 * w * T);
      const double shape = 2.0 * s * s / (m * w * w);
      const auto& f0 = force.amplitude();
      for (int j = 0; j < params.d; ++j) out.I[j] = f0[j] * shape;
      out.J = norm2(f0) * drive_shape(w * T) / (m * m * w * w * w * w);
      return out;
    }
    case ForceModel::Kind::sinusoidal: {
      double nu = force.frequency();
      if (std::abs(nu - w) < kResonanceTol * w) {
        nu = w;
        out.resonant = true;
      } else if (std::abs(nu + w) < kResonanceTol * w) {
        nu = -w;
        out.resonant = true;
      }
      const double psi0 = nu * t_prime + force.phase();
      const std::complex<double> i(0.0, 1.0);
      std::complex<double> single = 0.0;
      for (int sg : {-1, 1})
        for (int tau : {-1, 1})
          single += (static_cast<double>(tau) / (4.0 * i)) * std::polar(1.0, sg * psi0) *
                    detail::exp_integral1((sg * nu + tau * w) * T);
      const double i_scale = T / (m * w) * single.real();
      const auto& f0 = force.amplitude();
      for (int j = 0; j < params.d; ++j) out.I[j] = f0[j] * i_scale;

      std::complex<double> dbl = 0.0;
      for (int s1 : {-1, 1})
        for (int t1 : {-1, 1})
          for (int s2 : {-1, 1})
            for (int t2 : {-1, 1})
              dbl += (-t1 * t2 / 16.0) * std::polar(1.0, (s1 + s2) * psi0 + t1 * w * T) *
                     detail::exp_integral2((s1 * nu - t1 * w) * T, (s2 * nu + t2 * w) * T);
      out.J = norm2(f0) * T * T / (m * m * w * w) * dbl.real();
      return out;
    }
    case ForceModel::Kind::sampled:
      throw DomainError("closed_form_IJ: unsupported force kind 'sampled'; use the quadrature path");
  }
  return out;
}

Vector force_integral_I_quadrature(const PhysicalParams& params, const ForceModel& force,
                                   double t, double t_prime, double abs_tol) {
  require_dims(params, force);
  params.require_oscillator();
  const double w = params.omega;
  const double scale = 1.0 / (params.m * w);
  Vector out(params.d, 0.0);
  if (t == t_prime) return out;
  QuadratureOptions opt;
  opt.abs_tol = abs_tol;
  for (int j = 0; j < params.d; ++j) {
    auto integrand = [&](double s) { return force(s)[j] * std::sin(w * (s - t_prime)) * scale; };
    const auto r = integrate<double>(integrand, t_prime, t, opt);
    if (!r.converged)
      throw NumericError("force_integral_I: quadrature did not converge (achieved " +
                             std::to_string(r.error) + ")",
                         r.error);
    out[j] = r.value;
  }
  return out;
}

double force_integral_J_quadrature(const PhysicalParams& params, const ForceModel& force,
                                   double t, double t_prime, double abs_tol) {
  require_dims(params, force);
  params.require_oscillator();
  const double w = params.omega;
  const double m = params.m;
  if (t == t_prime) return 0.0;
  QuadratureOptions inner_opt;
  inner_opt.abs_tol = 0.1 * abs_tol;
  double worst_inner = 0.0;
  auto outer = [&](double s) {
    const Vector fs = force(s);
    double acc = 0.0;
    for (int j = 0; j < params.d; ++j) {
      if (fs[j] == 0.0) continue;
      auto inner = [&](double sp) { return force(sp)[j] * std::sin(w * (sp - t_prime)); };
      const auto r = integrate<double>(inner, t_prime, s, inner_opt);
      if (!r.converged) worst_inner = std::max(worst_inner, r.error);
      acc += fs[j] * r.value;
    }
    return acc * std::sin(w * (t - s)) / (m * m * w * w);
  };
  QuadratureOptions opt;
  opt.abs_tol = abs_tol;
  const auto r = integrate<double>(outer, t_prime, t, opt);
  if (!r.converged || worst_inner > 0.0) {
    const double achieved = std::max(r.error, worst_inner);
    throw NumericError("force_integral_J: nested quadrature did not converge (achieved " +
                           std::to_string(achieved) + ")",
                       achieved);
  }
  return r.value;
}

Vector force_integral_I(const PhysicalParams& params, const ForceModel& force, double t,
                        double t_prime) {
  if (force.kind() == ForceModel::Kind::sampled)
    return force_integral_I_quadrature(params, force, t, t_prime);
  return closed_form_IJ(params, force, t, t_prime).I;
}

double force_integral_J(const PhysicalParams& params, const ForceModel& force, double t,
                        double t_prime) {
  if (force.kind() == ForceModel::Kind::sampled)
    return force_integral_J_quadrature(params, force, t, t_prime);
  return closed_form_IJ(params, force, t, t_prime).J;
}

double action(const PhysicalParams& params, const ForceModel& force, double t,
              std::span<const double> x, double t_prime, std::span<const double> x_prime,
              HamiltonianCase c) {
  require_dims(params, force);
  require_dimension(x, params.d, "action: x");
  require_dimension(x_prime, params.d, "action: x'");
  const double m = params.m;
  const double T = t - t_prime;
  check_caustic(params, t, t_prime, c);

  double dx2 = 0.0;
  for (int j = 0; j < params.d; ++j) dx2 += (x[j] - x_prime[j]) * (x[j] - x_prime[j]);

  switch (c) {
    case HamiltonianCase::free:
      require_force_zero(force, c);
      return m * dx2 / (2.0 * T);
    case HamiltonianCase::uniform: {
      if (force.kind() != ForceModel::Kind::zero && force.kind() != ForceModel::Kind::constant)
        throw DomainError("the uniform case needs a constant force");
      const auto& f = force.amplitude();
      double f_sum = 0.0;
      for (int j = 0; j < params.d; ++j) f_sum += f[j] * (x[j] + x_prime[j]);
      return m * dx2 / (2.0 * T) + 0.5 * T * f_sum - norm2(f) * T * T * T / (24.0 * m);
    }
    case HamiltonianCase::harmonic: {
      params.require_oscillator();
      require_force_zero(force, c);
      const double wt = params.omega * T;
      return m * params.omega / (2.0 * std::sin(wt)) *
             ((norm2(x) + norm2(x_prime)) * std::cos(wt) - 2.0 * dot(x, x_prime));
    }
    case HamiltonianCase::driven: {
      params.require_oscillator();
      const double wt = params.omega * T;
      const Vector i_fwd = force_integral_I(params, force, t, t_prime);
      const Vector i_bwd = force_integral_I(params, force, t_prime, t);
      const double J = force_integral_J(params, force, t, t_prime);
      return m * params.omega / (2.0 * std::sin(wt)) *
             ((norm2(x) + norm2(x_prime)) * std::cos(wt) - 2.0 * dot(x, x_prime) +
              2.0 * dot(x, i_fwd) + 2.0 * dot(x_prime, i_bwd) - 2.0 * J);
    }
  }
  return 0.0;
}

Trajectory solve_trajectory(const PhysicalParams& params, const ForceModel& force, double t,
                            std::span<const double> x, double t_prime,
                            std::span<const double> x_prime, int intervals) {
  require_dims(params, force);
  require_dimension(x, params.d, "trajectory: x");
  require_dimension(x_prime, params.d, "trajectory: x'");
  if (intervals < 1) throw DomainError("trajectory needs at least one interval");
  const double w = params.omega;
  const double m = params.m;
  const double T = t - t_prime;
  const HamiltonianCase c = w > 0.0 ? HamiltonianCase::harmonic : HamiltonianCase::free;
  check_caustic(params, t, t_prime, c);

  // Homogeneous basis cos(w u), sin(w u)/w and their derivatives.
  auto hc = [&](double u) { return w > 0.0 ? std::cos(w * u) : 1.0; };
  auto hs = [&](double u) { return w > 0.0 ? std::sin(w * u) / w : u; };
  auto hc_dot = [&](double u) { return w > 0.0 ? -w * std::sin(w * u) : 0.0; };
  auto hs_dot = [&](double u) { return w > 0.0 ? std::cos(w * u) : 1.0; };

  const int d = params.d;
  const double h = T / intervals;
  // Particular solution with zero initial data, per sample: value and derivative.
  std::vector<Vector> yp(intervals + 1, Vector(d, 0.0));
  std::vector<Vector> vp(intervals + 1, Vector(d, 0.0));

  const bool closed = force.kind() == ForceModel::Kind::zero ||
                      force.kind() == ForceModel::Kind::constant;
  if (closed) {
    const Vector f = force.amplitude();
    for (int k = 0; k <= intervals; ++k) {
      const double u = k * h;
      double shape, shape_dot;
      if (w > 0.0) {
        const double s = std::sin(0.5 * w * u);
        shape = 2.0 * s * s / (w * w);
        shape_dot = std::sin(w * u) / w;
      } else {
        shape = 0.5 * u * u;
        shape_dot = u;
      }
      for (int j = 0; j < d; ++j) {
        yp[k][j] = f[j] / m * shape;
        vp[k][j] = f[j] / m * shape_dot;
      }
    }
  } else {
    // RK4 on (y, v)' = (v, f/m - w^2 y).
    Vector y(d, 0.0), v(d, 0.0);
    auto accel = [&](double u, const Vector& yy) {
      Vector a = force(t_prime + u);
      for (int j = 0; j < d; ++j) a[j] = a[j] / m - w * w * yy[j];
      return a;
    };
    for (int k = 0; k < intervals; ++k) {
      const double u = k * h;
      Vector k1y = v, k1v = accel(u, y);
      Vector y2(d), v2(d);
      for (int j = 0; j < d; ++j) y2[j] = y[j] + 0.5 * h * k1y[j], v2[j] = v[j] + 0.5 * h * k1v[j];
      Vector k2y = v2, k2v = accel(u + 0.5 * h, y2);
      Vector y3(d), v3(d);
      for (int j = 0; j < d; ++j) y3[j] = y[j] + 0.5 * h * k2y[j], v3[j] = v[j] + 0.5 * h * k2v[j];
      Vector k3y = v3, k3v = accel(u + 0.5 * h, y3);
      Vector y4(d), v4(d);
      for (int j = 0; j < d; ++j) y4[j] = y[j] + h * k3y[j], v4[j] = v[j] + h * k3v[j];
      Vector k4y = v4, k4v = accel(u + h, y4);
      for (int j = 0; j < d; ++j) {
        y[j] += h / 6.0 * (k1y[j] + 2.0 * k2y[j] + 2.0 * k3y[j] + k4y[j]);
        v[j] += h / 6.0 * (k1v[j] + 2.0 * k2v[j] + 2.0 * k3v[j] + k4v[j]);
      }
      yp[k + 1] = y;
      vp[k + 1] = v;
    }
  }

  Vector B(d);
  for (int j = 0; j < d; ++j)
    B[j] = (x[j] - x_prime[j] * hc(T) - yp[intervals][j]) / hs(T);

  Trajectory traj;
  traj.spacing = h;
  traj.samples.reserve(intervals + 1);
  for (int k = 0; k <= intervals; ++k) {
    const double u = k * h;
    TrajectorySample smp{t_prime + u, Vector(d), Vector(d)};
    for (int j = 0; j < d; ++j) {
      smp.y[j] = x_prime[j] * hc(u) + B[j] * hs(u) + yp[k][j];
      smp.velocity[j] = x_prime[j] * hc_dot(u) + B[j] * hs_dot(u) + vp[k][j];
    }
    traj.samples.push_back(std::move(smp));
  }
  // Pin the endpoint to the boundary data exactly.
  for (int j = 0; j < d; ++j) traj.samples.back().y[j] = x[j];
  return traj;
}

double action_from_trajectory(const PhysicalParams& params, const ForceModel& force, double t,
                              std::span<const double> x, double t_prime,
                              std::span<const double> x_prime, int steps) {
  if (steps < 16 || steps % 2 != 0)
    throw DomainError("action_from_trajectory: steps must be even and at least 16");
  const Trajectory traj = solve_trajectory(params, force, t, x, t_prime, x_prime, steps);
  const double m = params.m;
  const double w2 = params.omega * params.omega;
  std::vector<double> lagrangian;
  lagrangian.reserve(traj.samples.size());
  for (const auto& smp : traj.samples) {
    const Vector f = force(smp.s);
    lagrangian.push_back(0.5 * m * norm2(smp.velocity) - 0.5 * m * w2 * norm2(smp.y) +
                         dot(f, smp.y));
  }
  return simpson(lagrangian, traj.spacing);
}

std::complex<double> PropagatorSlice::operator()(std::span<const double> x_prime) const {
  return prefactor * std::polar(1.0, phase(x_prime) / hbar);
}

PropagatorSlice propagator_slice(const PhysicalParams& params, const ForceModel& force, double t,
                                 std::span<const double> x, double t_prime, HamiltonianCase c) {
  require_dims(params, force);
  require_dimension(x, params.d, "propagator_slice: x");
  PropagatorSlice slice;
  slice.prefactor = kernel_prefactor(params, t, t_prime, c);
  slice.hbar = params.hbar;
  ActionQuadratic& q = slice.phase;
  q.s1.assign(params.d, 0.0);
  const double m = params.m;
  const double T = t - t_prime;
  switch (c) {
    case HamiltonianCase::free:
    case HamiltonianCase::uniform: {
      if (c == HamiltonianCase::free) require_force_zero(force, c);
      else if (force.kind() != ForceModel::Kind::zero && force.kind() != ForceModel::Kind::constant)
        throw DomainError("the uniform case needs a constant force");
      q.s2 = m / (2.0 * T);
      for (int j = 0; j < params.d; ++j) q.s1[j] = -m * x[j] / T;
      q.s0 = m * norm2(x) / (2.0 * T);
      if (c == HamiltonianCase::uniform) {
        const auto& f = force.amplitude();
        for (int j = 0; j < params.d; ++j) q.s1[j] += 0.5 * T * f[j];
        q.s0 += 0.5 * T * dot(f, x) - norm2(f) * T * T * T / (24.0 * m);
      }
      break;
    }
    case HamiltonianCase::harmonic:
    case HamiltonianCase::driven: {
      if (c == HamiltonianCase::harmonic) require_force_zero(force, c);
      const double wt = params.omega * T;
      const double k = m * params.omega / (2.0 * std::sin(wt));
      q.s2 = k * std::cos(wt);
      for (int j = 0; j < params.d; ++j) q.s1[j] = -2.0 * k * x[j];
      q.s0 = k * norm2(x) * std::cos(wt);
      if (c == HamiltonianCase::driven) {
        const Vector i_fwd = force_integral_I(params, force, t, t_prime);
        const Vector i_bwd = force_integral_I(params, force, t_prime, t);
        const double J = force_integral_J(params, force, t, t_prime);
        for (int j = 0; j < params.d; ++j) q.s1[j] += 2.0 * k * i_bwd[j];
        q.s0 += k * (2.0 * dot(x, i_fwd) - 2.0 * J);
      }
      break;
    }
  }
  return slice;
}

std::complex<double> propagator_kernel(const PhysicalParams& params, const ForceModel& force,
                                       double t, std::span<const double> x, double t_prime,
                                       std::span<const double> x_prime, HamiltonianCase c) {
  const double S = action(params, force, t, x, t_prime, x_prime, c);
  return kernel_prefactor(params, t, t_prime, c) * std::polar(1.0, S / params.hbar);
}

double propagator_modulus(const PhysicalParams& params, double t, double t_prime,
                          HamiltonianCase c) {
  check_caustic(params, t, t_prime, c);
  const double g = g_factor(params, t, t_prime, c);
  return std::pow(params.m / (2.0 * kPi * params.hbar * std::abs(g)), 0.5 * params.d);
}

}  // namespace superosc
