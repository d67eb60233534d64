#include "superosc/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "superosc/errors.hpp"

namespace superosc {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kCausticTolerance = 1e-12;

void require_force_dimension(const PhysicalParams& params, const ForceModel& force) {
  if (force.dimension() != params.d)
    throw DomainError("force dimension " + std::to_string(force.dimension()) +
                      " does not match d = " + std::to_string(params.d));
}

std::string time_string(double t) {
  std::ostringstream os;
  os.precision(17);
  os << t;
  return os.str();
}

void require_sequence(const PhysicalParams& params, const SuperoscSequence& seq) {
  if (seq.spec().dimension() != params.d)
    throw DomainError("sequence momentum has " + std::to_string(seq.spec().dimension()) +
                      " components, expected d = " + std::to_string(params.d));
  if (seq.spec().hbar != params.hbar)
    throw DomainError("sequence hbar differs from the physical hbar");
  seq.spec().scalar_order();
}

// Phase of the single mode with real exponent b: exp(i (b alpha - b^2 gamma)).
std::vector<double> monomial_phase(int q, double alpha, double gamma, int sign) {
  std::vector<double> phase(2 * q + 1, 0.0);
  phase[q] += sign * alpha;
  phase[2 * q] -= gamma;
  return phase;
}

}  // namespace

EvolutionFrame make_frame(const PhysicalParams& params, const ForceModel& force, double t,
                          const EvolutionOptions& options) {
  params.validate();
  params.require_oscillator();
  require_force_dimension(params, force);
  if (!std::isfinite(t)) throw DomainError("time must be finite");

  EvolutionFrame fr;
  fr.t = t;
  fr.I_0t.assign(params.d, 0.0);
  fr.I_t0.assign(params.d, 0.0);
  if (t == 0.0) return fr;

  const double w = params.omega;
  const double wt = w * t;
  fr.sin_wt = std::sin(wt);
  fr.cos_wt = std::cos(wt);
  if (std::abs(fr.cos_wt) < kCausticTolerance) {
    const double k = std::round(wt / kPi - 0.5);
    const double tstar = (2.0 * k + 1.0) * kPi / (2.0 * w);
    throw CausticError("caustic at t* = " + time_string(tstar) + ": cos(omega t) = 0", tstar);
  }
  if (std::abs(fr.sin_wt) < kCausticTolerance) {
    const double tstar = std::round(wt / kPi) * kPi / w;
    throw CausticError("caustic at t* = " + time_string(tstar) + ": sin(omega t) = 0", tstar);
  }
  if (!options.extended_window && (t < 0.0 || wt >= kPi / 2.0)) {
    throw DomainError("t = " + time_string(t) + " lies outside the window (0, " +
                      time_string(kPi / (2.0 * w)) + "); enable the extended window");
  }

  fr.I_0t = force_integral_I(params, force, 0.0, t);
  fr.I_t0 = force_integral_I(params, force, t, 0.0);
  fr.J = force_integral_J(params, force, t, 0.0);

  fr.crossings = static_cast<int>(std::floor(std::abs(wt) / kPi + 0.5));
  const double half_d = 0.5 * params.d;
  const double modulus = std::pow(std::abs(fr.cos_wt), -half_d);
  const double maslov = -(t > 0 ? 1.0 : -1.0) * fr.crossings * kPi * half_d;
  fr.amplitude = std::polar(modulus, maslov);
  return fr;
}

ModePhase mode_phase(const PhysicalParams& params, const EvolutionFrame& fr,
                     std::span<const double> p, std::span<const double> x) {
  require_dimension(p, params.d, "momentum p");
  require_dimension(x, params.d, "position x");
  const double s = fr.sin_wt, c = fr.cos_wt, tn = s / c;
  const double m = params.m, w = params.omega, hb = params.hbar;
  const double bracket = -norm2(x) * tn + (2.0 * dot(x, fr.I_t0) - 2.0 * fr.J) / s +
                         (2.0 * dot(x, fr.I_0t) - norm2(fr.I_0t)) / (s * c);
  ModePhase mp;
  mp.prefactor = fr.amplitude * std::polar(1.0, m * w * bracket / (2.0 * hb));
  double px = 0.0;
  for (int j = 0; j < params.d; ++j) px += p[j] * (x[j] - fr.I_0t[j]);
  mp.alpha = px / (hb * c);
  mp.gamma = norm2(p) * tn / (2.0 * hb * m * w);
  return mp;
}

std::complex<double> evolve_plane_wave(const PhysicalParams& params, const EvolutionFrame& fr,
                                       double a, std::span<const double> p,
                                       std::span<const double> x) {
  require_dimension(p, params.d, "momentum p");
  require_dimension(x, params.d, "position x");
  if (fr.t == 0.0) return std::polar(1.0, a * dot(p, x) / params.hbar);
  const double s = fr.sin_wt, c = fr.cos_wt;
  const double m = params.m, w = params.omega, hb = params.hbar;
  double shifted = 0.0;
  for (int j = 0; j < params.d; ++j) {
    const double v = x[j] - p[j] * a * s / (m * w) - fr.I_0t[j];
    shifted += v * v;
  }
  const double bracket = -shifted / c + norm2(x) * c + 2.0 * dot(x, fr.I_t0) - 2.0 * fr.J;
  return fr.amplitude * std::polar(1.0, m * w * bracket / (2.0 * hb * s));
}

std::complex<double> evolve_plane_wave(const PhysicalParams& params, const ForceModel& force,
                                       double a, std::span<const double> p, double t,
                                       std::span<const double> x,
                                       const EvolutionOptions& options) {
  return evolve_plane_wave(params, make_frame(params, force, t, options), a, p, x);
}

std::complex<double> evolve_superosc_mode_sum(const PhysicalParams& params,
                                              const EvolutionFrame& fr,
                                              const SuperoscSequence& seq,
                                              std::span<const double> x) {
  require_sequence(params, seq);
  const auto& p = seq.spec().p;
  if (fr.t == 0.0) {
    require_dimension(x, params.d, "position x");
    const double phase[2] = {0.0, dot(p, x) / params.hbar};
    return seq.scalar().sum(phase);
  }
  const ModePhase mp = mode_phase(params, fr, p, x);
  const double phase[3] = {0.0, mp.alpha, -mp.gamma};
  return mp.prefactor * seq.scalar().sum(phase);
}

std::complex<double> evolve_superosc_mode_sum(const PhysicalParams& params,
                                              const ForceModel& force,
                                              const SuperoscSequence& seq, double t,
                                              std::span<const double> x,
                                              const EvolutionOptions& options) {
  return evolve_superosc_mode_sum(params, make_frame(params, force, t, options), seq, x);
}

// ---------------------------------------------------------------------------
// Operator series

OperatorSymbol::OperatorSymbol(const PhysicalParams& params, double t) {
  params.validate();
  params.require_oscillator();
  const double sc = 0.5 * std::sin(2.0 * params.omega * t);
  kappa_ = cplx(0.0, params.hbar * sc / (2.0 * params.m * params.omega));
}

std::complex<double> OperatorSymbol::coefficient(int l) const {
  if (l < 0) throw DomainError("symbol coefficient index must be non-negative");
  cplx c = 1.0;
  for (int j = 1; j <= l; ++j) c *= kappa_ / static_cast<double>(j);
  return c;
}

std::complex<double> OperatorSymbol::truncated(std::complex<double> zz, int L) const {
  if (L < 0) throw DomainError("truncation L must be non-negative");
  const cplx w = kappa_ * zz;
  cplx acc = 1.0;
  for (int l = L; l >= 1; --l) acc = 1.0 + acc * w / static_cast<double>(l);
  return acc;
}

std::complex<double> OperatorSymbol::exact(std::complex<double> zz) const {
  return std::exp(kappa_ * zz);
}

double OperatorSymbol::tail_bound(std::complex<double> zz, int L) const {
  return exponential_tail_bound(std::abs(kappa_ * zz), L);
}

double exponential_tail_bound(double r, int L) {
  if (L < 0) throw DomainError("truncation L must be non-negative");
  if (r == 0.0) return 0.0;
  const double lead = std::exp((L + 1) * std::log(r) - std::lgamma(L + 2.0));
  if (r < L + 2.0) return lead / (1.0 - r / (L + 2.0));
  return lead * std::exp(r);
}

int adaptive_truncation(double gamma, double cancellation_factor) {
  const double r = std::abs(gamma);
  if (r == 0.0) return 0;
  // Running sum of the symbol at the largest mode (|u| = 1).
  cplx term = 1.0, sum = 1.0;
  const cplx w(0.0, -gamma);
  for (int L = 0; L < kMaxSeriesTerms; ++L) {
    if (L >= r) {
      const double next = std::abs(term) * r / (L + 1.0);
      if (next * cancellation_factor <= 1e-14 * std::abs(sum)) return L;
    }
    term *= w / (L + 1.0);
    sum += term;
  }
  return kMaxSeriesTerms;
}

SeriesEvaluation evolve_superosc_operator_series(const PhysicalParams& params,
                                                 const EvolutionFrame& fr,
                                                 const SuperoscSequence& seq,
                                                 std::span<const double> x,
                                                 std::optional<int> L) {
  require_sequence(params, seq);
  if (L && (*L < 0 || *L > kMaxSeriesTerms))
    throw DomainError("truncation L must lie in [0, " + std::to_string(kMaxSeriesTerms) + "]");
  const ModeSum& engine = seq.scalar();
  SeriesEvaluation out;
  if (fr.t == 0.0) {
    out.value = evolve_superosc_mode_sum(params, fr, seq, x);
    out.truncation = L.value_or(0);
    return out;
  }
  const ModePhase mp = mode_phase(params, fr, seq.spec().p, x);
  const int trunc = L ? *L : adaptive_truncation(mp.gamma, engine.cancellation_factor());

  // U acts on the mode exp(i u alpha) by exp(-i gamma u^2); its truncation is
  // a polynomial in u with coefficients (-i gamma)^l / l! at u^{2l}.
  std::vector<cplx> amplitude(2 * trunc + 1, 0.0);
  cplx c = 1.0;
  const cplx w(0.0, -mp.gamma);
  for (int l = 0; l <= trunc; ++l) {
    amplitude[2 * l] = c;
    c *= w / (l + 1.0);
  }
  const double phase[2] = {0.0, mp.alpha};
  out.value = mp.prefactor * engine.sum(phase, amplitude);
  out.truncation = trunc;
  out.tail_bound = std::abs(mp.prefactor) * engine.cancellation_factor() *
                   exponential_tail_bound(std::abs(mp.gamma), trunc);
  return out;
}

SeriesEvaluation evolve_superosc_operator_series(const PhysicalParams& params,
                                                 const ForceModel& force,
                                                 const SuperoscSequence& seq, double t,
                                                 std::span<const double> x,
                                                 std::optional<int> L,
                                                 const EvolutionOptions& options) {
  return evolve_superosc_operator_series(params, make_frame(params, force, t, options), seq, x,
                                         L);
}

std::complex<double> evolve_superosc_limit(const PhysicalParams& params, const ForceModel& force,
                                           double a, std::span<const double> p, double t,
                                           std::span<const double> x,
                                           const EvolutionOptions& options) {
  const EvolutionFrame fr = make_frame(params, force, t, options);
  require_dimension(p, params.d, "momentum p");
  require_dimension(x, params.d, "position x");
  if (t == 0.0) return std::polar(1.0, a * dot(p, x) / params.hbar);
  const ModePhase mp = mode_phase(params, fr, p, x);
  return mp.prefactor * std::polar(1.0, a * mp.alpha - a * a * mp.gamma);
}

// ---------------------------------------------------------------------------
// Y_n and Z_n

namespace {

std::complex<double> evolve_monomial_modes(const PhysicalParams& params, const ForceModel& force,
                                           const SuperoscSequence& seq, int q, int sign, double t,
                                           std::span<const double> x,
                                           const EvolutionOptions& options) {
  require_sequence(params, seq);
  const EvolutionFrame fr = make_frame(params, force, t, options);
  const auto& p = seq.spec().p;
  if (t == 0.0) {
    require_dimension(x, params.d, "position x");
    std::vector<double> phase(q + 1, 0.0);
    phase[q] = sign * dot(p, x) / params.hbar;
    return seq.scalar().sum(phase);
  }
  const ModePhase mp = mode_phase(params, fr, p, x);
  return mp.prefactor * seq.scalar().sum(monomial_phase(q, mp.alpha, mp.gamma, sign));
}

std::complex<double> evolve_monomial_limit(const PhysicalParams& params, const ForceModel& force,
                                           double a, std::span<const double> p, int q, int sign,
                                           double t, std::span<const double> x,
                                           const EvolutionOptions& options) {
  const double b = sign * std::pow(a, q);
  return evolve_superosc_limit(params, force, b, p, t, x, options);
}

}  // namespace

std::complex<double> evolve_y_n(const PhysicalParams& params, const ForceModel& force,
                                const SuperoscSequence& seq, int q, double t,
                                std::span<const double> x, const EvolutionOptions& options) {
  if (q < 0) throw DomainError("q must be non-negative");
  if (q % 2 != 0) return evolve_z_n(params, force, seq, q, t, x, options);
  return evolve_monomial_modes(params, force, seq, q, y_mode_sign(q), t, x, options);
}

std::complex<double> evolve_y_limit(const PhysicalParams& params, const ForceModel& force,
                                    double a, std::span<const double> p, int q, double t,
                                    std::span<const double> x, const EvolutionOptions& options) {
  if (q < 0) throw DomainError("q must be non-negative");
  if (q % 2 != 0) return evolve_z_limit(params, force, a, p, q, t, x, options);
  return evolve_monomial_limit(params, force, a, p, q, y_mode_sign(q), t, x, options);
}

std::complex<double> evolve_z_n(const PhysicalParams& params, const ForceModel& force,
                                const SuperoscSequence& seq, int q, double t,
                                std::span<const double> x, const EvolutionOptions& options) {
  return evolve_monomial_modes(params, force, seq, q, z_mode_sign(q), t, x, options);
}

std::complex<double> evolve_z_limit(const PhysicalParams& params, const ForceModel& force,
                                    double a, std::span<const double> p, int q, double t,
                                    std::span<const double> x, const EvolutionOptions& options) {
  return evolve_monomial_limit(params, force, a, p, q, z_mode_sign(q), t, x, options);
}

// ---------------------------------------------------------------------------

std::complex<double> free_particle_mode_sum(const PhysicalParams& params,
                                            const SuperoscSequence& seq, double t,
                                            std::span<const double> x) {
  params.validate();
  require_sequence(params, seq);
  require_dimension(x, params.d, "position x");
  const auto& p = seq.spec().p;
  const double phase[3] = {0.0, dot(p, x) / params.hbar,
                           -norm2(p) * t / (2.0 * params.m * params.hbar)};
  return seq.scalar().sum(phase);
}

std::complex<double> free_particle_limit(const PhysicalParams& params, double a,
                                         std::span<const double> p, double t,
                                         std::span<const double> x) {
  params.validate();
  require_dimension(p, params.d, "momentum p");
  require_dimension(x, params.d, "position x");
  return std::polar(1.0, a * dot(p, x) / params.hbar -
                             a * a * norm2(p) * t / (2.0 * params.m * params.hbar));
}

HamiltonianCase infer_case(const PhysicalParams& params, const ForceModel& force) {
  const bool oscillator = params.omega > 0.0;
  if (force.is_zero()) return oscillator ? HamiltonianCase::harmonic : HamiltonianCase::free;
  return oscillator ? HamiltonianCase::driven : HamiltonianCase::uniform;
}

RegularizedIntegral quadrature_evolve(const PhysicalParams& params, const ForceModel& force,
                                      const Datum& datum, double t, double x,
                                      const QuadratureEvolveOptions& options) {
  params.validate();
  if (params.d != 1) throw DomainError("quadrature_evolve is implemented for d = 1");
  require_force_dimension(params, force);
  if (!datum) throw DomainError("quadrature_evolve: empty datum");
  const HamiltonianCase hc = options.hamiltonian.value_or(infer_case(params, force));
  if (hc == HamiltonianCase::harmonic || hc == HamiltonianCase::driven) {
    if (t != 0.0) make_frame(params, force, t);  // window and caustic checks
  } else if (t < 0.0) {
    throw DomainError("quadrature_evolve: t must be non-negative");
  }
  if (t == 0.0) {
    RegularizedIntegral r;
    r.value = datum(x);
    return r;
  }
  const double xs[1] = {x};
  const PropagatorSlice slice = propagator_slice(params, force, t, xs, 0.0, hc);
  const double hb = slice.hbar;
  const cplx pref = slice.prefactor * std::polar(1.0, slice.phase.s0 / hb);
  const double s1 = slice.phase.s1.at(0) / hb, s2 = slice.phase.s2 / hb;
  auto integrand = [&](double xp) { return pref * std::polar(1.0, xp * (s1 + s2 * xp)) * datum(xp); };
  OscillatoryHint hint{s2, s1, options.datum_bandwidth};
  return regularized_integral(integrand, hint, options.regularization);
}

// ---------------------------------------------------------------------------

const char* to_string(Method m) {
  switch (m) {
    case Method::mode_sum: return "mode_sum";
    case Method::operator_series: return "operator_series";
    case Method::quadrature: return "quadrature";
    case Method::closed_form_limit: return "closed_form_limit";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  for (Method m : {Method::mode_sum, Method::operator_series, Method::quadrature,
                   Method::closed_form_limit})
    if (name == to_string(m)) return m;
  throw DomainError("unknown evolution method '" + name + "'");
}

EvolutionResult evolve_on_grid(const PhysicalParams& params, const ForceModel& force,
                               const SuperoscSequence& seq, double t,
                               std::span<const Vector> grid, Method method,
                               const GridEvolutionOptions& options) {
  const EvolutionFrame fr = make_frame(params, force, t, options.window);
  require_sequence(params, seq);
  EvolutionResult res;
  res.t = t;
  res.method = method;
  res.grid.assign(grid.begin(), grid.end());
  res.values.reserve(grid.size());

  const double quarter = kPi / (2.0 * params.omega);
  res.diagnostics.window_lo =
      options.window.extended_window ? std::floor(t / quarter) * quarter : 0.0;
  res.diagnostics.window_hi = res.diagnostics.window_lo + quarter;
  res.diagnostics.caustic_crossings = fr.crossings;

  const ModeSum& engine = seq.scalar();
  // Big-float tiers carry enough digits that the only rounding is the final
  // conversion; the double path loses the cancellation factor.
  const double rounding =
      engine.working_digits() <= 16
          ? engine.cancellation_factor() * std::numeric_limits<double>::epsilon()
          : std::numeric_limits<double>::epsilon();
  double achieved = 0.0;
  const auto& p = seq.spec().p;
  const double a = seq.spec().a;

  QuadratureEvolveOptions qopt = options.quadrature;
  if (method == Method::quadrature) {
    if (params.d != 1) throw DomainError("quadrature method requires d = 1");
    if (qopt.datum_bandwidth == 0.0)
      qopt.datum_bandwidth = std::max(1.0, std::abs(a)) * std::abs(p[0]) / params.hbar;
    res.diagnostics.betas = qopt.regularization.betas;
  }

  for (const Vector& x : grid) {
    switch (method) {
      case Method::mode_sum: {
        const cplx v = evolve_superosc_mode_sum(params, fr, seq, x);
        res.values.push_back(v);
        achieved = std::max(achieved, rounding * std::abs(v));
        break;
      }
      case Method::operator_series: {
        const auto r = evolve_superosc_operator_series(params, fr, seq, x, options.truncation);
        res.values.push_back(r.value);
        achieved = std::max(achieved, r.tail_bound + rounding * std::abs(r.value));
        res.diagnostics.truncation = std::max(res.diagnostics.truncation, r.truncation);
        break;
      }
      case Method::closed_form_limit:
        res.values.push_back(evolve_superosc_limit(params, force, a, p, t, x, options.window));
        achieved = std::max(achieved, std::numeric_limits<double>::epsilon());
        break;
      case Method::quadrature: {
        require_dimension(x, 1, "position x");
        Datum datum = [&](double xp) {
          const double xs[1] = {xp};
          return seq.product_form(xs);
        };
        const auto r = quadrature_evolve(params, force, datum, t, x[0], qopt);
        res.values.push_back(r.value);
        achieved = std::max({achieved, r.quadrature_error, r.fit_residual});
        break;
      }
    }
  }
  res.diagnostics.achieved_tolerance = achieved;
  return res;
}

// ---------------------------------------------------------------------------
// Diagnostics

double local_wavenumber(const std::function<std::complex<double>(std::span<const double>)>& psi,
                        std::span<const double> x0, double h) {
  if (x0.empty()) throw DomainError("local_wavenumber: empty position");
  if (!(h > 0.0)) throw DomainError("local_wavenumber: step must be positive");
  Vector xm(x0.begin(), x0.end()), xp(x0.begin(), x0.end());
  double k = std::numeric_limits<double>::quiet_NaN();
  for (int attempt = 0; attempt < 8; ++attempt) {
    xm[0] = x0[0] - h;
    xp[0] = x0[0] + h;
    const cplx samples[3] = {psi(xm), psi(x0), psi(xp)};
    k = local_frequency(samples, h)[1];
    if (!std::isfinite(k)) return k;
    // Keep the increment well inside (-pi, pi) so arg does not wrap.
    if (std::abs(k) * 2.0 * h <= 0.5) return k;
    h = 0.1 / std::abs(k);
  }
  return k;
}

namespace {

SingularitySweep run_sweep(const PhysicalParams& params, std::span<const double> p,
                           std::span<const double> t_grid, std::span<const double> x0,
                           const EvolutionOptions& options,
                           const std::function<cplx(double, std::span<const double>)>& psi) {
  params.validate();
  params.require_oscillator();
  require_dimension(x0, params.d, "sweep position x0");
  SingularitySweep sweep;
  sweep.band_limit = std::sqrt(norm2(p)) / params.hbar;
  const double quarter = kPi / (2.0 * params.omega);
  for (double t : t_grid) {
    if (!options.extended_window && !(t > 0.0 && t < quarter))
      throw DomainError("sweep time " + time_string(t) + " outside (0, " +
                        time_string(quarter) + ")");
    SingularityRow row;
    row.t = t;
    row.modulus = std::abs(psi(t, x0));
    row.k_loc = local_wavenumber([&](std::span<const double> x) { return psi(t, x); }, x0);
    row.collapsed =
        std::pow(std::abs(std::cos(params.omega * t)), 0.5 * params.d) * row.modulus;
    if (!sweep.crossing_time && std::isfinite(row.k_loc) &&
        std::abs(row.k_loc) > sweep.band_limit)
      sweep.crossing_time = t;
    sweep.rows.push_back(row);
  }
  return sweep;
}

}  // namespace

SingularitySweep singularity_sweep(const PhysicalParams& params, const ForceModel& force,
                                   double a, std::span<const double> p,
                                   std::span<const double> t_grid, std::span<const double> x0,
                                   const EvolutionOptions& options) {
  require_dimension(p, params.d, "momentum p");
  return run_sweep(params, p, t_grid, x0, options, [&](double t, std::span<const double> x) {
    return evolve_superosc_limit(params, force, a, p, t, x, options);
  });
}

SingularitySweep singularity_sweep(const PhysicalParams& params, const ForceModel& force,
                                   const SuperoscSequence& seq, std::span<const double> t_grid,
                                   std::span<const double> x0, const EvolutionOptions& options) {
  require_sequence(params, seq);
  return run_sweep(params, seq.spec().p, t_grid, x0, options,
                   [&](double t, std::span<const double> x) {
                     return evolve_superosc_mode_sum(params, force, seq, t, x, options);
                   });
}

double predicted_band_crossing(const PhysicalParams& params, double a) {
  params.validate();
  params.require_oscillator();
  const double aa = std::abs(a);
  if (aa >= 1.0) return 0.0;
  return std::acos(aa) / params.omega;
}

double schrodinger_residual(const PhysicalParams& params, const ForceModel& force,
                            const SpaceTimeField& psi, double t, std::span<const double> x,
                            double h) {
  params.validate();
  require_dimension(x, params.d, "position x");
  if (!(h > 0.0)) throw DomainError("residual step must be positive");
  const cplx centre = psi(t, x);
  const cplx dt = (psi(t + h, x) - psi(t - h, x)) / (2.0 * h);
  Vector y(x.begin(), x.end());
  cplx lap = 0.0;
  for (int j = 0; j < params.d; ++j) {
    y[j] = x[j] + h;
    const cplx up = psi(t, y);
    y[j] = x[j] - h;
    const cplx dn = psi(t, y);
    y[j] = x[j];
    lap += (up - 2.0 * centre + dn) / (h * h);
  }
  const Vector f = force(t);
  const double potential =
      0.5 * params.m * params.omega * params.omega * norm2(x) - dot(f, x);
  const cplx r = cplx(0.0, params.hbar) * dt + params.hbar * params.hbar / (2.0 * params.m) * lap -
                 potential * centre;
  return std::abs(r) / std::abs(centre);
}

}  // namespace superosc
