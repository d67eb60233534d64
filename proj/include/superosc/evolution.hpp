#pragma once

// Schrodinger evolution of plane waves and superoscillating data under the
// (driven) harmonic oscillator, with a quadrature oracle and diagnostics.

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "superosc/force.hpp"
#include "superosc/oscillator.hpp"
#include "superosc/params.hpp"
#include "superosc/regularized.hpp"
#include "superosc/sequences.hpp"

namespace superosc {

struct EvolutionOptions {
  /// Allow t outside (0, pi/(2 omega)). The amplitude branch is continued
  /// along the t-axis, picking up exp(-i pi d/2) per zero of cos(omega t).
  bool extended_window = false;
};

/// Everything that depends on t only, computed once per time slice.
struct EvolutionFrame {
  double t = 0.0;
  double sin_wt = 0.0;
  double cos_wt = 1.0;
  Vector I_0t;  ///< I(0, t)
  Vector I_t0;  ///< I(t, 0)
  double J = 0.0;  ///< J(t, 0)
  std::complex<double> amplitude{1.0, 0.0};  ///< (cos omega t)^{-d/2} on the tracked branch
  int crossings = 0;
};

/// Throws CausticError at zeros of sin or cos (t != 0) and DomainError
/// outside the default window unless the options extend it.
EvolutionFrame make_frame(const PhysicalParams& params, const ForceModel& force, double t,
                          const EvolutionOptions& options = {});

/// Per-point pieces of the mode sum: psi = prefactor * sum C_k exp(i (alpha u - gamma u^2)).
struct ModePhase {
  std::complex<double> prefactor;
  double alpha = 0.0;  ///< p.(x - I(0,t)) / (hbar cos omega t)
  double gamma = 0.0;  ///< |p|^2 tan(omega t) / (2 m hbar omega)
};
ModePhase mode_phase(const PhysicalParams& params, const EvolutionFrame& frame,
                     std::span<const double> p, std::span<const double> x);

std::complex<double> evolve_plane_wave(const PhysicalParams& params, const ForceModel& force,
                                       double a, std::span<const double> p, double t,
                                       std::span<const double> x,
                                       const EvolutionOptions& options = {});
std::complex<double> evolve_plane_wave(const PhysicalParams& params, const EvolutionFrame& frame,
                                       double a, std::span<const double> p,
                                       std::span<const double> x);

/// Reference evolution of the scalar-index datum sum_k C_k exp(i u_k p.x / hbar).
std::complex<double> evolve_superosc_mode_sum(const PhysicalParams& params,
                                              const ForceModel& force,
                                              const SuperoscSequence& seq, double t,
                                              std::span<const double> x,
                                              const EvolutionOptions& options = {});
std::complex<double> evolve_superosc_mode_sum(const PhysicalParams& params,
                                              const EvolutionFrame& frame,
                                              const SuperoscSequence& seq,
                                              std::span<const double> x);

/// Symbol of the infinite-order operator at time t,
/// U(z) = exp(kappa z.z) with kappa = i hbar sin(omega t) cos(omega t) / (2 m omega).
class OperatorSymbol {
 public:
  OperatorSymbol(const PhysicalParams& params, double t);

  std::complex<double> kappa() const noexcept { return kappa_; }
  /// kappa^l / l!
  std::complex<double> coefficient(int l) const;
  /// sum_{l <= L} kappa^l (z.z)^l / l!
  std::complex<double> truncated(std::complex<double> zz, int L) const;
  std::complex<double> exact(std::complex<double> zz) const;
  /// Upper bound on |exact - truncated| for all arguments with |kappa z.z| <= |kappa zz|.
  double tail_bound(std::complex<double> zz, int L) const;

 private:
  std::complex<double> kappa_;
};

/// Bound on sum_{l > L} r^l / l!.
double exponential_tail_bound(double r, int L);

struct SeriesEvaluation {
  std::complex<double> value;
  int truncation = 0;
  /// Bound on |value - mode sum| from the discarded tail of every mode.
  double tail_bound = 0.0;
};

inline constexpr int kMaxSeriesTerms = 200;

/// Mode-wise action of the truncated operator series. With no L the
/// truncation is chosen adaptively.
SeriesEvaluation evolve_superosc_operator_series(const PhysicalParams& params,
                                                 const ForceModel& force,
                                                 const SuperoscSequence& seq, double t,
                                                 std::span<const double> x,
                                                 std::optional<int> L = std::nullopt,
                                                 const EvolutionOptions& options = {});
SeriesEvaluation evolve_superosc_operator_series(const PhysicalParams& params,
                                                 const EvolutionFrame& frame,
                                                 const SuperoscSequence& seq,
                                                 std::span<const double> x,
                                                 std::optional<int> L = std::nullopt);

/// Adaptive truncation for a maximal mode argument gamma (|kappa z.z| at u = 1).
int adaptive_truncation(double gamma, double cancellation_factor);

/// n -> infinity limit: the mode-sum prefactor times the phase of the single mode u = a.
/// Algebraically the same function as evolve_plane_wave, evaluated by a separate route.
std::complex<double> evolve_superosc_limit(const PhysicalParams& params, const ForceModel& force,
                                           double a, std::span<const double> p, double t,
                                           std::span<const double> x,
                                           const EvolutionOptions& options = {});

/// Evolution of Y_n (even q) and its limit. Odd q is forwarded to the Z_n variant.
std::complex<double> evolve_y_n(const PhysicalParams& params, const ForceModel& force,
                                const SuperoscSequence& seq, int q, double t,
                                std::span<const double> x, const EvolutionOptions& options = {});
std::complex<double> evolve_y_limit(const PhysicalParams& params, const ForceModel& force,
                                    double a, std::span<const double> p, int q, double t,
                                    std::span<const double> x,
                                    const EvolutionOptions& options = {});
/// Evolution of Z_n (odd q) and its limit.
std::complex<double> evolve_z_n(const PhysicalParams& params, const ForceModel& force,
                                const SuperoscSequence& seq, int q, double t,
                                std::span<const double> x, const EvolutionOptions& options = {});
std::complex<double> evolve_z_limit(const PhysicalParams& params, const ForceModel& force,
                                    double a, std::span<const double> p, int q, double t,
                                    std::span<const double> x,
                                    const EvolutionOptions& options = {});

/// Free-particle evolution (omega = 0, f = 0) of the same data.
std::complex<double> free_particle_mode_sum(const PhysicalParams& params,
                                            const SuperoscSequence& seq, double t,
                                            std::span<const double> x);
std::complex<double> free_particle_limit(const PhysicalParams& params, double a,
                                         std::span<const double> p, double t,
                                         std::span<const double> x);

/// Hamiltonian case implied by omega and the force.
HamiltonianCase infer_case(const PhysicalParams& params, const ForceModel& force);

using Datum = std::function<std::complex<double>(double)>;

struct QuadratureEvolveOptions {
  RegularizedOptions regularization{};
  std::optional<HamiltonianCase> hamiltonian;  ///< inferred when empty
  /// Largest |wavenumber| in the datum (sizes the quadrature panels).
  double datum_bandwidth = 0.0;
};

/// psi(t, x) = lim_{beta -> 0+} \int G(t, x, 0, x') exp(-beta x'^2) datum(x') dx', d = 1.
RegularizedIntegral quadrature_evolve(const PhysicalParams& params, const ForceModel& force,
                                      const Datum& datum, double t, double x,
                                      const QuadratureEvolveOptions& options = {});

enum class Method { mode_sum, operator_series, quadrature, closed_form_limit };
const char* to_string(Method m);
Method parse_method(const std::string& name);

struct EvolutionDiagnostics {
  double window_lo = 0.0;
  double window_hi = 0.0;
  int caustic_crossings = 0;
  double achieved_tolerance = 0.0;  ///< largest error estimate over the grid
  int truncation = -1;              ///< operator series: largest L used
  std::vector<double> betas;        ///< quadrature: the regularization schedule
};

struct EvolutionResult {
  double t = 0.0;
  std::vector<Vector> grid;
  std::vector<std::complex<double>> values;
  Method method = Method::mode_sum;
  EvolutionDiagnostics diagnostics;
};

struct GridEvolutionOptions {
  EvolutionOptions window{};
  std::optional<int> truncation;
  QuadratureEvolveOptions quadrature{};
};

/// Evaluates one method on every grid point at a single time.
EvolutionResult evolve_on_grid(const PhysicalParams& params, const ForceModel& force,
                               const SuperoscSequence& seq, double t,
                               std::span<const Vector> grid, Method method,
                               const GridEvolutionOptions& options = {});

struct SingularityRow {
  double t;
  double modulus;
  double k_loc;
  double collapsed;  ///< |cos omega t|^{d/2} |psi|
};

struct SingularitySweep {
  std::vector<SingularityRow> rows;
  double band_limit = 0.0;  ///< |p| / hbar
  /// First grid time where |k_loc| exceeds the band limit.
  std::optional<double> crossing_time;
};

/// Sweep of the limit solution exp-datum (a, p) at x0; k_loc is taken along x_1.
SingularitySweep singularity_sweep(const PhysicalParams& params, const ForceModel& force,
                                   double a, std::span<const double> p,
                                   std::span<const double> t_grid, std::span<const double> x0,
                                   const EvolutionOptions& options = {});
/// Same for the finite-n mode sum.
SingularitySweep singularity_sweep(const PhysicalParams& params, const ForceModel& force,
                                   const SuperoscSequence& seq, std::span<const double> t_grid,
                                   std::span<const double> x0,
                                   const EvolutionOptions& options = {});

/// arccos(|a|)/omega for |a| < 1 (zero otherwise): where k_loc(t, 0) = a p/(hbar cos omega t)
/// reaches p/hbar for f = 0.
double predicted_band_crossing(const PhysicalParams& params, double a);

/// Phase gradient along x_1 at x0, Im[d_1 psi / psi], from a centred stencil
/// whose step shrinks until the phase increment is small.
double local_wavenumber(const std::function<std::complex<double>(std::span<const double>)>& psi,
                        std::span<const double> x0, double h = 1e-3);

using SpaceTimeField = std::function<std::complex<double>(double, std::span<const double>)>;

/// |[i hbar d_t + hbar^2/(2m) Laplacian - m omega^2 |x|^2/2 + f(t).x] psi| / |psi|
/// by second-order centred differences with step h in t and every x_j.
double schrodinger_residual(const PhysicalParams& params, const ForceModel& force,
                            const SpaceTimeField& psi, double t, std::span<const double> x,
                            double h);

}  // namespace superosc
