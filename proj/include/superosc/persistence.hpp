#pragma once

// Mode-lattice solutions of the Schrodinger equation with an
// x-independent potential: coefficients, extraction, reconstruction and
// preservation of spatial periods.

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "superosc/params.hpp"
#include "superosc/regularized.hpp"
#include "superosc/sequences.hpp"

namespace superosc {

/// Modes exp(i sum_j k_j p_j x_j / (n_j hbar)), |k_j| <= n_j, on the box
/// Omega_j = [-n_j pi hbar / |p_j|, n_j pi hbar / |p_j|].
class ModeLattice {
 public:
  /// `n` holds one order per dimension or a single shared order.
  ModeLattice(const PhysicalParams& params, std::vector<int> n, Vector p);

  const PhysicalParams& params() const noexcept { return params_; }
  int dimension() const noexcept { return params_.d; }
  int order(int j) const { return n_.at(j); }
  const std::vector<int>& orders() const noexcept { return n_; }
  const Vector& momenta() const noexcept { return p_; }

  /// prod_j (2 n_j + 1)
  std::size_t size() const noexcept { return size_; }
  /// k p_j / (n_j hbar)
  double wavenumber(int j, int k) const;
  double half_width(int j) const;
  Box box() const;

  /// Row-major flattening with k_1 varying slowest.
  std::size_t flat_index(std::span<const int> k) const;
  std::vector<int> multi_index(std::size_t flat) const;

  /// sum_j k_j^2 p_j^2 / (2 m hbar n_j^2): the phase rate of mode k.
  double dispersion(std::span<const int> k) const;
  std::complex<double> mode(std::span<const int> k, std::span<const double> x) const;

  /// Points per dimension of the extraction grid, 2 (2 n_j + 1).
  int sample_count(int j) const { return 2 * (2 * n_[j] + 1); }
  /// Abscissae of the periodic trapezoid grid on Omega_j.
  std::vector<double> sample_axis(int j) const;

 private:
  PhysicalParams params_;
  std::vector<int> n_;
  Vector p_;
  std::size_t size_ = 1;
};

struct ModeCoefficients {
  double t = 0.0;
  std::vector<std::complex<double>> values;  ///< indexed by ModeLattice::flat_index

  std::complex<double>& at(const ModeLattice& lattice, std::span<const int> k) {
    return values.at(lattice.flat_index(k));
  }
  std::complex<double> at(const ModeLattice& lattice, std::span<const int> k) const {
    return values.at(lattice.flat_index(k));
  }
};

/// Spatially constant potential V(t).
class PotentialModel {
 public:
  static PotentialModel zero();
  static PotentialModel constant(double v0);
  static PotentialModel callable(std::function<double(double)> v);
  /// Linear interpolation between samples, constant beyond the ends.
  static PotentialModel tabulated(std::vector<double> times, std::vector<double> values);

  double operator()(double t) const;
  /// \int_{t0}^{t1} V(s) ds (oriented).
  double integral(double t0, double t1) const;
  bool is_zero() const noexcept { return kind_ == Kind::zero; }
  std::string describe() const;

 private:
  enum class Kind { zero, constant, callable, tabulated };
  Kind kind_ = Kind::zero;
  double v0_ = 0.0;
  std::shared_ptr<const std::function<double(double)>> fn_;
  std::vector<double> times_, values_;
};

ModeCoefficients evolve_coefficients(const ModeLattice& lattice, const ModeCoefficients& c,
                                     const PotentialModel& V, double t);

using LatticeField = std::function<std::complex<double>(std::span<const double>)>;

/// Tensor grid of ModeLattice::sample_axis, first coordinate varying slowest.
std::vector<Vector> sample_points(const ModeLattice& lattice);

/// Mode coefficients by the periodic trapezoid rule (exact for lattice
/// trigonometric polynomials). Throws NumericError on non-finite samples.
ModeCoefficients extract_coefficients(const ModeLattice& lattice, const LatticeField& field,
                                      double t_prime);
/// Same from samples laid out as sample_points(lattice).
ModeCoefficients extract_coefficients(const ModeLattice& lattice,
                                      std::span<const std::complex<double>> samples,
                                      double t_prime);

/// psi(t, x) = exp(-(i/hbar) \int V) sum_k c_k exp(-i (t - t') dispersion(k) + i k.x).
std::complex<double> reconstruct(const ModeLattice& lattice, const ModeCoefficients& c,
                                 const PotentialModel& V, double t, std::span<const double> x);

/// psi(t, x) = \int_Omega K_n(t, x, t', x') psi(t', x') dx' with the lattice
/// kernel summed first, applied on the extraction grid.
std::complex<double> reconstruct_kernel_sum(const ModeLattice& lattice,
                                            const LatticeField& field, double t_prime,
                                            const PotentialModel& V, double t,
                                            std::span<const double> x);

/// [m / (2 pi i hbar (t - t'))]^{d/2} exp(-(i/hbar) \int V) exp(i m |x - x'|^2 / (2 hbar (t - t'))).
std::complex<double> free_kernel_limit(const PhysicalParams& params, const PotentialModel& V,
                                       double t, double t_prime, std::span<const double> x,
                                       std::span<const double> x_prime);

/// Free-kernel evolution of a bounded datum (d = 1). The regularizer
/// exp(-beta (x' - x)^2) is centred on the evaluation point before extrapolating.
RegularizedIntegral free_kernel_evolve(const PhysicalParams& params, const PotentialModel& V,
                                       const std::function<std::complex<double>(double)>& datum,
                                       double t_prime, double t, double x,
                                       double datum_bandwidth,
                                       const RegularizedOptions& options = {});

/// Shortest period along dimension j shared by the modes with |c_k| > threshold:
/// 2 pi n_j hbar / (|p_j| gcd(active k_j)). Zero when only k_j = 0 is active.
double common_period(const ModeLattice& lattice, const ModeCoefficients& c, int j,
                     double threshold = 1e-14);

enum class PeriodicityPath { lattice, quadrature };
const char* to_string(PeriodicityPath p);

struct PeriodicityReport {
  PeriodicityPath path = PeriodicityPath::lattice;
  Vector X;
  double t_prime = 0.0;
  double t = 0.0;
  double initial_defect = 0.0;  ///< max |psi(t', x + X) - psi(t', x)|
  double evolved_defect = 0.0;  ///< same at t
  double tolerance = 0.0;
  bool passed = false;
};

struct PeriodicityOptions {
  PeriodicityPath path = PeriodicityPath::lattice;
  PotentialModel V = PotentialModel::zero();
  int grid_points = 17;  ///< test points per dimension across Omega
  /// Defaults: 1e-10 for the lattice path, 1e-4 for the quadrature path.
  double tolerance = 0.0;
  RegularizedOptions regularization{};
};

/// Verifies that `field` has period X at t' (PreconditionError with the
/// measured defect otherwise), evolves it to t and measures the defect again.
PeriodicityReport periodicity_check(const ModeLattice& lattice, const LatticeField& field,
                                    std::span<const double> X, double t_prime, double t,
                                    const PeriodicityOptions& options = {});

}  // namespace superosc
