#pragma once

// Superoscillating sequences F_n, Y_n, Z_n, their limits and diagnostics.

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "superosc/mode_sum.hpp"
#include "superosc/params.hpp"

namespace superosc {

/// Parameters of F_n(x) = prod_j [cos(p_j x_j/(n_j hbar)) + i a sin(p_j x_j/(n_j hbar))]^{n_j}.
///
/// `n` holds one order per dimension, or a single order shared by all of
/// them. a > 1 is the superoscillatory regime; any finite a is accepted.
struct SuperoscSpec {
  double a = 2.0;
  Vector p{1.0};
  std::vector<int> n{10};
  double hbar = 1.0;

  void validate() const;
  int dimension() const noexcept { return static_cast<int>(p.size()); }
  int order(int j) const { return n.size() == 1 ? n[0] : n.at(j); }
  /// The single order used by the scalar-index sequences (Y_n, Z_n, evolution).
  int scalar_order() const;
};

/// Largest wavenumber |p_j| / hbar present in the generating exponentials.
struct BandLimit {
  Vector kmax;
};
BandLimit band_limit(const SuperoscSpec& spec);

/// A validated spec with its coefficient tables built once.
class SuperoscSequence {
 public:
  explicit SuperoscSequence(SuperoscSpec spec);

  const SuperoscSpec& spec() const noexcept { return spec_; }
  /// Mode-sum engine of dimension j (tensor factor).
  const ModeSum& factor(int j) const { return factors_.at(j); }
  /// Mode-sum engine of the scalar-index sequences.
  const ModeSum& scalar() const { return factors_.front(); }

  std::complex<double> product_form(std::span<const double> x) const;
  std::complex<double> sum_form(std::span<const double> x) const;
  std::complex<double> limit(std::span<const double> x) const;

  /// Y_n for even q, with its pointwise limit exp(i p.x (-i a)^q / hbar).
  std::complex<double> y_n(int q, std::span<const double> x) const;
  std::complex<double> y_limit(int q, std::span<const double> x) const;
  /// Z_n for odd q, with its pointwise limit exp(p.x (-i a)^q / hbar).
  std::complex<double> z_n(int q, std::span<const double> x) const;
  std::complex<double> z_limit(int q, std::span<const double> x) const;

 private:
  SuperoscSpec spec_;
  std::vector<ModeSum> factors_;
};

/// Real factor s with (-i)^q (1-2k/n)^q = s (1-2k/n)^q for even q.
int y_mode_sign(int q);
/// Real factor s with (-i)^q (1-2k/n)^q = i s (1-2k/n)^q for odd q.
int z_mode_sign(int q);

std::complex<double> f_n_product(const SuperoscSpec& spec, std::span<const double> x);
std::complex<double> f_n_sum(const SuperoscSpec& spec, std::span<const double> x);
std::complex<double> f_limit(const SuperoscSpec& spec, std::span<const double> x);
std::complex<double> y_n(const SuperoscSpec& spec, int q, std::span<const double> x);
std::complex<double> y_limit(const SuperoscSpec& spec, int q, std::span<const double> x);
std::complex<double> z_n(const SuperoscSpec& spec, int q, std::span<const double> x);
std::complex<double> z_limit(const SuperoscSpec& spec, int q, std::span<const double> x);

/// Local wavenumber Im[psi'/psi] on a uniform 1-d grid, from the centred
/// difference of the phase, arg(psi[i+1] conj(psi[i-1])) / (2h). Entries
/// whose stencil touches |psi| < mask_threshold are NaN.
std::vector<double> local_frequency(std::span<const std::complex<double>> values, double spacing,
                                    double mask_threshold = 1e-8);

struct Box {
  Vector lo;
  Vector hi;
};

using Field = std::function<std::complex<double>(std::span<const double>)>;

/// max over a tensor grid on `box` of |f - limit|; grid_points per dimension.
double sup_error_on_compact(const Field& f, const Field& limit, const Box& box, int grid_points);
/// Same with f = F_n (product form).
double sup_error_on_compact(const SuperoscSpec& spec, const Field& limit, const Box& box,
                            int grid_points);

}  // namespace superosc
