#pragma once

// Binomially weighted sums of exponential modes,
//
//   sum_{k=0}^{n} C_k(n, a) exp(i theta(u_k)) Q(u_k),   u_k = 1 - 2k/n,
//
// where theta is a real and Q a complex polynomial in u. For a > 1 the
// weights alternate and grow like a^n while the sum stays O(1), so the
// working precision is chosen from sum |C_k| = max(1, |a|)^n.

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace superosc {

/// C_k(n, a) = binom(n, k) ((1+a)/2)^{n-k} ((1-a)/2)^k.
double coefficient(int n, int k, double a);

class ModeSum {
 public:
  /// Double precision (pairwise summation) is used when the cancellation
  /// factor is at most this value.
  static constexpr double kDoubleLimit = 16.0;

  ModeSum(int n, double a);

  int order() const noexcept;
  double a() const noexcept;
  double cancellation_factor() const noexcept;
  /// 16 on the double path, otherwise the decimal digits of the big-float tier.
  int working_digits() const noexcept;
  double coefficient(int k) const;

  /// Phase polynomial coefficients are ordered low to high.
  std::complex<double> sum(std::span<const double> phase) const;
  std::complex<double> sum(std::span<const double> phase,
                           std::span<const std::complex<double>> amplitude) const;

  struct Impl;

 private:
  std::shared_ptr<const Impl> impl_;
};

}  // namespace superosc
