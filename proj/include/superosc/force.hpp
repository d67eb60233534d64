#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "superosc/params.hpp"

namespace superosc {

/// External driving force f(t).
///
/// Sinusoidal forces are f(t) = f0 * cos(nu * t + phase). Sampled forces
/// wrap an arbitrary callable (tabulated data is linearly interpolated)
/// and are integrated by quadrature.
class ForceModel {
 public:
  enum class Kind { zero, constant, sinusoidal, sampled };

  static ForceModel zero(int d);
  static ForceModel constant(Vector f0);
  static ForceModel sinusoidal(Vector f0, double nu, double phase);
  static ForceModel sampled(int d, std::function<Vector(double)> f);
  static ForceModel tabulated(std::vector<double> times, std::vector<Vector> values);

  Kind kind() const noexcept { return kind_; }
  int dimension() const noexcept { return d_; }
  Vector operator()(double t) const;

  bool is_zero() const noexcept;
  const Vector& amplitude() const noexcept { return f0_; }
  double frequency() const noexcept { return nu_; }
  double phase() const noexcept { return phase_; }
  std::string describe() const;

 private:
  ForceModel() = default;
  Kind kind_ = Kind::zero;
  int d_ = 1;
  Vector f0_;
  double nu_ = 0.0;
  double phase_ = 0.0;
  std::shared_ptr<const std::function<Vector(double)>> fn_;
};

}  // namespace superosc
