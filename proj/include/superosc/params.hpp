#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "superosc/errors.hpp"

namespace superosc {

using Vector = std::vector<double>;

/// Mass, angular frequency, action quantum and spatial dimension.
///
/// omega == 0 is a legal value; it selects the free and uniform-field
/// Hamiltonians. Operations that need a genuine oscillator reject it.
struct PhysicalParams {
  double m = 1.0;
  double omega = 1.0;
  double hbar = 1.0;
  int d = 1;

  void validate() const {
    if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("mass must be positive and finite");
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw DomainError("hbar must be positive and finite");
    if (!(omega >= 0.0) || !std::isfinite(omega)) throw DomainError("omega must be non-negative and finite");
    if (d < 1) throw DomainError("dimension must be at least 1");
  }

  void require_oscillator() const {
    if (omega == 0.0)
      throw DomainError("operation requires omega > 0; use the free or uniform-field case");
  }
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return dot(a, a); }

inline void require_dimension(std::span<const double> v, int d, const char* what) {
  if (static_cast<int>(v.size()) != d)
    throw DomainError(std::string(what) + ": expected " + std::to_string(d) + " components, got " +
                      std::to_string(v.size()));
}

}  // namespace superosc
