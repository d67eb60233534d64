#include "superosc/force.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace superosc {

ForceModel ForceModel::zero(int d) {
  if (d < 1) throw DomainError("force dimension must be at least 1");
  ForceModel f;
  f.kind_ = Kind::zero;
  f.d_ = d;
  f.f0_.assign(d, 0.0);
  return f;
}

ForceModel ForceModel::constant(Vector f0) {
  if (f0.empty()) throw DomainError("constant force needs at least one component");
  ForceModel f;
  f.kind_ = Kind::constant;
  f.d_ = static_cast<int>(f0.size());
  f.f0_ = std::move(f0);
  return f;
}

ForceModel ForceModel::sinusoidal(Vector f0, double nu, double phase) {
  if (f0.empty()) throw DomainError("sinusoidal force needs at least one component");
  if (!std::isfinite(nu) || !std::isfinite(phase)) throw DomainError("sinusoidal force parameters must be finite");
  ForceModel f;
  f.kind_ = Kind::sinusoidal;
  f.d_ = static_cast<int>(f0.size());
  f.f0_ = std::move(f0);
  f.nu_ = nu;
  f.phase_ = phase;
  return f;
}

ForceModel ForceModel::sampled(int d, std::function<Vector(double)> fn) {
  if (d < 1) throw DomainError("force dimension must be at least 1");
  if (!fn) throw DomainError("sampled force needs a callable");
  ForceModel f;
  f.kind_ = Kind::sampled;
  f.d_ = d;
  f.fn_ = std::make_shared<const std::function<Vector(double)>>(std::move(fn));
  return f;
}

ForceModel ForceModel::tabulated(std::vector<double> times, std::vector<Vector> values) {
  if (times.size() < 2 || times.size() != values.size())
    throw DomainError("tabulated force needs at least two (time, value) pairs");
  if (!std::is_sorted(times.begin(), times.end()) ||
      std::adjacent_find(times.begin(), times.end()) != times.end())
    throw DomainError("tabulated force times must be strictly increasing");
  const std::size_t d = values.front().size();
  for (const auto& v : values)
    if (v.size() != d || d == 0) throw DomainError("tabulated force values must share one dimension");
  auto fn = [times = std::move(times), values = std::move(values)](double t) {
    if (t <= times.front()) return values.front();
    if (t >= times.back()) return values.back();
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - times.begin()) - 1;
    const double w = (t - times[i]) / (times[i + 1] - times[i]);
    Vector out(values[i].size());
    for (std::size_t j = 0; j < out.size(); ++j)
      out[j] = (1.0 - w) * values[i][j] + w * values[i + 1][j];
    return out;
  };
  return sampled(static_cast<int>(d), std::move(fn));
}

Vector ForceModel::operator()(double t) const {
  switch (kind_) {
    case Kind::zero:
      return Vector(d_, 0.0);
    case Kind::constant:
      return f0_;
    case Kind::sinusoidal: {
      Vector out = f0_;
      const double c = std::cos(nu_ * t + phase_);
      for (double& v : out) v *= c;
      return out;
    }
    case Kind::sampled: {
      Vector out = (*fn_)(t);
      if (static_cast<int>(out.size()) != d_) throw DomainError("sampled force returned wrong dimension");
      return out;
    }
  }
  return Vector(d_, 0.0);
}

bool ForceModel::is_zero() const noexcept {
  if (kind_ == Kind::zero) return true;
  if (kind_ == Kind::sampled) return false;
  return std::all_of(f0_.begin(), f0_.end(), [](double v) { return v == 0.0; });
}

std::string ForceModel::describe() const {
  std::ostringstream os;
  os.precision(17);
  auto vec = [&] {
    os << '[';
    for (std::size_t i = 0; i < f0_.size(); ++i) os << (i ? "," : "") << f0_[i];
    os << ']';
  };
  switch (kind_) {
    case Kind::zero: os << "zero"; break;
    case Kind::constant: os << "constant f0="; vec(); break;
    case Kind::sinusoidal: os << "sinusoidal f0="; vec(); os << " nu=" << nu_ << " phase=" << phase_; break;
    case Kind::sampled: os << "sampled"; break;
  }
  return os.str();
}

}  // namespace superosc
