#include "superosc/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "superosc/errors.hpp"
#include "superosc/force.hpp"
#include "superosc/oscillator.hpp"
#include "superosc/quadrature.hpp"

namespace superosc {

namespace {
using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
}  // namespace

// ---------------------------------------------------------------------------
// ModeLattice

ModeLattice::ModeLattice(const PhysicalParams& params, std::vector<int> n, Vector p)
    : params_(params), n_(std::move(n)), p_(std::move(p)) {
  params_.validate();
  require_dimension(p_, params_.d, "lattice momentum p");
  if (n_.size() == 1 && params_.d > 1) n_.assign(params_.d, n_.front());
  if (static_cast<int>(n_.size()) != params_.d)
    throw DomainError("lattice needs one order per dimension");
  for (int j = 0; j < params_.d; ++j) {
    if (n_[j] < 1) throw DomainError("lattice orders must be positive");
    if (!(p_[j] != 0.0) || !std::isfinite(p_[j]))
      throw DomainError("lattice momenta must be non-zero and finite");
    size_ *= static_cast<std::size_t>(2 * n_[j] + 1);
  }
}

double ModeLattice::wavenumber(int j, int k) const {
  return k * p_.at(j) / (n_.at(j) * params_.hbar);
}

double ModeLattice::half_width(int j) const {
  return n_.at(j) * kPi * params_.hbar / std::abs(p_.at(j));
}

Box ModeLattice::box() const {
  Box b;
  for (int j = 0; j < params_.d; ++j) {
    b.lo.push_back(-half_width(j));
    b.hi.push_back(half_width(j));
  }
  return b;
}

std::size_t ModeLattice::flat_index(std::span<const int> k) const {
  if (static_cast<int>(k.size()) != params_.d) throw DomainError("mode index has wrong rank");
  std::size_t idx = 0;
  for (int j = 0; j < params_.d; ++j) {
    if (std::abs(k[j]) > n_[j])
      throw DomainError("mode index " + std::to_string(k[j]) + " outside [-n, n]");
    idx = idx * (2 * n_[j] + 1) + static_cast<std::size_t>(k[j] + n_[j]);
  }
  return idx;
}

std::vector<int> ModeLattice::multi_index(std::size_t flat) const {
  if (flat >= size_) throw DomainError("flat mode index out of range");
  std::vector<int> k(params_.d);
  for (int j = params_.d - 1; j >= 0; --j) {
    const std::size_t w = 2 * n_[j] + 1;
    k[j] = static_cast<int>(flat % w) - n_[j];
    flat /= w;
  }
  return k;
}

double ModeLattice::dispersion(std::span<const int> k) const {
  double s = 0.0;
  for (int j = 0; j < params_.d; ++j) {
    const double q = k[j] * p_[j] / n_[j];
    s += q * q;
  }
  return s / (2.0 * params_.m * params_.hbar);
}

std::complex<double> ModeLattice::mode(std::span<const int> k, std::span<const double> x) const {
  require_dimension(x, params_.d, "lattice mode: x");
  double phase = 0.0;
  for (int j = 0; j < params_.d; ++j) phase += wavenumber(j, k[j]) * x[j];
  return std::polar(1.0, phase);
}

std::vector<double> ModeLattice::sample_axis(int j) const {
  const int N = sample_count(j);
  const double L = half_width(j);
  std::vector<double> axis(N);
  for (int s = 0; s < N; ++s) axis[s] = -L + 2.0 * L * s / N;
  return axis;
}

// ---------------------------------------------------------------------------
// PotentialModel

PotentialModel PotentialModel::zero() { return {}; }

PotentialModel PotentialModel::constant(double v0) {
  if (!std::isfinite(v0)) throw DomainError("potential must be finite");
  PotentialModel v;
  v.kind_ = Kind::constant;
  v.v0_ = v0;
  return v;
}

PotentialModel PotentialModel::callable(std::function<double(double)> fn) {
  if (!fn) throw DomainError("empty potential callable");
  PotentialModel v;
  v.kind_ = Kind::callable;
  v.fn_ = std::make_shared<const std::function<double(double)>>(std::move(fn));
  return v;
}

PotentialModel PotentialModel::tabulated(std::vector<double> times, std::vector<double> values) {
  if (times.empty() || times.size() != values.size())
    throw DomainError("tabulated potential needs matching, non-empty time and value arrays");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw DomainError("potential times must increase strictly");
  PotentialModel v;
  v.kind_ = Kind::tabulated;
  v.times_ = std::move(times);
  v.values_ = std::move(values);
  return v;
}

double PotentialModel::operator()(double t) const {
  switch (kind_) {
    case Kind::zero: return 0.0;
    case Kind::constant: return v0_;
    case Kind::callable: return (*fn_)(t);
    case Kind::tabulated: {
      if (t <= times_.front()) return values_.front();
      if (t >= times_.back()) return values_.back();
      const auto it = std::upper_bound(times_.begin(), times_.end(), t);
      const std::size_t i = static_cast<std::size_t>(it - times_.begin()) - 1;
      const double w = (t - times_[i]) / (times_[i + 1] - times_[i]);
      return (1.0 - w) * values_[i] + w * values_[i + 1];
    }
  }
  return 0.0;
}

double PotentialModel::integral(double t0, double t1) const {
  switch (kind_) {
    case Kind::zero: return 0.0;
    case Kind::constant: return v0_ * (t1 - t0);
    case Kind::callable: {
      QuadratureOptions opt;
      opt.abs_tol = 1e-14;
      opt.rel_tol = 1e-14;
      const auto r = integrate<double>([&](double s) { return (*fn_)(s); }, t0, t1, opt);
      if (!std::isfinite(r.value)) throw NumericError("potential integral is not finite", r.error);
      return r.value;
    }
    case Kind::tabulated: {
      // Antiderivative of the piecewise-linear interpolant, anchored at times_[0].
      auto F = [&](double t) {
        if (t <= times_.front()) return values_.front() * (t - times_.front());
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < times_.size(); ++i) {
          const double a = times_[i], b = times_[i + 1];
          if (t <= b) {
            const double v = (*this)(t);
            return acc + 0.5 * (values_[i] + v) * (t - a);
          }
          acc += 0.5 * (values_[i] + values_[i + 1]) * (b - a);
        }
        return acc + values_.back() * (t - times_.back());
      };
      return F(t1) - F(t0);
    }
  }
  return 0.0;
}

std::string PotentialModel::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::zero: os << "zero"; break;
    case Kind::constant: os << "constant(" << v0_ << ")"; break;
    case Kind::callable: os << "callable"; break;
    case Kind::tabulated: os << "tabulated(" << times_.size() << " samples)"; break;
  }
  return os.str();
}

// ---------------------------------------------------------------------------

ModeCoefficients evolve_coefficients(const ModeLattice& lattice, const ModeCoefficients& c,
                                     const PotentialModel& V, double t) {
  if (c.values.size() != lattice.size())
    throw DomainError("coefficient tensor does not match the lattice");
  ModeCoefficients out;
  out.t = t;
  out.values.resize(c.values.size());
  const double T = t - c.t;
  const double common = -V.integral(c.t, t) / lattice.params().hbar;
  for (std::size_t i = 0; i < c.values.size(); ++i) {
    if (T == 0.0 && common == 0.0) {
      out.values[i] = c.values[i];
      continue;
    }
    const auto k = lattice.multi_index(i);
    out.values[i] = c.values[i] * std::polar(1.0, -T * lattice.dispersion(k) + common);
  }
  return out;
}

std::vector<Vector> sample_points(const ModeLattice& lattice) {
  const int d = lattice.dimension();
  std::vector<std::vector<double>> axes(d);
  std::size_t total = 1;
  for (int j = 0; j < d; ++j) {
    axes[j] = lattice.sample_axis(j);
    total *= axes[j].size();
  }
  std::vector<Vector> pts;
  pts.reserve(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    Vector x(d);
    std::size_t rem = flat;
    for (int j = d - 1; j >= 0; --j) {
      x[j] = axes[j][rem % axes[j].size()];
      rem /= axes[j].size();
    }
    pts.push_back(std::move(x));
  }
  return pts;
}

ModeCoefficients extract_coefficients(const ModeLattice& lattice,
                                      std::span<const std::complex<double>> samples,
                                      double t_prime) {
  const int d = lattice.dimension();
  std::vector<int> N(d), W(d);
  std::size_t total = 1;
  for (int j = 0; j < d; ++j) {
    N[j] = lattice.sample_count(j);
    W[j] = 2 * lattice.order(j) + 1;
    total *= N[j];
  }
  if (samples.size() != total)
    throw DomainError("expected " + std::to_string(total) + " samples, got " +
                      std::to_string(samples.size()));
  for (std::size_t i = 0; i < total; ++i)
    if (!std::isfinite(samples[i].real()) || !std::isfinite(samples[i].imag()))
      throw NumericError("non-finite field sample at grid index " + std::to_string(i),
                         std::numeric_limits<double>::infinity());

  // Separable transform: contract one axis at a time. The sample at s on
  // axis j sits at x = -L + 2Ls/N, where mode k has phase k pi (2s/N - 1).
  std::vector<cplx> cur(samples.begin(), samples.end());
  std::vector<int> shape = N;
  for (int j = 0; j < d; ++j) {
    const int n = lattice.order(j);
    std::vector<cplx> E(static_cast<std::size_t>(W[j]) * N[j]);
    for (int k = -n; k <= n; ++k)
      for (int s = 0; s < N[j]; ++s)
        E[static_cast<std::size_t>(k + n) * N[j] + s] =
            std::polar(1.0 / N[j], -kPi * k * (2.0 * s / N[j] - 1.0));
    std::size_t outer = 1, inner = 1;
    for (int i = 0; i < j; ++i) outer *= shape[i];
    for (int i = j + 1; i < d; ++i) inner *= shape[i];
    std::vector<cplx> next(outer * W[j] * inner);
    for (std::size_t o = 0; o < outer; ++o)
      for (int k = 0; k < W[j]; ++k)
        for (std::size_t in = 0; in < inner; ++in) {
          cplx acc = 0.0;
          for (int s = 0; s < N[j]; ++s)
            acc += E[static_cast<std::size_t>(k) * N[j] + s] * cur[(o * N[j] + s) * inner + in];
          next[(o * W[j] + k) * inner + in] = acc;
        }
    cur = std::move(next);
    shape[j] = W[j];
  }
  ModeCoefficients c;
  c.t = t_prime;
  c.values = std::move(cur);
  return c;
}

ModeCoefficients extract_coefficients(const ModeLattice& lattice, const LatticeField& field,
                                      double t_prime) {
  if (!field) throw DomainError("empty field");
  const auto pts = sample_points(lattice);
  std::vector<cplx> samples;
  samples.reserve(pts.size());
  for (const auto& x : pts) samples.push_back(field(x));
  return extract_coefficients(lattice, samples, t_prime);
}

std::complex<double> reconstruct(const ModeLattice& lattice, const ModeCoefficients& c,
                                 const PotentialModel& V, double t, std::span<const double> x) {
  if (c.values.size() != lattice.size())
    throw DomainError("coefficient tensor does not match the lattice");
  require_dimension(x, lattice.dimension(), "reconstruct: x");
  const double T = t - c.t;
  cplx acc = 0.0;
  for (std::size_t i = 0; i < c.values.size(); ++i) {
    if (c.values[i] == 0.0) continue;
    const auto k = lattice.multi_index(i);
    double phase = -T * lattice.dispersion(k);
    for (int j = 0; j < lattice.dimension(); ++j) phase += lattice.wavenumber(j, k[j]) * x[j];
    acc += c.values[i] * std::polar(1.0, phase);
  }
  return std::polar(1.0, -V.integral(c.t, t) / lattice.params().hbar) * acc;
}

std::complex<double> reconstruct_kernel_sum(const ModeLattice& lattice,
                                            const LatticeField& field, double t_prime,
                                            const PotentialModel& V, double t,
                                            std::span<const double> x) {
  if (!field) throw DomainError("empty field");
  require_dimension(x, lattice.dimension(), "reconstruct_kernel_sum: x");
  const int d = lattice.dimension();
  const double T = t - t_prime;
  const auto pts = sample_points(lattice);
  // Quadrature weight |Omega| / N times the kernel normalization 1 / |Omega|.
  const double weight = 1.0 / static_cast<double>(pts.size());
  std::vector<std::vector<int>> modes(lattice.size());
  std::vector<double> rates(lattice.size());
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    modes[i] = lattice.multi_index(i);
    rates[i] = lattice.dispersion(modes[i]);
  }
  cplx acc = 0.0;
  for (const auto& xp : pts) {
    cplx kernel = 0.0;
    for (std::size_t i = 0; i < modes.size(); ++i) {
      double phase = -T * rates[i];
      for (int j = 0; j < d; ++j) phase += lattice.wavenumber(j, modes[i][j]) * (x[j] - xp[j]);
      kernel += std::polar(1.0, phase);
    }
    acc += kernel * field(xp);
  }
  return std::polar(weight, -V.integral(t_prime, t) / lattice.params().hbar) * acc;
}

std::complex<double> free_kernel_limit(const PhysicalParams& params, const PotentialModel& V,
                                       double t, double t_prime, std::span<const double> x,
                                       std::span<const double> x_prime) {
  params.validate();
  if (t == t_prime)
    throw CausticError("free kernel is singular at t = t' (a delta distribution)", t_prime);
  PhysicalParams free = params;
  free.omega = 0.0;
  const cplx k = propagator_kernel(free, ForceModel::zero(params.d), t, x, t_prime, x_prime,
                                   HamiltonianCase::free);
  if (V.is_zero()) return k;
  return k * std::polar(1.0, -V.integral(t_prime, t) / params.hbar);
}

RegularizedIntegral free_kernel_evolve(const PhysicalParams& params, const PotentialModel& V,
                                       const std::function<std::complex<double>(double)>& datum,
                                       double t_prime, double t, double x,
                                       double datum_bandwidth,
                                       const RegularizedOptions& options) {
  params.validate();
  if (params.d != 1) throw DomainError("free_kernel_evolve is implemented for d = 1");
  if (!datum) throw DomainError("empty datum");
  if (t == t_prime) {
    RegularizedIntegral r;
    r.value = datum(x);
    return r;
  }
  const double T = t - t_prime;
  const double m = params.m, hb = params.hbar;
  const cplx root = std::sqrt(cplx(0.0, -m / (2.0 * kPi * hb * T)));
  const cplx pref = root * std::polar(1.0, -V.integral(t_prime, t) / hb);
  // Integrate in y = x' - x so the regularizer exp(-beta y^2) is centred on the
  // kernel's stationary point; a regularizer centred at the origin biases the
  // extrapolation once beta x^2 is no longer small.
  const double s2 = m / (2.0 * hb * T);
  auto integrand = [&](double y) { return pref * std::polar(1.0, s2 * y * y) * datum(x + y); };
  return regularized_integral(integrand, OscillatoryHint{s2, 0.0, datum_bandwidth}, options);
}

double common_period(const ModeLattice& lattice, const ModeCoefficients& c, int j,
                     double threshold) {
  if (c.values.size() != lattice.size())
    throw DomainError("coefficient tensor does not match the lattice");
  if (j < 0 || j >= lattice.dimension()) throw DomainError("dimension index out of range");
  double biggest = 0.0;
  for (const auto& v : c.values) biggest = std::max(biggest, std::abs(v));
  int g = 0;
  for (std::size_t i = 0; i < c.values.size(); ++i)
    if (std::abs(c.values[i]) > threshold * biggest)
      g = std::gcd(g, std::abs(lattice.multi_index(i)[j]));
  if (g == 0) return 0.0;
  return 2.0 * kPi * lattice.order(j) * lattice.params().hbar /
         (std::abs(lattice.momenta()[j]) * g);
}

const char* to_string(PeriodicityPath p) {
  return p == PeriodicityPath::lattice ? "lattice" : "quadrature";
}

PeriodicityReport periodicity_check(const ModeLattice& lattice, const LatticeField& field,
                                    std::span<const double> X, double t_prime, double t,
                                    const PeriodicityOptions& options) {
  if (!field) throw DomainError("empty field");
  const int d = lattice.dimension();
  require_dimension(X, d, "period X");
  int nonzero = 0;
  for (double v : X) nonzero += v != 0.0;
  if (nonzero != 1) throw DomainError("period X must have exactly one non-zero component");
  if (options.grid_points < 1) throw DomainError("grid_points must be positive");

  PeriodicityReport rep;
  rep.path = options.path;
  rep.X.assign(X.begin(), X.end());
  rep.t_prime = t_prime;
  rep.t = t;
  rep.tolerance = options.tolerance > 0.0
                      ? options.tolerance
                      : (options.path == PeriodicityPath::lattice ? 1e-10 : 1e-4);

  // Cell-centred test grid across Omega.
  const Box box = lattice.box();
  std::vector<Vector> grid;
  std::size_t total = 1;
  for (int j = 0; j < d; ++j) total *= options.grid_points;
  for (std::size_t flat = 0; flat < total; ++flat) {
    Vector x(d);
    std::size_t rem = flat;
    for (int j = d - 1; j >= 0; --j) {
      const int s = static_cast<int>(rem % options.grid_points);
      rem /= options.grid_points;
      x[j] = box.lo[j] + (s + 0.5) * (box.hi[j] - box.lo[j]) / options.grid_points;
    }
    grid.push_back(std::move(x));
  }
  auto shifted = [&](const Vector& x) {
    Vector y = x;
    for (int j = 0; j < d; ++j) y[j] += X[j];
    return y;
  };

  for (const auto& x : grid)
    rep.initial_defect = std::max(rep.initial_defect, std::abs(field(shifted(x)) - field(x)));
  if (rep.initial_defect > rep.tolerance) {
    std::ostringstream os;
    os << "field is not periodic at t' with the given X (defect " << rep.initial_defect << ")";
    throw PreconditionError(os.str(), rep.initial_defect);
  }

  if (options.path == PeriodicityPath::lattice) {
    const ModeCoefficients c = extract_coefficients(lattice, field, t_prime);
    for (const auto& x : grid) {
      const cplx a = reconstruct(lattice, c, options.V, t, x);
      const cplx b = reconstruct(lattice, c, options.V, t, shifted(x));
      rep.evolved_defect = std::max(rep.evolved_defect, std::abs(b - a));
    }
  } else {
    if (d != 1) throw DomainError("the quadrature path is implemented for d = 1");
    const double bandwidth = std::abs(lattice.momenta()[0]) / lattice.params().hbar;
    auto datum = [&](double xp) {
      const double xs[1] = {xp};
      return field(xs);
    };
    for (const auto& x : grid) {
      const cplx a = free_kernel_evolve(lattice.params(), options.V, datum, t_prime, t, x[0],
                                        bandwidth, options.regularization)
                         .value;
      const cplx b = free_kernel_evolve(lattice.params(), options.V, datum, t_prime, t,
                                        x[0] + X[0], bandwidth, options.regularization)
                         .value;
      rep.evolved_defect = std::max(rep.evolved_defect, std::abs(b - a));
    }
  }
  rep.passed = rep.evolved_defect <= rep.initial_defect + rep.tolerance;
  return rep;
}

}  // namespace superosc
