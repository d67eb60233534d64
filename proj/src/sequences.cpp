#include "superosc/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace superosc {

void SuperoscSpec::validate() const {
  if (p.empty()) throw DomainError("superoscillation spec needs at least one momentum component");
  for (double pj : p)
    if (pj == 0.0 || !std::isfinite(pj)) throw DomainError("momentum components must be finite and non-zero");
  if (n.empty() || (n.size() != 1 && n.size() != p.size()))
    throw DomainError("order vector must have one entry or one per dimension");
  for (int nj : n)
    if (nj < 1) throw DomainError("orders must be at least 1");
  if (!std::isfinite(a)) throw DomainError("a must be finite");
  if (!(hbar > 0.0)) throw DomainError("hbar must be positive");
}

int SuperoscSpec::scalar_order() const {
  for (int nj : n)
    if (nj != n.front())
      throw DomainError("scalar-index sequences need a single order n shared by all dimensions");
  return n.front();
}

BandLimit band_limit(const SuperoscSpec& spec) {
  BandLimit b;
  for (double pj : spec.p) b.kmax.push_back(std::abs(pj) / spec.hbar);
  return b;
}

int y_mode_sign(int q) {
  if (q < 0 || q % 2 != 0) throw DomainError("Y_n needs an even, non-negative q");
  return (q / 2) % 2 == 0 ? 1 : -1;
}

int z_mode_sign(int q) {
  if (q < 0 || q % 2 != 1) throw DomainError("Z_n needs an odd, positive q");
  return ((q + 1) / 2) % 2 == 0 ? 1 : -1;
}

SuperoscSequence::SuperoscSequence(SuperoscSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  const bool shared = spec_.n.size() == 1 ||
                      std::all_of(spec_.n.begin(), spec_.n.end(),
                                  [&](int v) { return v == spec_.n.front(); });
  const int count = shared ? 1 : spec_.dimension();
  for (int j = 0; j < count; ++j) factors_.emplace_back(spec_.order(j), spec_.a);
}

namespace {

std::complex<double> ipow(std::complex<double> z, int n) {
  std::complex<double> out = 1.0;
  while (n > 0) {
    if (n & 1) out *= z;
    z *= z;
    n >>= 1;
  }
  return out;
}

}  // namespace

std::complex<double> SuperoscSequence::product_form(std::span<const double> x) const {
  require_dimension(x, spec_.dimension(), "F_n: x");
  std::complex<double> out = 1.0;
  for (int j = 0; j < spec_.dimension(); ++j) {
    const int n = spec_.order(j);
    const double theta = spec_.p[j] * x[j] / (n * spec_.hbar);
    out *= ipow({std::cos(theta), spec_.a * std::sin(theta)}, n);
  }
  return out;
}

std::complex<double> SuperoscSequence::sum_form(std::span<const double> x) const {
  require_dimension(x, spec_.dimension(), "F_n: x");
  std::complex<double> out = 1.0;
  for (int j = 0; j < spec_.dimension(); ++j) {
    const double phase[2] = {0.0, spec_.p[j] * x[j] / spec_.hbar};
    const ModeSum& engine = factors_.size() == 1 ? factors_.front() : factors_[j];
    out *= engine.sum(phase);
  }
  return out;
}

std::complex<double> SuperoscSequence::limit(std::span<const double> x) const {
  require_dimension(x, spec_.dimension(), "F_n limit: x");
  return std::polar(1.0, spec_.a * dot(spec_.p, x) / spec_.hbar);
}

std::complex<double> SuperoscSequence::y_n(int q, std::span<const double> x) const {
  const int s = y_mode_sign(q);
  require_dimension(x, spec_.dimension(), "Y_n: x");
  spec_.scalar_order();
  std::vector<double> phase(q + 1, 0.0);
  phase[q] = s * dot(spec_.p, x) / spec_.hbar;
  return scalar().sum(phase);
}

std::complex<double> SuperoscSequence::y_limit(int q, std::span<const double> x) const {
  const int s = y_mode_sign(q);
  require_dimension(x, spec_.dimension(), "Y_n limit: x");
  return std::polar(1.0, s * std::pow(spec_.a, q) * dot(spec_.p, x) / spec_.hbar);
}

std::complex<double> SuperoscSequence::z_n(int q, std::span<const double> x) const {
  const int s = z_mode_sign(q);
  require_dimension(x, spec_.dimension(), "Z_n: x");
  spec_.scalar_order();
  std::vector<double> phase(q + 1, 0.0);
  phase[q] = s * dot(spec_.p, x) / spec_.hbar;
  return scalar().sum(phase);
}

std::complex<double> SuperoscSequence::z_limit(int q, std::span<const double> x) const {
  const int s = z_mode_sign(q);
  require_dimension(x, spec_.dimension(), "Z_n limit: x");
  return std::polar(1.0, s * std::pow(spec_.a, q) * dot(spec_.p, x) / spec_.hbar);
}

std::complex<double> f_n_product(const SuperoscSpec& spec, std::span<const double> x) {
  return SuperoscSequence(spec).product_form(x);
}
std::complex<double> f_n_sum(const SuperoscSpec& spec, std::span<const double> x) {
  return SuperoscSequence(spec).sum_form(x);
}
std::complex<double> f_limit(const SuperoscSpec& spec, std::span<const double> x) {
  spec.validate();
  require_dimension(x, spec.dimension(), "F_n limit: x");
  return std::polar(1.0, spec.a * dot(spec.p, x) / spec.hbar);
}
std::complex<double> y_n(const SuperoscSpec& spec, int q, std::span<const double> x) {
  return SuperoscSequence(spec).y_n(q, x);
}
std::complex<double> y_limit(const SuperoscSpec& spec, int q, std::span<const double> x) {
  return SuperoscSequence(spec).y_limit(q, x);
}
std::complex<double> z_n(const SuperoscSpec& spec, int q, std::span<const double> x) {
  return SuperoscSequence(spec).z_n(q, x);
}
std::complex<double> z_limit(const SuperoscSpec& spec, int q, std::span<const double> x) {
  return SuperoscSequence(spec).z_limit(q, x);
}

std::vector<double> local_frequency(std::span<const std::complex<double>> values, double spacing,
                                    double mask_threshold) {
  const std::size_t n = values.size();
  if (n < 2) throw DomainError("local_frequency needs at least two samples");
  if (!(spacing > 0.0)) throw DomainError("local_frequency needs a positive grid spacing");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> out(n, nan);
  auto ok = [&](std::size_t i) { return std::abs(values[i]) >= mask_threshold; };
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? n - 1 : i + 1;
    if (!ok(i) || !ok(lo) || !ok(hi)) continue;
    out[i] = std::arg(values[hi] * std::conj(values[lo])) / (spacing * static_cast<double>(hi - lo));
  }
  return out;
}

double sup_error_on_compact(const Field& f, const Field& limit, const Box& box, int grid_points) {
  if (grid_points < 2) throw DomainError("sup_error_on_compact needs at least 2 grid points");
  const std::size_t d = box.lo.size();
  if (d == 0 || box.hi.size() != d) throw DomainError("box bounds must share a non-zero dimension");
  std::vector<int> idx(d, 0);
  Vector x(d);
  double worst = 0.0;
  while (true) {
    for (std::size_t j = 0; j < d; ++j)
      x[j] = box.lo[j] + (box.hi[j] - box.lo[j]) * idx[j] / (grid_points - 1);
    worst = std::max(worst, std::abs(f(x) - limit(x)));
    std::size_t j = 0;
    while (j < d && ++idx[j] == grid_points) idx[j++] = 0;
    if (j == d) break;
  }
  return worst;
}

double sup_error_on_compact(const SuperoscSpec& spec, const Field& limit, const Box& box,
                            int grid_points) {
  SuperoscSequence seq(spec);
  return sup_error_on_compact([&](std::span<const double> x) { return seq.product_form(x); },
                              limit, box, grid_points);
}

}  // namespace superosc
