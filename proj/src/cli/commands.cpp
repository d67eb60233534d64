#include "superosc/cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "superosc/errors.hpp"
#include "superosc/version.hpp"

namespace superosc::cli {

using nlohmann::json;

namespace {

using cplx = std::complex<double>;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}


json base_meta(const RunConfig& cfg) {
  return json{{"command", cfg.command},
              {"library_version", kVersion},
              {"config", cfg.echo},
              {"output_format", cfg.output.format},
              {"precision", cfg.output.precision}};
}

// Uniform spacing of a 1-d grid, or NaN.
double uniform_spacing(const std::vector<double>& x) {
  if (x.size() < 3) return kNaN;
  const double h = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
  if (!(h > 0.0)) return kNaN;
  for (std::size_t i = 1; i < x.size(); ++i)
    if (std::abs((x[i] - x[i - 1]) - h) > 1e-9 * h) return kNaN;
  return h;
}

}  // namespace

void apply_overrides(RunConfig& cfg, const Overrides& o) {
  if (o.out) cfg.output.path = *o.out;
  if (o.format) {
    if (*o.format != "csv" && *o.format != "json")
      throw ConfigError("--format: expected csv or json");
    cfg.output.format = *o.format;
  }
  if (o.tol) {
    if (!(*o.tol > 0.0)) throw ConfigError("--tol: must be positive");
    cfg.sequence_study.tolerance = *o.tol;
    cfg.evolve_study.tolerance = *o.tol;
    cfg.singularity_study.tolerance = *o.tol;
    cfg.persistence_study.tolerance = *o.tol;
  }
}

// ---------------------------------------------------------------------------

CommandResult run_sequence(const RunConfig& cfg) {
  const auto& s = cfg.sequence_study;
  const SuperoscSequence seq(cfg.sequence->spec);
  CommandResult res;
  res.table.columns = {"x",        "fn_product_re", "fn_product_im", "fn_sum_re",   "fn_sum_im",
                       "dual_form_rel_diff", "limit_re", "limit_im", "limit_error", "k_loc"};
  std::vector<cplx> prod;
  prod.reserve(s.x.size());
  for (double x : s.x) {
    const double xs[1] = {x};
    prod.push_back(seq.product_form(xs));
  }
  const double h = uniform_spacing(s.x);
  std::vector<double> kloc(s.x.size(), kNaN);
  if (std::isfinite(h)) kloc = local_frequency(prod, h, s.mask);

  double worst_dual = 0.0, worst_limit = 0.0;
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    const double xs[1] = {s.x[i]};
    const cplx sum = seq.sum_form(xs);
    const cplx lim = seq.limit(xs);
    const double dual = std::abs(sum - prod[i]) / std::max(std::abs(prod[i]), 1e-300);
    const double err = std::abs(prod[i] - lim);
    worst_dual = std::max(worst_dual, dual);
    worst_limit = std::max(worst_limit, err);
    res.table.add_row({s.x[i], prod[i].real(), prod[i].imag(), sum.real(), sum.imag(), dual,
                       lim.real(), lim.imag(), err, kloc[i]});
  }
  if (worst_dual > s.tolerance)
    res.breaches.push_back("dual-form relative difference " + sci(worst_dual) + " exceeds " +
                           sci(s.tolerance));
  res.meta = base_meta(cfg);
  res.meta["achieved"] = {{"max_dual_form_rel_diff", worst_dual},
                          {"sup_limit_error", worst_limit},
                          {"tolerance", s.tolerance}};
  res.meta["engine"] = {{"cancellation_factor", seq.scalar().cancellation_factor()},
                        {"working_digits", seq.scalar().working_digits()}};
  res.meta["band_limit"] = band_limit(cfg.sequence->spec).kmax;
  return res;
}

// ---------------------------------------------------------------------------

CommandResult run_evolve(const RunConfig& cfg) {
  const auto& s = cfg.evolve_study;
  const PhysicalParams& P = cfg.physics;
  const ForceModel& F = *cfg.force;
  const SequenceBlock& sb = *cfg.sequence;
  const SuperoscSequence seq(sb.spec);
  const int d = P.d;

  CommandResult res;
  auto& cols = res.table.columns;
  cols.push_back("t");
  if (d == 1) {
    cols.push_back("x");
  } else {
    for (int j = 0; j < d; ++j) cols.push_back("x" + std::to_string(j + 1));
  }
  cols.push_back("datum_re");
  cols.push_back("datum_im");
  for (Method m : s.methods) {
    cols.push_back(std::string(to_string(m)) + "_re");
    cols.push_back(std::string(to_string(m)) + "_im");
  }
  struct Pair {
    std::size_t a, b;
    std::optional<double> tol;
    double worst = 0.0;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < s.methods.size(); ++i)
    for (std::size_t j = i + 1; j < s.methods.size(); ++j) {
      const Method a = s.methods[i], b = s.methods[j];
      std::optional<double> tol = s.tolerance;
      if (a == Method::quadrature || b == Method::quadrature) tol = s.quadrature_tolerance;
      if (a == Method::closed_form_limit || b == Method::closed_form_limit) tol = s.limit_tolerance;
      pairs.push_back({i, j, tol});
      cols.push_back(std::string("dev_") + to_string(a) + "_vs_" + to_string(b));
    }

  GridEvolutionOptions gopt;
  gopt.window.extended_window = s.extended_window;
  gopt.truncation = s.truncation;
  gopt.quadrature.regularization.betas = s.betas;

  json diagnostics = json::array();
  const std::size_t nm = s.methods.size();
  for (double t : s.t) {
    std::vector<std::vector<cplx>> values(nm);
    if (sb.family == Family::F) {
      for (std::size_t i = 0; i < nm; ++i) {
        const EvolutionResult r = evolve_on_grid(P, F, seq, t, s.x, s.methods[i], gopt);
        values[i] = r.values;
        json diag{{"t", t},
                  {"method", to_string(s.methods[i])},
                  {"window", {r.diagnostics.window_lo, r.diagnostics.window_hi}},
                  {"caustic_crossings", r.diagnostics.caustic_crossings},
                  {"achieved_tolerance", r.diagnostics.achieved_tolerance}};
        if (s.methods[i] == Method::operator_series) diag["truncation"] = r.diagnostics.truncation;
        if (s.methods[i] == Method::quadrature) diag["betas"] = r.diagnostics.betas;
        diagnostics.push_back(std::move(diag));
      }
    } else {
      for (std::size_t i = 0; i < nm; ++i)
        for (const Vector& x : s.x)
          values[i].push_back(s.methods[i] == Method::mode_sum
                                  ? evolve_y_n(P, F, seq, sb.q, t, x, gopt.window)
                                  : evolve_y_limit(P, F, sb.spec.a, sb.spec.p, sb.q, t, x,
                                                   gopt.window));
    }
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      const Vector& x = s.x[k];
      cplx datum;
      if (sb.family == Family::F) {
        datum = evolve_superosc_mode_sum(P, F, seq, 0.0, x);
      } else {
        datum = sb.family == Family::Y ? seq.y_n(sb.q, x) : seq.z_n(sb.q, x);
      }
      std::vector<double> row{t};
      row.insert(row.end(), x.begin(), x.end());
      row.push_back(datum.real());
      row.push_back(datum.imag());
      for (std::size_t i = 0; i < nm; ++i) {
        row.push_back(values[i][k].real());
        row.push_back(values[i][k].imag());
      }
      for (auto& pr : pairs) {
        const double dev = std::abs(values[pr.a][k] - values[pr.b][k]);
        pr.worst = std::max(pr.worst, dev);
        row.push_back(dev);
      }
      res.table.add_row(std::move(row));
    }
  }

  res.meta = base_meta(cfg);
  json achieved = json::object();
  for (const auto& pr : pairs) {
    const std::string name =
        std::string(to_string(s.methods[pr.a])) + "_vs_" + to_string(s.methods[pr.b]);
    achieved[name] = {{"max_deviation", pr.worst},
                      {"tolerance", pr.tol ? json(*pr.tol) : json()}};
    if (pr.tol && pr.worst > *pr.tol)
      res.breaches.push_back(name + " deviation " + sci(pr.worst) + " exceeds " + sci(*pr.tol));
  }
  res.meta["achieved"] = std::move(achieved);
  res.meta["diagnostics"] = std::move(diagnostics);
  return res;
}

// ---------------------------------------------------------------------------

CommandResult run_singularity(const RunConfig& cfg) {
  const auto& s = cfg.singularity_study;
  const PhysicalParams& P = cfg.physics;
  const ForceModel& F = *cfg.force;
  const SuperoscSpec& spec = cfg.sequence->spec;
  EvolutionOptions opt;
  opt.extended_window = s.extended_window;

  SingularitySweep sw;
  if (s.use_mode_sum) {
    const SuperoscSequence seq(spec);
    sw = singularity_sweep(P, F, seq, s.t, s.x0, opt);
  } else {
    sw = singularity_sweep(P, F, spec.a, spec.p, s.t, s.x0, opt);
  }
  CommandResult res;
  res.table.columns = {"t", "modulus", "k_loc", "collapsed", "k_loc_cos", "exceeds_band"};
  double worst_collapse = 0.0;
  for (const auto& r : sw.rows) {
    const double c = std::cos(P.omega * r.t);
    const bool exceeds = std::isfinite(r.k_loc) && std::abs(r.k_loc) > sw.band_limit;
    res.table.add_row({r.t, r.modulus, r.k_loc, r.collapsed, r.k_loc * c, exceeds ? 1.0 : 0.0});
    worst_collapse = std::max(worst_collapse, std::abs(r.collapsed - 1.0));
  }
  res.meta = base_meta(cfg);
  res.meta["band_limit"] = sw.band_limit;
  res.meta["crossing_time"] = sw.crossing_time ? json(*sw.crossing_time) : json();
  res.meta["predicted_crossing_time"] =
      std::abs(spec.a) < 1.0 ? json(predicted_band_crossing(P, spec.a)) : json();
  res.meta["reference_k_loc_cos"] = spec.a * std::sqrt(norm2(spec.p)) / P.hbar;
  res.meta["achieved"] = {{"max_collapse_deviation", worst_collapse}, {"tolerance", s.tolerance}};
  if (F.is_zero() && !s.use_mode_sum && worst_collapse > s.tolerance)
    res.breaches.push_back("collapsed amplitude deviates from 1 by " + sci(worst_collapse));
  return res;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Vector> cell_grid(const ModeLattice& lattice, int per_dim) {
  const Box box = lattice.box();
  const int d = lattice.dimension();
  std::size_t total = 1;
  for (int j = 0; j < d; ++j) total *= per_dim;
  std::vector<Vector> grid;
  for (std::size_t flat = 0; flat < total; ++flat) {
    Vector x(d);
    std::size_t rem = flat;
    for (int j = d - 1; j >= 0; --j) {
      const int s = static_cast<int>(rem % per_dim);
      rem /= per_dim;
      x[j] = box.lo[j] + (s + 0.5) * (box.hi[j] - box.lo[j]) / per_dim;
    }
    grid.push_back(std::move(x));
  }
  return grid;
}

}  // namespace

CommandResult run_persistence(const RunConfig& cfg) {
  const auto& s = cfg.persistence_study;
  const PhysicalParams& P = cfg.physics;
  const ModeLattice lattice(P, s.n, s.p);
  const int d = P.d;

  // The field at t' as a lattice coefficient tensor or a callable.
  LatticeField field;
  std::optional<SuperoscSequence> seq;
  ModeCoefficients given;
  given.t = s.t_prime;
  given.values.assign(lattice.size(), 0.0);
  if (s.field.kind == FieldBlock::Kind::sequence) {
    seq.emplace(cfg.sequence->spec);
    field = [&](std::span<const double> x) { return seq->product_form(x); };
  } else {
    if (s.field.kind == FieldBlock::Kind::modes) {
      for (const auto& [k, c] : s.field.modes) given.at(lattice, k) += c;
    } else {
      std::mt19937_64 rng(s.field.seed);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      for (std::size_t i = 0; i < lattice.size(); ++i) {
        const auto k = lattice.multi_index(i);
        bool active = true;
        for (int kj : k) active = active && kj % s.field.stride == 0;
        const double re = u(rng), im = u(rng);
        if (active) given.values[i] = {re, im};
      }
    }
    field = [&](std::span<const double> x) {
      return reconstruct(lattice, given, PotentialModel::zero(), s.t_prime, x);
    };
  }

  const ModeCoefficients c = extract_coefficients(lattice, field, s.t_prime);
  const std::vector<Vector> test = cell_grid(lattice, s.grid_points);
  double roundtrip = 0.0;
  for (const auto& x : test)
    roundtrip = std::max(roundtrip, std::abs(reconstruct(lattice, c, s.potential, s.t_prime, x) -
                                             field(x)));

  Vector X;
  if (s.period) {
    X = *s.period;
  } else {
    X.assign(d, 0.0);
    X[0] = common_period(lattice, c, 0);
    if (X[0] == 0.0) X[0] = 2.0 * lattice.half_width(0);
  }

  PeriodicityOptions popt;
  popt.path = s.path;
  popt.V = s.potential;
  popt.grid_points = s.grid_points;
  popt.tolerance = s.tolerance;

  const int kernel_points = std::min(s.grid_points, 5);
  const std::vector<Vector> kernel_test = cell_grid(lattice, kernel_points);

  CommandResult res;
  res.table.columns = {"t",
                       "roundtrip_defect",
                       "commutation_defect",
                       "kernel_sum_defect",
                       "period_initial_defect",
                       "period_evolved_defect",
                       "period_passed"};
  double worst_comm = 0.0, worst_kernel = 0.0, period_tol = 0.0;
  bool all_passed = true;
  for (double t : s.t) {
    const ModeCoefficients ce = evolve_coefficients(lattice, c, s.potential, t);
    const ModeCoefficients ex = extract_coefficients(
        lattice, [&](std::span<const double> x) { return reconstruct(lattice, c, s.potential, t, x); },
        t);
    double comm = 0.0;
    for (std::size_t i = 0; i < ce.values.size(); ++i)
      comm = std::max(comm, std::abs(ce.values[i] - ex.values[i]));
    double kern = 0.0;
    for (const auto& x : kernel_test)
      kern = std::max(kern, std::abs(reconstruct(lattice, c, s.potential, t, x) -
                                     reconstruct_kernel_sum(lattice, field, s.t_prime,
                                                            s.potential, t, x)));
    const PeriodicityReport rep = periodicity_check(lattice, field, X, s.t_prime, t, popt);
    worst_comm = std::max(worst_comm, comm);
    worst_kernel = std::max(worst_kernel, kern);
    period_tol = rep.tolerance;
    all_passed = all_passed && rep.passed;
    res.table.add_row({t, roundtrip, comm, kern, rep.initial_defect, rep.evolved_defect,
                       rep.passed ? 1.0 : 0.0});
  }

  res.meta = base_meta(cfg);
  res.meta["lattice"] = {{"n", lattice.orders()}, {"p", lattice.momenta()},
                         {"size", lattice.size()}, {"box_half_width", [&] {
                            std::vector<double> w;
                            for (int j = 0; j < d; ++j) w.push_back(lattice.half_width(j));
                            return w;
                          }()}};
  res.meta["period"] = X;
  res.meta["path"] = to_string(s.path);
  res.meta["potential"] = s.potential.describe();
  res.meta["achieved"] = {{"roundtrip_defect", roundtrip},
                          {"max_commutation_defect", worst_comm},
                          {"max_kernel_sum_defect", worst_kernel},
                          {"period_tolerance", period_tol},
                          {"roundtrip_tolerance", s.roundtrip_tolerance},
                          {"commutation_tolerance", s.commutation_tolerance}};
  if (roundtrip > s.roundtrip_tolerance)
    res.breaches.push_back("round-trip defect " + sci(roundtrip) + " exceeds " +
                           sci(s.roundtrip_tolerance));
  if (worst_comm > s.commutation_tolerance)
    res.breaches.push_back("commutation defect " + sci(worst_comm) + " exceeds " +
                           sci(s.commutation_tolerance));
  if (worst_kernel > s.commutation_tolerance)
    res.breaches.push_back("kernel-sum defect " + sci(worst_kernel) + " exceeds " +
                           sci(s.commutation_tolerance));
  if (!all_passed) res.breaches.push_back("period defect grew beyond tolerance");
  return res;
}

CommandResult execute(const RunConfig& cfg) {
  if (cfg.command == "sequence") return run_sequence(cfg);
  if (cfg.command == "evolve") return run_evolve(cfg);
  if (cfg.command == "singularity") return run_singularity(cfg);
  if (cfg.command == "persistence") return run_persistence(cfg);
  throw ConfigError("unknown command '" + cfg.command + "'");
}

void write_result(const RunConfig& cfg, const CommandResult& result, std::ostream& out) {
  json meta = result.meta;
  meta["breaches"] = result.breaches;
  auto emit = [&](std::ostream& os) {
    if (cfg.output.format == "json") write_json(os, result.table, meta);
    else write_csv(os, result.table, cfg.output.precision);
  };
  if (cfg.output.path.empty()) {
    emit(out);
    return;
  }
  std::ofstream file(cfg.output.path);
  if (!file) throw ConfigError("output.path: cannot open '" + cfg.output.path + "' for writing");
  emit(file);
  if (cfg.output.format == "csv") {
    std::ofstream side(cfg.output.path + ".meta.json");
    if (!side) throw ConfigError("output.path: cannot write the metadata sidecar");
    side << meta.dump(2) << '\n';
  }
}

int run_cli(const std::string& command, const std::string& config_path,
            const Overrides& overrides, std::ostream& out, std::ostream& err) {
  try {
    RunConfig cfg = load_config(config_path, command);
    apply_overrides(cfg, overrides);
    const CommandResult result = execute(cfg);
    write_result(cfg, result, out);
    if (!result.breaches.empty()) {
      for (const auto& b : result.breaches) err << "tolerance breach: " << b << '\n';
      return kExitTolerance;
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const CausticError& e) {
    err << "singular time: " << e.what() << '\n';
    return kExitDomain;
  } catch (const PreconditionError& e) {
    err << "precondition failed: " << e.what() << " (measured defect " << e.measured_defect()
        << ")\n";
    return kExitDomain;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << " (achieved " << e.achieved_tolerance() << ")\n";
    return kExitTolerance;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace superosc::cli
