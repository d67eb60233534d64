#include "superosc/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace superosc::cli {

using nlohmann::json;

namespace {

const char* type_name(const json& v) { return v.type_name(); }

std::vector<double> linspace(double lo, double hi, int count, const std::string& path) {
  if (count < 1) throw ConfigError(path + ": count must be at least 1");
  if (count == 1) return {lo};
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = lo + (hi - lo) * i / (count - 1);
  out.back() = hi;
  return out;
}

// A list of numbers or {start, stop, count}.
std::vector<double> parse_scalar_grid(const ConfigNode& parent, const std::string& key) {
  const json& v = parent.raw(key);
  const std::string path = parent.key_path(key);
  if (v.is_array()) return parent.numbers(key);
  if (v.is_number()) return {as_number(v, path)};
  if (!v.is_object()) throw ConfigError(path + ": expected a list or {lo, hi, count}");
  ConfigNode g = parent.child(key);
  const double lo = g.number("lo");
  const double hi = g.number("hi");
  const int count = g.integer("count");
  g.finish();
  return linspace(lo, hi, count, path);
}

std::vector<Vector> parse_points(const ConfigNode& parent, const std::string& key, int d) {
  const json& v = parent.raw(key);
  const std::string path = parent.key_path(key);
  if (v.is_object() && v.contains("points")) {
    ConfigNode g = parent.child(key);
    const json& pts = g.raw("points");
    if (!pts.is_array()) throw ConfigError(g.key_path("points") + ": expected a list of points");
    std::vector<Vector> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::string ip = g.key_path("points") + "[" + std::to_string(i) + "]";
      if (!pts[i].is_array() || static_cast<int>(pts[i].size()) != d)
        throw ConfigError(ip + ": expected " + std::to_string(d) + " coordinates");
      Vector x;
      for (std::size_t j = 0; j < pts[i].size(); ++j)
        x.push_back(as_number(pts[i][j], ip + "[" + std::to_string(j) + "]"));
      out.push_back(std::move(x));
    }
    g.finish();
    return out;
  }
  if (d != 1) throw ConfigError(path + ": use {\"points\": [...]} when d > 1");
  std::vector<Vector> out;
  for (double x : parse_scalar_grid(parent, key)) out.push_back({x});
  return out;
}

Vector sized_numbers(const ConfigNode& node, const std::string& key, int d) {
  Vector v = node.numbers(key);
  if (static_cast<int>(v.size()) != d)
    throw ConfigError(node.key_path(key) + ": expected " + std::to_string(d) + " components");
  return v;
}

PhysicalParams parse_physics(const ConfigNode& node) {
  PhysicalParams p;
  p.m = node.number_or("m", 1.0);
  p.omega = node.number_or("omega", 1.0);
  p.hbar = node.number_or("hbar", 1.0);
  p.d = node.integer_or("d", 1);
  node.finish();
  try {
    p.validate();
  } catch (const DomainError& e) {
    throw ConfigError(node.path() + ": " + e.what());
  }
  return p;
}

ForceModel parse_force(const ConfigNode& node, int d) {
  const std::string kind = node.string("kind");
  ForceModel f = ForceModel::zero(d);
  if (kind == "zero") {
  } else if (kind == "constant") {
    f = ForceModel::constant(sized_numbers(node, "f0", d));
  } else if (kind == "sinusoidal") {
    f = ForceModel::sinusoidal(sized_numbers(node, "f0", d), node.number("nu"),
                               node.number_or("phase", 0.0));
  } else if (kind == "tabulated") {
    std::vector<double> times = node.numbers("times");
    const json& vals = node.raw("values");
    if (!vals.is_array() || vals.size() != times.size())
      throw ConfigError(node.key_path("values") + ": expected one vector per time");
    std::vector<Vector> values;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const std::string ip = node.key_path("values") + "[" + std::to_string(i) + "]";
      if (!vals[i].is_array() || static_cast<int>(vals[i].size()) != d)
        throw ConfigError(ip + ": expected " + std::to_string(d) + " components");
      Vector v;
      for (const auto& c : vals[i]) v.push_back(as_number(c, ip));
      values.push_back(std::move(v));
    }
    try {
      f = ForceModel::tabulated(std::move(times), std::move(values));
    } catch (const DomainError& e) {
      throw ConfigError(node.path() + ": " + e.what());
    }
  } else {
    throw ConfigError(node.key_path("kind") + ": unknown force kind '" + kind +
                      "' (zero, constant, sinusoidal, tabulated)");
  }
  node.finish();
  return f;
}

SequenceBlock parse_sequence(const ConfigNode& node, const PhysicalParams& phys) {
  SequenceBlock b;
  b.spec.a = node.number("a");
  b.spec.p = sized_numbers(node, "p", phys.d);
  b.spec.n = node.integers("n");
  b.spec.hbar = phys.hbar;
  const std::string family = node.string_or("family", "F");
  if (family == "F") {
    b.family = Family::F;
  } else if (family == "Y" || family == "Z") {
    b.q = node.integer("q");
    if (b.q < 0) throw ConfigError(node.key_path("q") + ": must be non-negative");
    const bool odd = b.q % 2 != 0;
    if (family == "Z" && !odd) throw ConfigError(node.key_path("q") + ": Z needs odd q");
    b.family = odd ? Family::Z : Family::Y;
  } else {
    throw ConfigError(node.key_path("family") + ": expected F, Y or Z");
  }
  node.finish();
  try {
    b.spec.validate();
    if (b.family != Family::F) b.spec.scalar_order();
  } catch (const DomainError& e) {
    throw ConfigError(node.path() + ": " + e.what());
  }
  return b;
}

FieldBlock parse_field(const ConfigNode& node, int d) {
  FieldBlock f;
  const std::string kind = node.string("kind");
  if (kind == "modes") {
    f.kind = FieldBlock::Kind::modes;
    const json& modes = node.raw("modes");
    if (!modes.is_array() || modes.empty())
      throw ConfigError(node.key_path("modes") + ": expected a non-empty list");
    for (std::size_t i = 0; i < modes.size(); ++i) {
      ConfigNode m(modes[i], node.key_path("modes") + "[" + std::to_string(i) + "]");
      std::vector<int> k = m.integers("k");
      if (static_cast<int>(k.size()) != d)
        throw ConfigError(m.key_path("k") + ": expected " + std::to_string(d) + " indices");
      f.modes.emplace_back(std::move(k),
                           std::complex<double>(m.number_or("re", 0.0), m.number_or("im", 0.0)));
      m.finish();
    }
  } else if (kind == "sequence") {
    f.kind = FieldBlock::Kind::sequence;
  } else if (kind == "random") {
    f.kind = FieldBlock::Kind::random;
    f.seed = static_cast<unsigned long long>(node.integer_or("seed", 1));
    f.stride = node.integer_or("stride", 1);
    if (f.stride < 1) throw ConfigError(node.key_path("stride") + ": must be positive");
  } else {
    throw ConfigError(node.key_path("kind") + ": expected modes, sequence or random");
  }
  node.finish();
  return f;
}

PotentialModel parse_potential(const ConfigNode& node) {
  const std::string kind = node.string("kind");
  PotentialModel v = PotentialModel::zero();
  try {
    if (kind == "zero") {
    } else if (kind == "constant") {
      v = PotentialModel::constant(node.number("v0"));
    } else if (kind == "tabulated") {
      v = PotentialModel::tabulated(node.numbers("times"), node.numbers("values"));
    } else {
      throw ConfigError(node.key_path("kind") + ": expected zero, constant or tabulated");
    }
  } catch (const DomainError& e) {
    throw ConfigError(node.path() + ": " + e.what());
  }
  node.finish();
  return v;
}

void check_blocks(const ConfigNode& root, const std::string& command,
                  const std::vector<std::string>& required) {
  for (const auto& key : required)
    if (!root.has(key))
      throw ConfigError("missing block '" + key + "' required by command '" + command + "'");
}

}  // namespace

// ---------------------------------------------------------------------------
// ConfigNode

ConfigNode::ConfigNode(const json& value, std::string path)
    : value_(&value), path_(std::move(path)), used_(std::make_shared<std::set<std::string>>()) {
  if (!value.is_object())
    throw ConfigError((path_.empty() ? std::string("document") : path_) + ": expected an object, got " +
                      type_name(value));
}

std::string ConfigNode::key_path(const std::string& key) const {
  return path_.empty() ? key : path_ + "." + key;
}

bool ConfigNode::has(const std::string& key) const { return value_->contains(key); }

const json& ConfigNode::lookup(const std::string& key) const {
  const auto it = value_->find(key);
  if (it == value_->end()) throw ConfigError(key_path(key) + ": missing required key");
  used_->insert(key);
  return *it;
}

const json& ConfigNode::raw(const std::string& key) const { return lookup(key); }

ConfigNode ConfigNode::child(const std::string& key) const {
  return ConfigNode(lookup(key), key_path(key));
}

std::optional<ConfigNode> ConfigNode::optional_child(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return child(key);
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path + ": expected a number, got " + type_name(v));
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path + ": must be finite");
  return x;
}

int as_integer(const json& v, const std::string& path) {
  if (v.is_number_integer()) return v.get<int>();
  if (v.is_number_float()) {
    const double x = v.get<double>();
    if (std::floor(x) == x && std::abs(x) < 2e9) return static_cast<int>(x);
  }
  throw ConfigError(path + ": expected an integer, got " + type_name(v));
}

double ConfigNode::number(const std::string& key) const { return as_number(lookup(key), key_path(key)); }

double ConfigNode::number_or(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

int ConfigNode::integer(const std::string& key) const {
  return as_integer(lookup(key), key_path(key));
}

int ConfigNode::integer_or(const std::string& key, int fallback) const {
  return has(key) ? integer(key) : fallback;
}

std::string ConfigNode::string(const std::string& key) const {
  const json& v = lookup(key);
  if (!v.is_string()) throw ConfigError(key_path(key) + ": expected a string, got " + type_name(v));
  return v.get<std::string>();
}

std::string ConfigNode::string_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? string(key) : fallback;
}

bool ConfigNode::boolean_or(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const json& v = lookup(key);
  if (!v.is_boolean()) throw ConfigError(key_path(key) + ": expected true or false");
  return v.get<bool>();
}

std::vector<double> ConfigNode::numbers(const std::string& key) const {
  const json& v = lookup(key);
  if (!v.is_array()) throw ConfigError(key_path(key) + ": expected a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(as_number(v[i], key_path(key) + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<int> ConfigNode::integers(const std::string& key) const {
  const json& v = lookup(key);
  if (!v.is_array()) return {as_integer(v, key_path(key))};
  std::vector<int> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(as_integer(v[i], key_path(key) + "[" + std::to_string(i) + "]"));
  return out;
}

void ConfigNode::finish() const {
  for (auto it = value_->begin(); it != value_->end(); ++it)
    if (!used_->count(it.key()))
      throw ConfigError(key_path(it.key()) + ": unknown key");
}

// ---------------------------------------------------------------------------

RunConfig parse_config(const std::string& text, const std::string& command) {
  if (std::find(command_names().begin(), command_names().end(), command) == command_names().end())
    throw ConfigError("unknown command '" + command + "'");
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const long line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
    throw ConfigError("config parse error at line " + std::to_string(line) + ": " + e.what());
  }
  ConfigNode root(doc, "");
  RunConfig cfg;
  cfg.command = command;
  cfg.echo = doc;
  if (root.has("command") && root.string("command") != command)
    throw ConfigError("command: config is for '" + root.string("command") + "', not '" +
                      command + "'");

  const bool needs_sequence = command != "persistence";
  const bool needs_force = command == "evolve" || command == "singularity";
  std::vector<std::string> required{"physics", "study"};
  if (needs_sequence) required.push_back("sequence");
  if (needs_force) required.push_back("force");
  if (command == "persistence") required.push_back("persistence");
  check_blocks(root, command, required);

  cfg.physics = parse_physics(root.child("physics"));
  const int d = cfg.physics.d;
  if (root.has("force")) {
    if (!needs_force) throw ConfigError("force: not used by command '" + command + "'");
    cfg.force = parse_force(root.child("force"), d);
  }
  if (root.has("sequence")) cfg.sequence = parse_sequence(root.child("sequence"), cfg.physics);
  if (root.has("persistence") && command != "persistence")
    throw ConfigError("persistence: not used by command '" + command + "'");

  const ConfigNode study = root.child("study");
  if (command == "sequence") {
    if (d != 1) throw ConfigError("physics.d: the sequence command tabulates d = 1");
    auto& s = cfg.sequence_study;
    s.x = parse_scalar_grid(study, "x");
    s.tolerance = study.number_or("tolerance", s.tolerance);
    s.mask = study.number_or("mask", s.mask);
  } else if (command == "evolve") {
    auto& s = cfg.evolve_study;
    s.t = parse_scalar_grid(study, "t");
    s.x = parse_points(study, "x", d);
    if (study.has("methods")) {
      const json& m = study.raw("methods");
      if (!m.is_array() || m.empty())
        throw ConfigError(study.key_path("methods") + ": expected a non-empty list");
      s.methods.clear();
      for (std::size_t i = 0; i < m.size(); ++i) {
        const std::string ip = study.key_path("methods") + "[" + std::to_string(i) + "]";
        if (!m[i].is_string()) throw ConfigError(ip + ": expected a method name");
        try {
          s.methods.push_back(parse_method(m[i].get<std::string>()));
        } catch (const DomainError& e) {
          throw ConfigError(ip + ": " + e.what());
        }
      }
      for (std::size_t i = 0; i < s.methods.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
          if (s.methods[i] == s.methods[j])
            throw ConfigError(study.key_path("methods") + ": duplicate method");
    }
    s.tolerance = study.number_or("tolerance", s.tolerance);
    s.quadrature_tolerance = study.number_or("quadrature_tolerance", s.quadrature_tolerance);
    if (study.has("limit_tolerance")) s.limit_tolerance = study.number("limit_tolerance");
    if (study.has("truncation")) {
      const json& tr = study.raw("truncation");
      if (tr.is_string()) {
        if (tr.get<std::string>() != "adaptive")
          throw ConfigError(study.key_path("truncation") + ": expected \"adaptive\" or an integer");
      } else {
        s.truncation = as_integer(tr, study.key_path("truncation"));
      }
    }
    if (study.has("betas")) s.betas = study.numbers("betas");
    s.extended_window = study.boolean_or("extended_window", false);
    if (cfg.sequence->family != Family::F)
      for (Method m : s.methods)
        if (m != Method::mode_sum && m != Method::closed_form_limit)
          throw ConfigError(study.key_path("methods") +
                            ": Y and Z data support mode_sum and closed_form_limit only");
    for (Method m : s.methods)
      if (m == Method::quadrature && d != 1)
        throw ConfigError(study.key_path("methods") + ": quadrature needs d = 1");
  } else if (command == "singularity") {
    auto& s = cfg.singularity_study;
    s.t = parse_scalar_grid(study, "t");
    s.x0 = study.has("x0") ? sized_numbers(study, "x0", d) : Vector(d, 0.0);
    const std::string source = study.string_or("source", "limit");
    if (source != "limit" && source != "mode_sum")
      throw ConfigError(study.key_path("source") + ": expected limit or mode_sum");
    s.use_mode_sum = source == "mode_sum";
    s.tolerance = study.number_or("tolerance", s.tolerance);
    s.extended_window = study.boolean_or("extended_window", false);
    if (cfg.sequence->family != Family::F)
      throw ConfigError("sequence.family: the singularity sweep uses F data");
  } else {
    auto& s = cfg.persistence_study;
    const ConfigNode block = root.child("persistence");
    const ConfigNode lattice = block.child("lattice");
    s.n = lattice.integers("n");
    s.p = sized_numbers(lattice, "p", d);
    lattice.finish();
    s.field = parse_field(block.child("field"), d);
    if (s.field.kind == FieldBlock::Kind::sequence && !cfg.sequence)
      throw ConfigError("persistence.field: kind 'sequence' needs a sequence block");
    if (cfg.sequence && s.field.kind != FieldBlock::Kind::sequence)
      throw ConfigError("sequence: only used by a persistence field of kind 'sequence'");
    if (block.has("potential")) s.potential = parse_potential(block.child("potential"));
    if (block.has("period")) s.period = sized_numbers(block, "period", d);
    const std::string path = block.string_or("path", "lattice");
    if (path == "lattice") s.path = PeriodicityPath::lattice;
    else if (path == "quadrature") s.path = PeriodicityPath::quadrature;
    else throw ConfigError(block.key_path("path") + ": expected lattice or quadrature");
    block.finish();
    s.t = parse_scalar_grid(study, "t");
    s.t_prime = study.number_or("t_prime", 0.0);
    s.tolerance = study.number_or("tolerance", 0.0);
    s.roundtrip_tolerance = study.number_or("roundtrip_tolerance", s.roundtrip_tolerance);
    s.commutation_tolerance = study.number_or("commutation_tolerance", s.commutation_tolerance);
    s.grid_points = study.integer_or("grid_points", s.grid_points);
  }
  study.finish();

  if (auto out = root.optional_child("output")) {
    cfg.output.path = out->string_or("path", "");
    cfg.output.format = out->string_or("format", "csv");
    cfg.output.precision = out->integer_or("precision", 17);
    out->finish();
  }
  if (cfg.output.format != "csv" && cfg.output.format != "json")
    throw ConfigError("output.format: expected csv or json");
  if (cfg.output.precision < 1 || cfg.output.precision > 17)
    throw ConfigError("output.precision: expected 1..17 significant digits");
  root.finish();
  return cfg;
}

RunConfig load_config(const std::string& path, const std::string& command) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), command);
}

}  // namespace superosc::cli
