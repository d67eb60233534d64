#pragma once

// Run configuration for the command-line front end. Configs are JSON
// documents; every object is parsed strictly and unknown keys are errors.

#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "superosc/evolution.hpp"
#include "superosc/force.hpp"
#include "superosc/params.hpp"
#include "superosc/persistence.hpp"
#include "superosc/sequences.hpp"

namespace superosc::cli {

/// Raised for malformed or inconsistent configuration; `what()` names the key path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Read-only view of one JSON object that records which keys were consumed.
class ConfigNode {
 public:
  ConfigNode(const nlohmann::json& value, std::string path);

  const std::string& path() const noexcept { return path_; }
  std::string key_path(const std::string& key) const;
  bool has(const std::string& key) const;

  ConfigNode child(const std::string& key) const;
  std::optional<ConfigNode> optional_child(const std::string& key) const;
  const nlohmann::json& raw(const std::string& key) const;

  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  int integer(const std::string& key) const;
  int integer_or(const std::string& key, int fallback) const;
  std::string string(const std::string& key) const;
  std::string string_or(const std::string& key, const std::string& fallback) const;
  bool boolean_or(const std::string& key, bool fallback) const;
  std::vector<double> numbers(const std::string& key) const;
  /// A single integer or a list of integers.
  std::vector<int> integers(const std::string& key) const;

  /// Throws ConfigError naming the first key that was never read.
  void finish() const;

 private:
  const nlohmann::json* value_;
  std::string path_;
  std::shared_ptr<std::set<std::string>> used_;
  const nlohmann::json& lookup(const std::string& key) const;
};

double as_number(const nlohmann::json& v, const std::string& path);
int as_integer(const nlohmann::json& v, const std::string& path);

enum class Family { F, Y, Z };

struct SequenceBlock {
  SuperoscSpec spec;
  Family family = Family::F;
  int q = 0;
};

struct SequenceStudy {
  std::vector<double> x;
  double tolerance = 1e-12;
  double mask = 1e-8;
};

struct EvolveStudy {
  std::vector<double> t;
  std::vector<Vector> x;
  std::vector<Method> methods{Method::mode_sum, Method::operator_series};
  double tolerance = 1e-10;
  double quadrature_tolerance = 1e-4;
  /// Not checked unless set: the limit differs from finite n by design.
  std::optional<double> limit_tolerance;
  std::optional<int> truncation;
  std::vector<double> betas{1e-2, 5e-3, 2.5e-3, 1.25e-3};
  bool extended_window = false;
};

struct SingularityStudy {
  std::vector<double> t;
  Vector x0;
  bool use_mode_sum = false;
  double tolerance = 1e-12;
  bool extended_window = false;
};

struct FieldBlock {
  enum class Kind { modes, sequence, random } kind = Kind::modes;
  std::vector<std::pair<std::vector<int>, std::complex<double>>> modes;
  unsigned long long seed = 1;
  int stride = 1;
};

struct PersistenceStudy {
  std::vector<int> n;
  Vector p;
  FieldBlock field;
  PotentialModel potential = PotentialModel::zero();
  std::optional<Vector> period;
  PeriodicityPath path = PeriodicityPath::lattice;
  std::vector<double> t;
  double t_prime = 0.0;
  double tolerance = 0.0;  ///< 0 selects the path default
  double roundtrip_tolerance = 1e-12;
  double commutation_tolerance = 1e-10;
  int grid_points = 17;
};

struct OutputBlock {
  std::string path;  ///< empty: standard output
  std::string format = "csv";
  int precision = 17;
};

struct RunConfig {
  std::string command;
  PhysicalParams physics;
  std::optional<ForceModel> force;
  std::optional<SequenceBlock> sequence;
  SequenceStudy sequence_study;
  EvolveStudy evolve_study;
  SingularityStudy singularity_study;
  PersistenceStudy persistence_study;
  OutputBlock output;
  nlohmann::json echo;  ///< the parsed document, for metadata
};

/// Parses a config document for `command`.
RunConfig parse_config(const std::string& text, const std::string& command);
RunConfig load_config(const std::string& path, const std::string& command);

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"sequence", "evolve", "singularity", "persistence"};
  return names;
}

}  // namespace superosc::cli
