#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "nhlc/lightcone.hpp"
#include "nhlc/model.hpp"
#include "nhlc/states.hpp"

namespace nhlc {

/// Invalid configuration; key() names the offending entry, e.g. "scan.B.stop".
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::invalid_argument(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct ModelSection {
  std::size_t n = 11;
  double J = 0.95;
  double g = 1.0;
  double h = 0.5;
  std::vector<double> gamma{0.0};
  std::string boundary = "open";

  friend bool operator==(const ModelSection&, const ModelSection&) = default;
};

struct StateSection {
  std::string kind = "plus_product";  // plus_product | ghz | gibbs | local_gibbs | random_pure | random_full_rank
  double beta = 1.0;
  std::map<std::string, double> h_prime;  // single-site field, Pauli label -> coefficient
  std::uint64_t seed = 0;

  friend bool operator==(const StateSection&, const StateSection&) = default;
};

struct SiteRange {
  std::size_t start = 0;
  std::size_t stop = 0;  // inclusive

  friend bool operator==(const SiteRange&, const SiteRange&) = default;
};

struct TimeSection {
  double start = 0.0;
  double stop = 5.0;
  std::size_t steps = 51;

  friend bool operator==(const TimeSection&, const TimeSection&) = default;
};

struct ScanSection {
  std::string kind = "cc";  // cc | mi | commutator
  std::string correlator = "traditional";
  std::size_t A = 0;
  SiteRange B{0, 10};
  TimeSection t;
  std::string aggregate = "mean_abs";
  bool normalize = true;
  std::string picture = "tilde";

  friend bool operator==(const ScanSection&, const ScanSection&) = default;
};

struct OutputSection {
  std::string directory = "out";
  std::vector<std::string> formats{"csv"};

  friend bool operator==(const OutputSection&, const OutputSection&) = default;
};

struct RunSection {
  std::size_t workers = 1;

  friend bool operator==(const RunSection&, const RunSection&) = default;
};

struct ExperimentConfig {
  std::string name = "experiment";
  ModelSection model;
  StateSection state;
  ScanSection scan;
  OutputSection output;
  RunSection run;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Parses and validates. Unknown keys and out-of-range values raise ConfigError.
ExperimentConfig parse_config(const std::string& yaml_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Full YAML rendering; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& c);

void validate(const ExperimentConfig& c);

nlohmann::json to_json(const ExperimentConfig& c);

TimeGrid time_grid(const ScanSection& s);
std::vector<std::size_t> b_sites(const ScanSection& s);
TfimParams tfim_params(const ModelSection& m, double gamma);
StateKind state_kind_for(const StateSection& s, std::size_t n);

/// Pinned configurations shipped with the tool: fig1 fig2 fig3 fig4 d1 d2.
std::vector<std::string> bundled_config_names();
/// Throws ConfigError for an unknown name.
std::string bundled_config(const std::string& name);

}  // namespace nhlc
