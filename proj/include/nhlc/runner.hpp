#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nhlc/config.hpp"
#include "nhlc/lightcone.hpp"

namespace nhlc {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kVerifyFailed = 1;
inline constexpr int kConfigError = 2;
inline constexpr int kNumericalError = 3;
}  // namespace exit_code

/// `x,t,value` rows ordered by (t, x), values with 17 significant digits, NaN as `nan`.
std::string grid_to_csv(const ScanGrid& grid);

/// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(const std::string& bytes);

/// Writes through a temporary file in the same directory and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Command-line overrides. The seed replaces state.seed; workers only affect speed.
struct RunOverrides {
  std::optional<std::filesystem::path> out;
  std::optional<std::size_t> workers;
  std::optional<std::uint64_t> seed;
};

struct RunResult {
  int exit_code = exit_code::kOk;
  std::string message;
  std::vector<std::filesystem::path> files;
  std::filesystem::path manifest;
};

/// One CSV per γ plus manifest.json in the output directory. Numerical failures give
/// exit code 3; configuration problems are reported before anything is written.
RunResult run_experiment(ExperimentConfig config, const RunOverrides& overrides = {});

/// Loads, validates and runs; config errors give exit code 2 with the offending key.
RunResult run_experiment_file(const std::filesystem::path& config_path, const RunOverrides& overrides = {});

/// Scan label used in file names, e.g. "cc_traditional" or "commutator_normalized".
std::string scan_label(const ScanSection& s);

/// "gamma0.3"-style tag; the shortest decimal that round-trips.
std::string gamma_tag(double gamma);

/// Runs the configured scan for one γ.
ScanGrid run_scan(const ExperimentConfig& config, double gamma, std::size_t workers);

}  // namespace nhlc
