#include "nhlc/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <system_error>
#include <unistd.h>

#include <openssl/evp.h>

#include "nhlc/errors.hpp"

#ifndef NHLC_VERSION
#define NHLC_VERSION "unknown"
#endif

namespace nhlc {

namespace fs = std::filesystem;

std::string grid_to_csv(const ScanGrid& grid) {
  std::string out = "x,t,value\n";
  char buf[96];
  for (Eigen::Index i = 0; i < grid.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < grid.values.cols(); ++j) {
      const double v = grid.values(i, j);
      const double t = grid.times[static_cast<std::size_t>(i)];
      const auto x = grid.sites[static_cast<std::size_t>(j)];
      if (std::isnan(v)) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,nan\n", x, t);
      } else {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", x, t, v);
      }
      out += buf;
    }
  }
  return out;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (unsigned int i = 0; i < len; ++i) {
    s += hex[md[i] >> 4];
    s += hex[md[i] & 15];
  }
  return s;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot move " + tmp.string() + " into place: " + ec.message());
  }
}

std::string scan_label(const ScanSection& s) {
  if (s.kind == "cc") return "cc_" + s.correlator;
  if (s.kind == "mi") return "mi";
  return s.normalize ? "commutator_normalized" : "commutator_unnormalized";
}

std::string gamma_tag(double gamma) {
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, gamma);
    if (std::strtod(buf, nullptr) == gamma) break;
  }
  return std::string("gamma") + buf;
}

ScanGrid run_scan(const ExperimentConfig& c, double gamma, std::size_t workers) {
  const auto model = build_quasi_hermitian(tfim_params(c.model, gamma));
  const auto grid = time_grid(c.scan);
  const auto sites = b_sites(c.scan);
  const auto& s = c.scan;
  ScanGrid out;
  if (s.kind == "cc") {
    out = scan_cc(model, state_kind_for(c.state, c.model.n), parse_cc_kind(s.correlator), s.A, sites, grid,
                  parse_aggregate(s.aggregate), workers);
  } else if (s.kind == "mi") {
    out = scan_mi(model, state_kind_for(c.state, c.model.n), s.A, sites, grid, workers);
  } else {
    const auto pic = s.picture == "heisenberg" ? OperatorPicture::Heisenberg : OperatorPicture::Tilde;
    out = scan_commutator(model, s.A, sites, grid, s.normalize, pic, workers);
  }
  return out;
}

RunResult run_experiment(ExperimentConfig config, const RunOverrides& ov) {
  RunResult result;
  if (ov.seed) config.state.seed = *ov.seed;
  if (ov.out) config.output.directory = ov.out->string();
  std::size_t workers = ov.workers.value_or(config.run.workers);
  if (workers == 0) {
    result.exit_code = exit_code::kConfigError;
    result.message = "--workers: must be at least 1";
    return result;
  }
  try {
    validate(config);
  } catch (const ConfigError& e) {
    result.exit_code = exit_code::kConfigError;
    result.message = e.what();
    return result;
  }

  const fs::path dir = config.output.directory;
  const auto t0 = std::chrono::steady_clock::now();
  nlohmann::json outputs = nlohmann::json::array();
  std::size_t error_count = 0;
  std::string status = "ok";
  for (double gamma : config.model.gamma) {
    ScanGrid grid;
    try {
      grid = run_scan(config, gamma, workers);
    } catch (const NumericalError& e) {
      result.exit_code = exit_code::kNumericalError;
      result.message = config.name + " at " + gamma_tag(gamma) + ": " + e.what();
      status = "failed";
      break;
    } catch (const std::invalid_argument& e) {
      result.exit_code = exit_code::kConfigError;
      result.message = config.name + " at " + gamma_tag(gamma) + ": " + e.what();
      status = "failed";
      break;
    }
    const std::string csv = grid_to_csv(grid);
    const fs::path file = dir / (scan_label(config.scan) + "_" + gamma_tag(gamma) + ".csv");
    write_file_atomic(file, csv);
    result.files.push_back(file);
    error_count += grid.errors.size();
    outputs.push_back({{"file", file.filename().string()},
                       {"sha256", sha256_hex(csv)},
                       {"gamma", gamma},
                       {"meta", grid.meta},
                       {"errors", grid.errors}});
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  nlohmann::json manifest;
  manifest["software"] = {{"name", "nhlc"}, {"version", NHLC_VERSION}};
  manifest["status"] = status;
  if (status != "ok") manifest["failure"] = result.message;
  manifest["config"] = to_json(config);
  manifest["config_yaml"] = serialize_config(config);
  manifest["workers"] = workers;
  manifest["wall_time_s"] = wall;
  manifest["outputs"] = outputs;
  manifest["cell_error_count"] = error_count;
  result.manifest = dir / "manifest.json";
  write_file_atomic(result.manifest, manifest.dump(2) + "\n");
  return result;
}

RunResult run_experiment_file(const fs::path& path, const RunOverrides& ov) {
  try {
    return run_experiment(load_config(path), ov);
  } catch (const ConfigError& e) {
    RunResult r;
    r.exit_code = exit_code::kConfigError;
    r.message = e.what();
    return r;
  }
}

}  // namespace nhlc
