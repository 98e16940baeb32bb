#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nhlc/checks.hpp"
#include "nhlc/config.hpp"
#include "nhlc/errors.hpp"
#include "nhlc/runner.hpp"

namespace {

int report_run(const nhlc::RunResult& r) {
  if (r.exit_code == nhlc::exit_code::kOk) {
    for (const auto& f : r.files) std::cout << f.string() << '\n';
    std::cout << "manifest: " << r.manifest.string() << '\n';
  } else {
    std::cerr << "error: " << r.message << '\n';
  }
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lightcone scans for non-Hermitian spin chains"};
  app.require_subcommand(1);

  std::optional<std::string> out;
  std::optional<std::size_t> workers;
  std::optional<std::uint64_t> seed;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out, "Output directory");
    sub->add_option("--workers", workers, "Worker threads (results do not depend on it)")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "Overrides state.seed");
  };

  std::string config_path;
  auto* scan = app.add_subcommand("scan", "Run an experiment described by a YAML config");
  scan->add_option("--config", config_path, "Experiment config")->required();
  add_common(scan);

  std::string level = "fast", fault;
  auto* verify = app.add_subcommand("verify", "Run the invariant checks");
  verify->add_option("--level", level, "fast or full")->check(CLI::IsMember({"fast", "full"}));
  verify->add_option("--inject-fault", fault, "Deliberately break a check")->check(CLI::IsMember({"eta-identity"}));
  add_common(verify);

  std::string figure;
  auto* reproduce = app.add_subcommand("reproduce", "Run one of the bundled figure configs");
  reproduce->add_option("figure", figure, "Figure name")
      ->required()
      ->check(CLI::IsMember(nhlc::bundled_config_names()));
  add_common(reproduce);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : nhlc::exit_code::kConfigError;
  }

  nhlc::RunOverrides ov;
  if (out) ov.out = *out;
  ov.workers = workers;
  ov.seed = seed;

  try {
    if (*scan) return report_run(nhlc::run_experiment_file(config_path, ov));

    if (*reproduce) return report_run(nhlc::run_experiment(nhlc::parse_config(nhlc::bundled_config(figure)), ov));

    nhlc::VerifyOptions vo;
    vo.level = level == "full" ? nhlc::VerifyLevel::Full : nhlc::VerifyLevel::Fast;
    vo.inject_eta_identity = fault == "eta-identity";
    vo.workers = workers.value_or(1);
    if (out) vo.out = *out;
    const auto results = nhlc::verify_suite(vo);
    bool ok = true;
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : results) {
      std::printf("%s %s: %s (%.2fs)\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str(), r.seconds);
      ok = ok && r.passed;
      j.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}, {"data", r.data}});
    }
    if (out) {
      std::filesystem::create_directories(*out);
      nhlc::write_file_atomic(std::filesystem::path(*out) / "verify.json", j.dump(2) + "\n");
    }
    return ok ? nhlc::exit_code::kOk : nhlc::exit_code::kVerifyFailed;
  } catch (const nhlc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return nhlc::exit_code::kConfigError;
  } catch (const nhlc::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return nhlc::exit_code::kNumericalError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return nhlc::exit_code::kConfigError;
  }
}
