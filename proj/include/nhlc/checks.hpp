#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nhlc/lightcone.hpp"

namespace nhlc {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  nlohmann::json data;
  double seconds = 0.0;
};

/// Invariant checks shared by `verify` and the acceptance binary. Every check compares
/// a library result against an independent evaluation or a closed form.
namespace checks {

/// ‖H†η − ηH‖₂/(‖H‖₂‖η‖₂) ≤ 1e-12 for γ ∈ {0.3, 0.6, 0.9}, n = 2..n_max.
/// With inject_eta_identity the metric is replaced by I, which must fail.
CheckResult pseudo_hermiticity(std::size_t n_max, bool inject_eta_identity = false);

/// ‖SH₀S⁻¹ − H‖₂/‖H‖₂ ≤ 1e-9 and matching spectra within 1e-8.
CheckResult dyson_decomposition(std::size_t n_max);

/// Schrödinger CC at t = t′ against the traditional CC of the evolved state.
CheckResult equal_time_equivalence(std::size_t n, int tuples, std::uint64_t seed);

/// The three CC kinds agree at γ = 0.
CheckResult hermitian_degeneration(std::size_t n, int tuples, std::uint64_t seed);

/// ‖δρ‖₂² = Σ|C_i|² over all 2|2 cuts of random 4-qubit states, and the Bell value √3/2.
CheckResult delta_rho_identity(int states, std::uint64_t seed);

/// I(A;B) ≤ ‖log(k*ρ)‖₂‖δρ‖₂ and the closed-form k* against a grid search.
CheckResult mi_bound(int states, std::uint64_t seed);

/// Metric CC through U and through the Dyson picture; four-term decomposition.
CheckResult metric_identities(int tuples, std::uint64_t seed);

/// n-partite CC: bipartite limit, moment expansion, vanishing on product evolutions.
CheckResult npartite(std::uint64_t seed);

struct FigureOptions {
  std::size_t n = 11;
  TimeGrid grid{0.0, 5.0, 51};
  std::size_t workers = 1;
};

/// Traditional and metric CC grids at γ = 0 and γ = 0.9 from |+…+⟩ with A = 0.
CheckResult cc_figure_morphology(const FigureOptions& opts);

/// Mutual information from the β = 3 Gibbs state of −Σσ^x at γ = 0 and γ = 0.9.
CheckResult mi_figure(const FigureOptions& opts);

/// Commutator grids with A = 1 over γ ∈ {0, 0.3, 0.6, 0.9}.
CheckResult commutator_figures(const FigureOptions& opts);

/// Complex energy shifts, monotone norm decay, decay rate against finite differences.
CheckResult evolution_invariances(std::uint64_t seed);

/// ⟨σ^z_1, σ^z_n⟩_c = 1 on GHZ for n = 2..n_max.
CheckResult ghz(std::size_t n_max);

/// Tripartite construction: vanishing Metric CCs, entangled ρ_AB, C_{1k} = 0.
CheckResult tripartite_construction(int seeds);

/// Thermal time-translation residuals of the three candidate states.
CheckResult thermal_report();

}  // namespace checks

enum class VerifyLevel { Fast, Full };

struct VerifyOptions {
  VerifyLevel level = VerifyLevel::Fast;
  bool inject_eta_identity = false;
  std::size_t workers = 1;
  std::optional<std::filesystem::path> out;  // full level writes figure grids here
};

/// Fast: identities at n ≤ 6. Full: adds the n = 11 figure scans and emits one grid
/// per figure.
std::vector<CheckResult> verify_suite(const VerifyOptions& opts);

}  // namespace nhlc
