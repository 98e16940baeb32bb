#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nhlc/evolution.hpp"
#include "nhlc/linalg.hpp"
#include "nhlc/model.hpp"

namespace nhlc {

enum class CcKind { Traditional, Schrodinger, Metric };

std::string to_string(CcKind k);
CcKind parse_cc_kind(const std::string& s);

/// |⟨η⟩| and |⟨I(t)⟩| at or below this raise typed errors.
inline constexpr double kDivergenceFloor = 1e-12;

/// Tr[ρO].
Complex expectation(const Matrix& rho, const Matrix& O);

/// Tr[ρO₁O₂] − Tr[ρO₁]Tr[ρO₂].
Complex equal_time_cc(const Matrix& rho, const Matrix& O1, const Matrix& O2);

/// ⟨O₁(t)O₂(t′)⟩ − ⟨O₁(t)⟩⟨O₂(t′)⟩ with O(t) = U†OU and ⟨X⟩ = Tr[ρX].
Complex traditional_cc(const Matrix& rho, const Matrix& O1, const Matrix& O2, const Propagator& p1,
                       const Propagator& p2);
Complex traditional_cc(const Matrix& rho, const Matrix& O1, const Matrix& O2, double t, double t2,
                       const Evolver& ev);

/// ⟨O₁(t)Õ₂(t′)⟩/⟨I(t)⟩ − ⟨O₁(t)⟩⟨I(t)Õ₂(t′)⟩/⟨I(t)⟩² with I(t) = U_t†U_t.
Complex schrodinger_cc(const Matrix& rho, const Matrix& O1, const Matrix& O2, const Propagator& p1,
                       const Propagator& p2);
Complex schrodinger_cc(const Matrix& rho, const Matrix& O1, const Matrix& O2, double t, double t2,
                       const Evolver& ev);

struct SigmaState {
  Matrix matrix;  // ρη/⟨η⟩
  Complex eta_expectation;
};

SigmaState sigma_state(const Matrix& rho, const Matrix& eta);

/// ⟨ηÕ₁(t)Õ₂(t′)⟩/⟨η⟩ − ⟨ηÕ₁(t)⟩⟨ηÕ₂(t′)⟩/⟨η⟩² with Õ = U⁻¹OU.
Complex metric_cc(const Matrix& rho, const Matrix& eta, const Matrix& O1, const Matrix& O2,
                  const Propagator& p1, const Propagator& p2);
Complex metric_cc(const Matrix& rho, const Matrix& eta, const Matrix& O1, const Matrix& O2, double t,
                  double t2, const Evolver& ev);

/// The Metric CC as a traditional CC of Ô = S⁻¹OS under V = e^{−iH₀t} on σ̂ = S⁻¹ρS⁻¹/⟨η⟩.
/// Independent of the U-based evaluation above.
Complex metric_cc_dyson_route(const Matrix& rho, const QuasiHermitianModel& model, const Matrix& O1,
                              const Matrix& O2, double t, double t2);

/// Dispatch on kind; `eta` is required for the Metric kind.
Complex connected_correlator(CcKind kind, const Matrix& rho, const Matrix* eta, const Matrix& O1,
                             const Matrix& O2, const Propagator& p1, const Propagator& p2);

using Partition = std::vector<std::vector<std::size_t>>;

/// All set partitions of {0, …, n−1}; blocks sorted, order deterministic. n ≤ 6.
std::vector<Partition> set_partitions(std::size_t n);

/// g(b) = (−1)^{b−1}(b−1)! for a partition with b blocks.
double partition_weight(std::size_t blocks);

struct TimedOperator {
  Matrix op;
  double t = 0.0;
};

/// n-partite CC as a partition sum over normalized moments.
///   traditional: moments Tr[ρ Π X_i] with X_i = U†O_iU
///   schrodinger: X₁ = U†O₁U, X_i = Õ_i (i > 1); blocks without operator 1 start with
///                I(t₁) = U†U; every moment is divided by ⟨I(t₁)⟩
///   metric:      moments Tr[ρη Π Õ_i]/⟨η⟩
/// Products inside a block follow ascending operator index.
Complex npartite_cc(CcKind kind, const Matrix& rho, std::span<const TimedOperator> ops,
                    const Evolver& ev, const Matrix* eta = nullptr);

enum class ThermalCandidate { NhGibbs, DysonGibbs, MetricGibbs };

std::string to_string(ThermalCandidate c);

/// Unnormalized candidate thermal operator, divided by its trace:
///   NhGibbs e^{−βH}, DysonGibbs S⁻¹e^{−βH₀}S⁻¹, MetricGibbs ηe^{−βH}.
Matrix thermal_candidate(const QuasiHermitianModel& model, double beta, ThermalCandidate c);

/// ⟨O₁(t)Õ₂(t′)⟩_s = Tr[ρU_t†O₁U_{t−t′}O₂U_{t′}]/Tr[ρU_t†U_t].
Complex schrodinger_correlator(const Matrix& rho, const Matrix& O1, const Matrix& O2, double t,
                               double t2, const Evolver& ev);

/// |⟨O_A(t)Õ_B(t′)⟩_s − ⟨O_A(0)Õ_B(t′−t)⟩_s| on the candidate thermal state.
double thermal_invariance_residual(const QuasiHermitianModel& model, double beta,
                                   ThermalCandidate candidate, const Matrix& O_A, const Matrix& O_B,
                                   double t, double t2);

}  // namespace nhlc
