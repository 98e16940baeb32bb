#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nhlc/linalg.hpp"
#include "nhlc/states.hpp"

namespace nhlc {

/// Two disjoint site sets of one state. For operator_schmidt and the δρ analyses they
/// must together cover every site of the state.
struct Bipartition {
  std::vector<std::size_t> a;
  std::vector<std::size_t> b;
};

/// M = Σ_i λ_i Γ_A^i ⊗ Γ_B^i with Tr[Γ_X^{i†}Γ_X^j] = δ_ij and λ descending.
/// Terms with λ_i ≤ 1e-12·λ_max are dropped; rank counts the kept ones.
struct SchmidtDecomposition {
  std::vector<double> lambdas;
  std::vector<Matrix> gamma_a;
  std::vector<Matrix> gamma_b;
  std::size_t rank = 0;
  SubsystemShape shape_a;
  SubsystemShape shape_b;
};

inline constexpr double kSchmidtRankTolerance = 1e-12;

/// Operator Schmidt decomposition of any square matrix on `shape`, via SVD of the
/// realigned matrix R_{(a a'),(b b')} = M_{(a b),(a' b')}.
SchmidtDecomposition operator_schmidt(const Matrix& m, const SubsystemShape& shape,
                                      const Bipartition& bp);
SchmidtDecomposition operator_schmidt(const DensityState& rho, const Bipartition& bp);

/// Σ λ_i Γ_A^i ⊗ Γ_B^i placed back on the full shape.
Matrix schmidt_reconstruct(const SchmidtDecomposition& s, const SubsystemShape& shape,
                           const Bipartition& bp);

struct DeltaRhoReport {
  Matrix delta_rho;
  std::vector<Complex> cc_values;
  double hs_norm = 0.0;
  SchmidtDecomposition schmidt;  // of δρ itself
};

/// δρ = ρ − ρ_A⊗ρ_B expanded in its own operator Schmidt basis, δρ = Σ C_i Γ_A^i⊗Γ_B^i.
/// Each C_i is evaluated as the equal-time CC ⟨Γ_A^{i†}, Γ_B^{i†}⟩_c on ρ.
DeltaRhoReport delta_rho_analysis(const DensityState& rho, const Bipartition& bp);

struct ProductBasisReport {
  Matrix coefficients;  // C_{ij} = ⟨Γ_A^{i†}, Γ_B^{j†}⟩_c
  double hs_norm = 0.0;  // sqrt(Σ |C_ij|²)
};

/// Same expansion in a fixed orthonormal product basis (generalized Gell-Mann on each side).
ProductBasisReport delta_rho_product_basis(const DensityState& rho, const Bipartition& bp);

/// Orthonormal Hermitian basis of d×d matrices: I/√d followed by the generalized
/// Gell-Mann matrices scaled to unit Hilbert-Schmidt norm.
std::vector<Matrix> hermitian_operator_basis(std::size_t d);

/// −Tr[ρ log ρ] with natural logarithm.
double von_neumann_entropy(const Matrix& rho);

/// H(A) + H(B) − H(AB) on the reduced state of A ∪ B.
double mutual_information(const DensityState& rho, const Bipartition& bp);

struct MiBound {
  double bound = 0.0;           // ‖log(k*ρ_AB)‖₂ · ‖δρ_AB‖₂
  double log_k_star = 0.0;      // −mean(log eigenvalues of ρ_AB)
  double k_star = 0.0;
  double log_norm = 0.0;        // ‖log(k*ρ_AB)‖₂
  double delta_rho_norm = 0.0;  // ‖ρ_AB − ρ_A⊗ρ_B‖₂
};

/// Throws NotFullRank when ρ_AB has an eigenvalue ≤ 1e-12.
MiBound mi_bound(const DensityState& rho, const Bipartition& bp);

struct MetricDecompositionCheck {
  double residual = 0.0;            // |four-term sum − ⟨O_A, O_B⟩_c|
  double auxiliary_residual = 0.0;  // |1 − ⟨η_A⟩⟨η_B⟩ − ⟨η_A⁻¹, η_B⁻¹⟩_ηc|
  double eta_scale = 1.0;           // factor applied to η_A⊗η_B to get ⟨η⟩ = 1
};

/// Expands the traditional CC across a full bipartition A|B as four Metric-CC terms
/// for η = η_A⊗η_B (rescaled so that ⟨η⟩ = 1).
MetricDecompositionCheck metric_cc_decomposition_check(const DensityState& rho, const Bipartition& bp,
                                                       const Matrix& eta_a, const Matrix& eta_b,
                                                       const Matrix& o_a, const Matrix& o_b);

struct Tripartition {
  std::vector<std::size_t> a;
  std::vector<std::size_t> b;
  std::vector<std::size_t> c;
};

struct MembershipReport {
  std::vector<double> times;
  std::vector<double> delta_sigma_norms;  // ‖δσ_AB(t)‖₂
  std::vector<bool> sigma_product;
  double pseudo_hermitian_residual = 0.0;
  bool pseudo_hermitian = false;
  bool trivial = false;  // σ_AB product at every t and H†η = ηH
};

inline constexpr double kProductTolerance = 1e-9;

MembershipReport sigma_product_membership(const DensityState& rho, const Matrix& eta, const Matrix& H,
                                          const Tripartition& parts, std::span<const double> times);

struct TripartiteOptions {
  bool entangled_second_term = true;  // add a maximally entangled ρ_AB² on Γ_C²
  std::vector<double> epsilon_fallbacks{1e-1, 1e-2, 1e-3};
};

struct TripartiteExample {
  Matrix rho;
  SubsystemShape shape;  // {d_A, d_B, d_C}
  Matrix eta;      // I_A ⊗ I_B ⊗ η_C
  Matrix eta_c;    // Γ_C¹
  Matrix H_C;      // η_C⁻¹K with Hermitian K
  Matrix H;        // I_AB ⊗ H_C
  std::vector<Matrix> gamma_c;
  double epsilon = 0.0;
  double a2 = 0.0;  // weight of the entangled Γ_C² term
  double min_eigenvalue = 0.0;
  Tripartition parts;

  double max_metric_cc = 0.0;      // max |⟨O_A, O_B⟩_ηc| over the Hermitian operator bases
  double delta_rho_ab_norm = 0.0;  // ‖δρ_AB‖₂ of Tr_C[ρ]
  double max_c1k = 0.0;            // max_k |Tr[Γ^{1†}(H_CΓ^k − Γ^kH_C†)]|
};

/// Tripartite state whose A|B Metric CCs vanish while ρ_AB is correlated.
/// Throws PositivityFailure when neither ε nor any fallback yields ρ ≥ 0.
TripartiteExample tripartite_example(std::size_t d_a, std::size_t d_b, std::size_t d_c,
                                    std::uint64_t seed, double epsilon,
                                    const TripartiteOptions& opts = {});

/// δσ analysis for σ = ρη/⟨η⟩: the C_i are Metric CCs of the Schmidt factors of δσ.
DeltaRhoReport delta_sigma_analysis(const DensityState& rho, const Matrix& eta, const Bipartition& bp);

}  // namespace nhlc
