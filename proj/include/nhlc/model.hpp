#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nhlc/linalg.hpp"

namespace nhlc {

namespace pauli {
Matrix identity();
Matrix x();
Matrix y();
Matrix z();
/// {σ^x, σ^y, σ^z} in that order.
std::vector<Matrix> xyz();
}  // namespace pauli

struct LocalTerm {
  std::vector<std::size_t> support;  // strictly increasing
  Matrix op;
  Complex coefficient{1.0, 0.0};
};

/// Open-chain NH transverse-field Ising couplings.
/// H = J Σ σ^z_j σ^z_{j+1} + Σ (g σ^x_j + h σ^z_j + iγ σ^y_j)
struct TfimParams {
  std::size_t n = 2;
  double J = 0.95;
  double g = 1.0;
  double h = 0.5;
  double gamma = 0.0;

  void validate() const;
};

/// Σ coefficient · (term embedded into the full space).
Matrix build_hamiltonian(std::span<const LocalTerm> terms, const SubsystemShape& shape);

std::vector<LocalTerm> tfim_terms(const TfimParams& p);
Matrix build_nh_tfim(const TfimParams& p);

struct QuasiHermitianModel {
  TfimParams params;
  SubsystemShape shape;
  Matrix H;
  Matrix H0;
  Matrix S;
  Matrix S_inv;
  Matrix eta;
  Matrix eta_inv;
  double beta_site = 0.0;

  std::size_t dim() const { return static_cast<std::size_t>(H.rows()); }
  bool hermitian() const { return params.gamma == 0.0; }
  /// ‖S‖‖S⁻¹‖ (operator norms), the condition number of the Dyson map.
  double dyson_condition() const;
};

/// Analytic Dyson decomposition of the NH TFIM. Throws PTBroken when |γ| ≥ |g|.
QuasiHermitianModel build_quasi_hermitian(const TfimParams& p);

/// Decomposition for a generic H with a user-supplied positive metric η:
/// S = η^{-1/2}, H₀ = S⁻¹HS. Throws NotPositiveDefinite, or NotHermitian when the
/// resulting H₀ is not Hermitian (η does not fit H).
QuasiHermitianModel quasi_hermitian_from_metric(const Matrix& H, const Matrix& eta,
                                                const SubsystemShape& shape);

/// ‖H†η − ηH‖₂ / (‖H‖₂‖η‖₂) with Hilbert-Schmidt norms.
double verify_pseudo_hermitian(const Matrix& H, const Matrix& eta);

/// ‖S H₀ S⁻¹ − H‖₂ / ‖H‖₂.
double dyson_residual(const QuasiHermitianModel& m);

/// Single-site operator op placed at `site`, identity elsewhere.
Matrix site_operator(const Matrix& op, std::size_t site, const SubsystemShape& shape);

/// Minimum |i − j| over i ∈ a, j ∈ b on the open chain.
std::size_t site_distance(std::span<const std::size_t> a, std::span<const std::size_t> b);

}  // namespace nhlc
