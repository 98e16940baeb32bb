#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace nhlc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

/// Local dimensions of an ordered list of subsystems ("sites").
///
/// Site 0 is the most significant tensor factor: a basis index of the full space is
/// i = Σ_s digit_s · stride_s with stride_s = Π_{r>s} dims[r].
struct SubsystemShape {
  std::vector<std::size_t> dims;

  static SubsystemShape qubits(std::size_t n) { return {std::vector<std::size_t>(n, 2)}; }

  std::size_t sites() const { return dims.size(); }
  std::size_t total_dim() const;
  std::size_t dim_of(std::span<const std::size_t> subset) const;
  std::size_t stride(std::size_t site) const;

  /// Sites not contained in `subset`, ascending.
  std::vector<std::size_t> complement(std::span<const std::size_t> subset) const;

  friend bool operator==(const SubsystemShape&, const SubsystemShape&) = default;
};

/// Offsets of the basis states of a site subset inside the full index.
///
/// For the subsystem ordering given by `sites` (first entry most significant),
/// offsets()[k] is the full-space index contribution of the k-th subset basis state.
/// Any full index splits uniquely as offsets_S[k] + offsets_{S^c}[r].
class SiteIndexMap {
 public:
  SiteIndexMap(const SubsystemShape& shape, std::span<const std::size_t> sites);

  std::size_t dim() const { return offsets_.size(); }
  const std::vector<std::size_t>& offsets() const { return offsets_; }
  std::size_t operator[](std::size_t k) const { return offsets_[k]; }

 private:
  std::vector<std::size_t> offsets_;
};

namespace linalg {

/// Standard Kronecker product a ⊗ b.
Matrix kron(const Matrix& a, const Matrix& b);

/// Tensor product of a list of factors, first factor most significant.
Matrix kron_all(std::span<const Matrix> factors);

/// Trace over every site not in `keep`. The result is ordered by ascending site.
Matrix partial_trace(const Matrix& m, const SubsystemShape& shape, std::span<const std::size_t> keep);

/// Embeds an operator acting on `support` (ascending sites) as op ⊗ I elsewhere.
Matrix embed_operator(const Matrix& op, std::span<const std::size_t> support,
                      const SubsystemShape& shape);

/// target += coefficient · embed_operator(op, support, shape), without forming the embedding.
void add_embedded(Matrix& target, Complex coefficient, const Matrix& op,
                  std::span<const std::size_t> support, const SubsystemShape& shape);

/// a ⊗ b with a on sites `sites_a` and b on `sites_b`; the two sets must cover the shape.
Matrix embed_product(const Matrix& a, std::span<const std::size_t> sites_a, const Matrix& b,
                     std::span<const std::size_t> sites_b, const SubsystemShape& shape);

/// Applies a single-site operator to a state vector in place of a full embedding.
Vector apply_site_operator(const Matrix& op, std::size_t site, const SubsystemShape& shape,
                           const Vector& v);
/// Column-wise version: returns embed(op)·block.
Matrix apply_site_operator(const Matrix& op, std::size_t site, const SubsystemShape& shape,
                           const Matrix& block);

/// e^m. Hermitian and anti-Hermitian inputs use the spectral route; everything else
/// goes through scaling-and-squaring with a degree-13 Padé approximant.
Matrix matrix_exponential(const Matrix& m);

struct SvdResult {
  Matrix u;
  RealVector singular_values;  // descending, non-negative
  Matrix v_adjoint;
};

SvdResult svd(const Matrix& m);
RealVector singular_values(const Matrix& m);

struct Norms {
  double operator_norm = 0.0;
  double hilbert_schmidt_norm = 0.0;
};

Norms norms(const Matrix& m);
double operator_norm(const Matrix& m);
double hs_norm(const Matrix& m);

/// ‖m − m†‖ ≤ rel_tol·‖m‖ (operator norms), checked through a cheap sufficient bound.
bool is_hermitian(const Matrix& m, double rel_tol = 1e-10);

/// Spectral logarithm of a Hermitian positive definite matrix.
/// Throws NotHermitian, or NotFullRank when the smallest eigenvalue is ≤ floor.
Matrix hermitian_log(const Matrix& m, double floor = 1e-12);

struct PsdSqrt {
  Matrix sqrt;
  Matrix inv_sqrt;
};

/// m^{1/2} and m^{-1/2} for Hermitian positive definite m. Throws NotPositiveDefinite.
PsdSqrt psd_sqrt_and_inverse(const Matrix& m);

/// Eigenvalues of a Hermitian matrix, ascending. Throws NotHermitian.
RealVector hermitian_eigenvalues(const Matrix& m);

bool is_diagonal(const Matrix& m);

}  // namespace linalg
}  // namespace nhlc
