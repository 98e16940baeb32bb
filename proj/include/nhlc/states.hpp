#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>

#include "nhlc/linalg.hpp"

namespace nhlc {

/// Trace-one positive semidefinite matrix together with its subsystem layout.
class DensityState {
 public:
  /// Validates Hermiticity, unit trace and positivity (tolerance 1e-10).
  DensityState(Matrix m, SubsystemShape shape);

  const Matrix& matrix() const { return m_; }
  const SubsystemShape& shape() const { return shape_; }
  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }

 private:
  Matrix m_;
  SubsystemShape shape_;
};

namespace state_kind {
struct PlusProduct {};
struct Ghz {};
/// e^{−βH′}/Z for a Hermitian H′ on the full space.
struct Gibbs {
  Matrix H;
  double beta = 1.0;
};
/// ⊗_j e^{−βh}/Z_j with the same single-site Hermitian h on every site.
struct LocalGibbs {
  Matrix h;
  double beta = 1.0;
};
struct RandomPure {
  std::uint64_t seed = 0;
};
/// (1−ε)·G†G/Tr[G†G] + ε·I/d with complex Gaussian G.
struct RandomFullRank {
  std::uint64_t seed = 0;
};
}  // namespace state_kind

using StateKind = std::variant<state_kind::PlusProduct, state_kind::Ghz, state_kind::Gibbs,
                               state_kind::LocalGibbs, state_kind::RandomPure,
                               state_kind::RandomFullRank>;

std::string state_kind_name(const StateKind& kind);

/// Mixing weight used by RandomFullRank for dimension d; keeps λ_min ≥ 1e-4 for d ≤ 10⁴.
double full_rank_mixing(std::size_t d);

/// F with ρ = F F†. Pure states give a single column.
Matrix make_state_factor(const StateKind& kind, const SubsystemShape& shape);

DensityState make_state(const StateKind& kind, const SubsystemShape& shape);

/// Partial trace onto `keep`; the result's shape lists the kept sites in ascending order.
DensityState reduced_state(const DensityState& rho, std::span<const std::size_t> keep);

/// Tr[ρ X] without forming the product.
Complex trace_product(const Matrix& rho, const Matrix& x);

}  // namespace nhlc
