#pragma once

#include <memory>
#include <span>
#include <variant>

#include "nhlc/linalg.hpp"
#include "nhlc/model.hpp"
#include "nhlc/states.hpp"

namespace nhlc {

/// U_t = e^{−iHt} with its inverse and adjoint.
struct Propagator {
  double t = 0.0;
  Matrix U;
  Matrix U_inv;
  Matrix U_dag;
};

/// Builds propagators of one Hamiltonian at many times.
///
/// The eigendecomposition (of H, or of H₀ when a Dyson map is known) is computed once
/// and shared by every call to at(); without a usable one each time falls back to Padé.
class Evolver {
 public:
  enum class Mode { Hermitian, Similarity, Diagonalizable, Pade };

  explicit Evolver(Matrix H);
  /// Uses U = S e^{−iH₀t} S⁻¹ when ‖S‖‖S⁻¹‖ < 1e6, otherwise the plain route for H.
  explicit Evolver(const QuasiHermitianModel& model);

  Propagator at(double t) const;
  Mode mode() const { return mode_; }
  const Matrix& hamiltonian() const { return H_; }

 private:
  void init_plain();

  Matrix H_;
  Mode mode_ = Mode::Pade;
  Matrix V_;       // eigenvectors (of H or H₀)
  Matrix V_inv_;   // V⁻¹ (= V† for Hermitian spectra)
  Vector lambda_;  // eigenvalues
  Vector s_left_;  // diagonal S when the Dyson map is diagonal
  Matrix S_, S_inv_;
  bool diagonal_s_ = false;
};

/// Eigenvector condition number limit for the spectral cache.
inline constexpr double kSpectralConditionLimit = 1e6;
/// Trajectory norms at or below this raise VanishingTrajectory.
inline constexpr double kTrajectoryFloor = 1e-300;

Propagator propagator(const Matrix& H, double t);

/// ρ(t) = UρU†/Tr[UρU†].
DensityState evolve_state(const DensityState& rho, const Propagator& prop);

namespace picture {
struct Heisenberg {};
struct Tilde {};
/// V†(S⁻¹OS)V with V = S⁻¹US.
struct Dyson {
  Matrix S;
};
}  // namespace picture

using Picture = std::variant<picture::Heisenberg, picture::Tilde, picture::Dyson>;

Matrix evolve_operator(const Matrix& O, const Propagator& prop, const Picture& pic);

/// ‖O_k···O_1|ψ⟩‖² for operators with ‖O_i‖ ≤ 1.
double povm_success(const Vector& psi, std::span<const Matrix> ops);

/// Γ = i(H − H†)/2, so that H = H₀ − iΓ with Hermitian H₀ and Γ.
struct DampingPart {
  Matrix Gamma;
};

DampingPart damping_part(const Matrix& H);

/// H + i·λ_min(Γ)·I, whose damping part Γ − λ_min(Γ) is positive semidefinite.
/// The normalized dynamics are unchanged by this shift.
Matrix shift_to_nonnegative_damping(const Matrix& H);

/// d/dt ‖ψ(t)‖² = −2⟨ψ(t)|Γ|ψ(t)⟩ for unnormalized evolution.
double success_decay_rate(const Vector& psi_t, const DampingPart& damping);

}  // namespace nhlc
