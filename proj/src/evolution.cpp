#include "nhlc/evolution.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "nhlc/errors.hpp"

namespace nhlc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

constexpr Eigen::Index kGeneralEigenMaxDim = 256;

Vector phases(const Vector& lambda, Complex factor) {
  return (factor * lambda.array()).exp().matrix();
}

}  // namespace

Evolver::Evolver(Matrix H) : H_(std::move(H)) {
  if (H_.rows() != H_.cols()) throw ShapeError("Hamiltonian must be square");
  init_plain();
}

Evolver::Evolver(const QuasiHermitianModel& model) : H_(model.H) {
  if (model.hermitian() || model.dyson_condition() >= kSpectralConditionLimit) {
    init_plain();
    return;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (model.H0 + model.H0.adjoint()));
  V_ = es.eigenvectors();
  V_inv_ = V_.adjoint();
  lambda_ = es.eigenvalues().cast<Complex>();
  if (linalg::is_diagonal(model.S)) {
    diagonal_s_ = true;
    s_left_ = model.S.diagonal();
  } else {
    S_ = model.S;
    S_inv_ = model.S_inv;
  }
  mode_ = Mode::Similarity;
}

void Evolver::init_plain() {
  if (linalg::is_hermitian(H_)) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (H_ + H_.adjoint()));
    V_ = es.eigenvectors();
    V_inv_ = V_.adjoint();
    lambda_ = es.eigenvalues().cast<Complex>();
    mode_ = Mode::Hermitian;
    return;
  }
  if (H_.rows() <= kGeneralEigenMaxDim) {
    Eigen::ComplexEigenSolver<Matrix> es(H_);
    if (es.info() == Eigen::Success) {
      Eigen::PartialPivLU<Matrix> lu(es.eigenvectors());
      Matrix v_inv = lu.inverse();
      const double cond = linalg::operator_norm(es.eigenvectors()) * linalg::operator_norm(v_inv);
      if (std::isfinite(cond) && cond < kSpectralConditionLimit) {
        const Matrix rebuilt = es.eigenvectors() * es.eigenvalues().asDiagonal() * v_inv;
        const double scale = std::max(1.0, H_.norm());
        if ((rebuilt - H_).norm() <= 1e-11 * cond * scale) {
          V_ = es.eigenvectors();
          V_inv_ = std::move(v_inv);
          lambda_ = es.eigenvalues();
          mode_ = Mode::Diagonalizable;
          return;
        }
      }
    }
  }
  mode_ = Mode::Pade;
}

Propagator Evolver::at(double t) const {
  Propagator p;
  p.t = t;
  const Complex minus_i(0.0, -1.0);
  switch (mode_) {
    case Mode::Hermitian: {
      p.U = V_ * phases(lambda_, minus_i * t).asDiagonal() * V_inv_;
      p.U_inv = p.U.adjoint();
      p.U_dag = p.U_inv;
      break;
    }
    case Mode::Diagonalizable: {
      p.U = V_ * phases(lambda_, minus_i * t).asDiagonal() * V_inv_;
      p.U_inv = V_ * phases(lambda_, -minus_i * t).asDiagonal() * V_inv_;
      p.U_dag = p.U.adjoint();
      break;
    }
    case Mode::Similarity: {
      // e^{−iH₀t} is unitary, so its inverse is its adjoint.
      const Matrix w = V_ * phases(lambda_, minus_i * t).asDiagonal() * V_inv_;
      const Matrix w_inv = w.adjoint();
      if (diagonal_s_) {
        const Vector s_inv = s_left_.cwiseInverse();
        p.U = s_left_.asDiagonal() * w * s_inv.asDiagonal();
        p.U_inv = s_left_.asDiagonal() * w_inv * s_inv.asDiagonal();
      } else {
        p.U = S_ * w * S_inv_;
        p.U_inv = S_ * w_inv * S_inv_;
      }
      p.U_dag = p.U.adjoint();
      break;
    }
    case Mode::Pade: {
      p.U = linalg::matrix_exponential(minus_i * t * H_);
      p.U_inv = linalg::matrix_exponential(-minus_i * t * H_);
      p.U_dag = p.U.adjoint();
      break;
    }
  }
  return p;
}

Propagator propagator(const Matrix& H, double t) {
  if (H.rows() != H.cols()) throw ShapeError("Hamiltonian must be square");
  Propagator p;
  p.t = t;
  const Complex minus_i(0.0, -1.0);
  p.U = linalg::matrix_exponential(minus_i * t * H);
  p.U_inv = linalg::matrix_exponential(-minus_i * t * H);
  p.U_dag = p.U.adjoint();
  return p;
}

DensityState evolve_state(const DensityState& rho, const Propagator& prop) {
  if (prop.U.rows() != static_cast<Eigen::Index>(rho.dim())) throw ShapeError("propagator dimension");
  Matrix out = prop.U * rho.matrix() * prop.U_dag;
  const double norm = out.trace().real();
  if (!(norm > kTrajectoryFloor)) {
    std::ostringstream os;
    os << "Tr[U rho U^dag] = " << norm << " at t = " << prop.t;
    throw VanishingTrajectory(os.str());
  }
  out /= norm;
  out = 0.5 * (out + out.adjoint());
  return DensityState(std::move(out), rho.shape());
}

Matrix evolve_operator(const Matrix& O, const Propagator& prop, const Picture& pic) {
  if (O.rows() != prop.U.rows() || O.cols() != prop.U.cols()) {
    throw ShapeError("operator and propagator dimensions differ");
  }
  return std::visit(
      overloaded{[&](const picture::Heisenberg&) -> Matrix { return prop.U_dag * O * prop.U; },
                 [&](const picture::Tilde&) -> Matrix { return prop.U_inv * O * prop.U; },
                 [&](const picture::Dyson& d) -> Matrix {
                   if (d.S.rows() != O.rows() || d.S.cols() != O.cols()) {
                     throw ShapeError("Dyson map dimension");
                   }
                   Eigen::PartialPivLU<Matrix> lu(d.S);
                   const double rcond = lu.rcond();
                   if (!(rcond > 1e-14)) {
                     std::ostringstream os;
                     os << "Dyson map has reciprocal condition " << rcond;
                     throw SingularMatrix(os.str());
                   }
                   const Matrix s_inv = lu.inverse();
                   const Matrix v = s_inv * prop.U * d.S;
                   return v.adjoint() * (s_inv * O * d.S) * v;
                 }},
      pic);
}

double povm_success(const Vector& psi, std::span<const Matrix> ops) {
  if (std::abs(psi.squaredNorm() - 1.0) > 1e-10) {
    throw std::invalid_argument("povm_success: state vector is not normalized");
  }
  Vector v = psi;
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const Matrix& o = ops[k];
    if (o.rows() != v.size() || o.cols() != v.size()) throw ShapeError("POVM operator dimension");
    const double nrm = linalg::operator_norm(o);
    if (nrm > 1.0 + 1e-10) {
      std::ostringstream os;
      os << "operator " << k << " has norm " << nrm;
      throw OperatorNormExceedsOne(os.str());
    }
    v = o * v;
  }
  return v.squaredNorm();
}

DampingPart damping_part(const Matrix& H) {
  if (H.rows() != H.cols()) throw ShapeError("Hamiltonian must be square");
  Matrix g = Complex(0.0, 0.5) * (H - H.adjoint());
  return {0.5 * (g + g.adjoint())};
}

Matrix shift_to_nonnegative_damping(const Matrix& H) {
  const DampingPart d = damping_part(H);
  const double lmin = linalg::hermitian_eigenvalues(d.Gamma)(0);
  return H + Complex(0.0, lmin) * Matrix::Identity(H.rows(), H.cols());
}

double success_decay_rate(const Vector& psi_t, const DampingPart& damping) {
  if (damping.Gamma.rows() != psi_t.size()) throw ShapeError("damping dimension");
  return -2.0 * psi_t.dot(damping.Gamma * psi_t).real();
}

}  // namespace nhlc
