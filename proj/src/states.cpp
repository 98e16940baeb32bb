#include "nhlc/states.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "nhlc/errors.hpp"

namespace nhlc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  // Fill column by column so the stream order does not depend on storage details.
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

// Spectral factor of a Hermitian PSD matrix: V·diag(√p).
Matrix psd_factor(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()));
  Matrix f = es.eigenvectors();
  for (Eigen::Index k = 0; k < f.cols(); ++k) {
    f.col(k) *= std::sqrt(std::max(0.0, es.eigenvalues()(k)));
  }
  return f;
}

Matrix gibbs_matrix(const Matrix& h, double beta) {
  if (!linalg::is_hermitian(h)) throw NotHermitian("Gibbs state needs a Hermitian H'");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
  const RealVector& e = es.eigenvalues();
  const double shift = e.size() ? e.minCoeff() : 0.0;
  RealVector w = (-beta * (e.array() - shift)).exp();
  w /= w.sum();
  return es.eigenvectors() * w.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

DensityState::DensityState(Matrix m, SubsystemShape shape) : m_(std::move(m)), shape_(std::move(shape)) {
  if (m_.rows() != m_.cols() || static_cast<std::size_t>(m_.rows()) != shape_.total_dim()) {
    throw ShapeError("density matrix dimension does not match its subsystem shape");
  }
  if (!m_.allFinite()) throw NumericalError("density matrix has non-finite entries");
  if (!linalg::is_hermitian(m_)) throw NotHermitian("density matrix");
  const Complex tr = m_.trace();
  if (std::abs(tr - 1.0) > 1e-10) {
    std::ostringstream os;
    os << "density matrix trace " << tr.real() << (tr.imag() < 0 ? "-" : "+") << std::abs(tr.imag())
       << "i differs from 1";
    throw PositivityFailure(os.str());
  }
  m_ = 0.5 * (m_ + m_.adjoint());
  const double lmin = linalg::hermitian_eigenvalues(m_)(0);
  if (lmin < -1e-10) {
    std::ostringstream os;
    os << "density matrix has eigenvalue " << lmin;
    throw PositivityFailure(os.str());
  }
}

std::string state_kind_name(const StateKind& kind) {
  return std::visit(overloaded{[](const state_kind::PlusProduct&) { return std::string("plus_product"); },
                               [](const state_kind::Ghz&) { return std::string("ghz"); },
                               [](const state_kind::Gibbs&) { return std::string("gibbs"); },
                               [](const state_kind::LocalGibbs&) { return std::string("local_gibbs"); },
                               [](const state_kind::RandomPure&) { return std::string("random_pure"); },
                               [](const state_kind::RandomFullRank&) {
                                 return std::string("random_full_rank");
                               }},
                    kind);
}

double full_rank_mixing(std::size_t d) {
  return std::min(1.0, std::max(1e-3, 1e-4 * static_cast<double>(d)));
}

Matrix make_state_factor(const StateKind& kind, const SubsystemShape& shape) {
  const auto d = static_cast<Eigen::Index>(shape.total_dim());
  return std::visit(
      overloaded{
          [&](const state_kind::PlusProduct&) -> Matrix {
            for (std::size_t k : shape.dims) {
              if (k != 2) throw ShapeError("plus_product needs qubit sites");
            }
            return Matrix::Constant(d, 1, 1.0 / std::sqrt(static_cast<double>(d)));
          },
          [&](const state_kind::Ghz&) -> Matrix {
            const std::size_t local = shape.dims.empty() ? 1 : shape.dims[0];
            for (std::size_t k : shape.dims) {
              if (k != local) throw ShapeError("ghz needs equal local dimensions");
            }
            // Σ_k |k k ... k⟩ / √local
            Matrix f = Matrix::Zero(d, 1);
            std::size_t all_ones = 0;
            for (std::size_t s = 0; s < shape.sites(); ++s) all_ones += shape.stride(s);
            for (std::size_t k = 0; k < local; ++k) {
              f(static_cast<Eigen::Index>(k * all_ones), 0) = 1.0 / std::sqrt(static_cast<double>(local));
            }
            return f;
          },
          [&](const state_kind::Gibbs& g) -> Matrix {
            if (g.H.rows() != d || g.H.cols() != d) throw ShapeError("Gibbs H' has wrong dimension");
            return psd_factor(gibbs_matrix(g.H, g.beta));
          },
          [&](const state_kind::LocalGibbs& g) -> Matrix {
            Matrix f = Matrix::Identity(1, 1);
            for (std::size_t k : shape.dims) {
              if (static_cast<std::size_t>(g.h.rows()) != k || g.h.cols() != g.h.rows()) {
                throw ShapeError("local Gibbs h does not match the site dimension");
              }
              f = linalg::kron(f, psd_factor(gibbs_matrix(g.h, g.beta)));
            }
            return f;
          },
          [&](const state_kind::RandomPure& r) -> Matrix {
            Matrix v = gaussian_matrix(d, 1, r.seed);
            return v / v.norm();
          },
          [&](const state_kind::RandomFullRank& r) -> Matrix {
            const Matrix g = gaussian_matrix(d, d, r.seed);
            const double eps = full_rank_mixing(static_cast<std::size_t>(d));
            // [√(1−ε)·G†/‖G‖_F , √(ε/d)·I] F† reproduces the mixture exactly.
            Matrix f(d, 2 * d);
            f.leftCols(d) = std::sqrt(1.0 - eps) * g.adjoint() / g.norm();
            f.rightCols(d) = std::sqrt(eps / static_cast<double>(d)) * Matrix::Identity(d, d);
            return f;
          }},
      kind);
}

DensityState make_state(const StateKind& kind, const SubsystemShape& shape) {
  const Matrix f = make_state_factor(kind, shape);
  Matrix rho = f * f.adjoint();
  rho /= rho.trace();
  return DensityState(std::move(rho), shape);
}

DensityState reduced_state(const DensityState& rho, std::span<const std::size_t> keep) {
  if (keep.empty()) throw ShapeError("reduced_state needs at least one kept site");
  std::vector<std::size_t> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  Matrix r = linalg::partial_trace(rho.matrix(), rho.shape(), kept);
  SubsystemShape sub;
  for (std::size_t s : kept) sub.dims.push_back(rho.shape().dims[s]);
  r /= r.trace();
  return DensityState(std::move(r), std::move(sub));
}

Complex trace_product(const Matrix& rho, const Matrix& x) {
  if (rho.cols() != x.rows() || rho.rows() != x.cols()) throw ShapeError("trace_product dimensions");
  return rho.transpose().cwiseProduct(x).sum();
}

}  // namespace nhlc
