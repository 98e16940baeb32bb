#include "nhlc/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

#include "nhlc/errors.hpp"

namespace nhlc {

namespace pauli {

Matrix identity() { return Matrix::Identity(2, 2); }

Matrix x() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Matrix y() {
  Matrix m(2, 2);
  m << Complex(0.0), Complex(0.0, -1.0), Complex(0.0, 1.0), Complex(0.0);
  return m;
}

Matrix z() {
  Matrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

std::vector<Matrix> xyz() { return {x(), y(), z()}; }

}  // namespace pauli

void TfimParams::validate() const {
  if (n < 1) throw std::invalid_argument("TfimParams: n must be at least 1");
  if (n > 14) throw std::invalid_argument("TfimParams: n > 14 does not fit dense storage");
  for (double v : {J, g, h, gamma}) {
    if (!std::isfinite(v)) throw std::invalid_argument("TfimParams: couplings must be finite");
  }
}

Matrix build_hamiltonian(std::span<const LocalTerm> terms, const SubsystemShape& shape) {
  const auto d = static_cast<Eigen::Index>(shape.total_dim());
  Matrix h = Matrix::Zero(d, d);
  for (const LocalTerm& t : terms) {
    for (std::size_t k = 0; k < t.support.size(); ++k) {
      if (t.support[k] >= shape.sites()) throw ShapeError("term support out of range");
      if (k > 0 && t.support[k] <= t.support[k - 1]) {
        throw ShapeError("term support must be strictly increasing");
      }
    }
    linalg::add_embedded(h, t.coefficient, t.op, t.support, shape);
  }
  return h;
}

std::vector<LocalTerm> tfim_terms(const TfimParams& p) {
  p.validate();
  std::vector<LocalTerm> terms;
  const Matrix zz = linalg::kron(pauli::z(), pauli::z());
  for (std::size_t j = 0; j + 1 < p.n; ++j) {
    if (p.J != 0.0) terms.push_back({{j, j + 1}, zz, p.J});
  }
  for (std::size_t j = 0; j < p.n; ++j) {
    if (p.g != 0.0) terms.push_back({{j}, pauli::x(), p.g});
    if (p.h != 0.0) terms.push_back({{j}, pauli::z(), p.h});
    if (p.gamma != 0.0) terms.push_back({{j}, pauli::y(), Complex(0.0, p.gamma)});
  }
  return terms;
}

Matrix build_nh_tfim(const TfimParams& p) {
  const auto terms = tfim_terms(p);
  return build_hamiltonian(terms, SubsystemShape::qubits(p.n));
}

double QuasiHermitianModel::dyson_condition() const {
  if (std::isfinite(beta_site)) return std::exp(std::abs(beta_site) * static_cast<double>(params.n));
  return linalg::operator_norm(S) * linalg::operator_norm(S_inv);
}

QuasiHermitianModel build_quasi_hermitian(const TfimParams& p) {
  p.validate();
  double beta = 0.0;
  double g0 = p.g;
  if (p.gamma != 0.0) {
    if (std::abs(p.gamma) >= std::abs(p.g)) {
      std::ostringstream os;
      os << "|gamma| = " << std::abs(p.gamma) << " >= |g| = " << std::abs(p.g)
         << " (exceptional point or broken phase)";
      throw PTBroken(os.str());
    }
    const double x = p.gamma / p.g;
    beta = std::atanh(x);
    g0 = p.g * std::sqrt((1.0 - x) * (1.0 + x));
  }

  QuasiHermitianModel m;
  m.params = p;
  m.shape = SubsystemShape::qubits(p.n);
  m.beta_site = beta;
  m.H = build_nh_tfim(p);
  TfimParams hp = p;
  hp.g = g0;
  hp.gamma = 0.0;
  m.H0 = build_nh_tfim(hp);

  const auto d = static_cast<Eigen::Index>(m.shape.total_dim());
  Vector s_diag(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    // σ^z eigenvalue +1 for bit 0, −1 for bit 1; count ones across all sites.
    const int ones = std::popcount(static_cast<unsigned long long>(i));
    const int mz = static_cast<int>(p.n) - 2 * ones;
    s_diag(i) = std::exp(0.5 * beta * mz);
  }
  m.S = s_diag.asDiagonal();
  m.S_inv = s_diag.cwiseInverse().asDiagonal();
  m.eta = s_diag.array().square().inverse().matrix().asDiagonal();
  m.eta_inv = s_diag.array().square().matrix().asDiagonal();
  return m;
}

QuasiHermitianModel quasi_hermitian_from_metric(const Matrix& H, const Matrix& eta,
                                                const SubsystemShape& shape) {
  if (H.rows() != H.cols() || eta.rows() != H.rows() || eta.cols() != H.cols() ||
      static_cast<std::size_t>(H.rows()) != shape.total_dim()) {
    throw ShapeError("H, eta and shape dimensions disagree");
  }
  const auto roots = linalg::psd_sqrt_and_inverse(eta);
  QuasiHermitianModel m;
  m.params.n = shape.sites();
  m.params.J = m.params.g = m.params.h = std::numeric_limits<double>::quiet_NaN();
  m.params.gamma = std::numeric_limits<double>::quiet_NaN();
  m.shape = shape;
  m.H = H;
  m.eta = 0.5 * (eta + eta.adjoint());
  m.S = roots.inv_sqrt;
  m.S_inv = roots.sqrt;
  m.eta_inv = roots.inv_sqrt * roots.inv_sqrt;
  m.H0 = m.S_inv * H * m.S;
  if (!linalg::is_hermitian(m.H0, 1e-8)) {
    throw NotHermitian("S^-1 H S is not Hermitian for the supplied metric");
  }
  m.H0 = 0.5 * (m.H0 + m.H0.adjoint());
  m.beta_site = std::numeric_limits<double>::quiet_NaN();
  return m;
}

double verify_pseudo_hermitian(const Matrix& H, const Matrix& eta) {
  if (H.rows() != H.cols() || eta.rows() != H.rows() || eta.cols() != H.cols()) {
    throw ShapeError("verify_pseudo_hermitian: dimension mismatch");
  }
  const double scale = H.norm() * eta.norm();
  if (scale == 0.0) return 0.0;
  return (H.adjoint() * eta - eta * H).norm() / scale;
}

double dyson_residual(const QuasiHermitianModel& m) {
  const double scale = m.H.norm();
  const double r = (m.S * m.H0 * m.S_inv - m.H).norm();
  return scale == 0.0 ? r : r / scale;
}

Matrix site_operator(const Matrix& op, std::size_t site, const SubsystemShape& shape) {
  const std::size_t s[] = {site};
  return linalg::embed_operator(op, s, shape);
}

std::size_t site_distance(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (std::size_t i : a) {
    for (std::size_t j : b) best = std::min(best, i > j ? i - j : j - i);
  }
  return best;
}

}  // namespace nhlc
