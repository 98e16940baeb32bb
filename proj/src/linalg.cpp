#include "nhlc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "nhlc/errors.hpp"

namespace nhlc {

std::size_t SubsystemShape::total_dim() const {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

std::size_t SubsystemShape::dim_of(std::span<const std::size_t> subset) const {
  std::size_t d = 1;
  for (std::size_t s : subset) {
    if (s >= dims.size()) throw ShapeError("site " + std::to_string(s) + " out of range");
    d *= dims[s];
  }
  return d;
}

std::size_t SubsystemShape::stride(std::size_t site) const {
  std::size_t st = 1;
  for (std::size_t r = site + 1; r < dims.size(); ++r) st *= dims[r];
  return st;
}

std::vector<std::size_t> SubsystemShape::complement(std::span<const std::size_t> subset) const {
  std::vector<std::size_t> rest;
  for (std::size_t s = 0; s < dims.size(); ++s) {
    if (std::find(subset.begin(), subset.end(), s) == subset.end()) rest.push_back(s);
  }
  return rest;
}

SiteIndexMap::SiteIndexMap(const SubsystemShape& shape, std::span<const std::size_t> sites) {
  std::vector<std::size_t> seen;
  for (std::size_t s : sites) {
    if (s >= shape.sites()) throw ShapeError("site " + std::to_string(s) + " out of range");
    if (std::find(seen.begin(), seen.end(), s) != seen.end()) {
      throw ShapeError("site " + std::to_string(s) + " listed twice");
    }
    seen.push_back(s);
  }
  offsets_.assign(1, 0);
  for (std::size_t s : sites) {
    const std::size_t d = shape.dims[s];
    const std::size_t st = shape.stride(s);
    std::vector<std::size_t> next;
    next.reserve(offsets_.size() * d);
    for (std::size_t base : offsets_) {
      for (std::size_t a = 0; a < d; ++a) next.push_back(base + a * st);
    }
    offsets_ = std::move(next);
  }
}

namespace linalg {

namespace {

void require_square(const Matrix& m, const char* op) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << op << " needs a square matrix, got " << m.rows() << "x" << m.cols();
    throw ShapeError(os.str());
  }
}

void require_shape(const Matrix& m, const SubsystemShape& shape, const char* op) {
  require_square(m, op);
  if (static_cast<std::size_t>(m.rows()) != shape.total_dim()) {
    std::ostringstream os;
    os << op << ": matrix dimension " << m.rows() << " does not match subsystem shape of dimension "
       << shape.total_dim();
    throw ShapeError(os.str());
  }
}

std::vector<std::size_t> sorted_unique(std::span<const std::size_t> s) {
  std::vector<std::size_t> v(s.begin(), s.end());
  std::sort(v.begin(), v.end());
  if (std::adjacent_find(v.begin(), v.end()) != v.end()) throw ShapeError("repeated site index");
  return v;
}

// Lower bound on the operator norm: the largest column 2-norm.
double operator_norm_lower_bound(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.colwise().norm().maxCoeff();
}

}  // namespace

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix kron_all(std::span<const Matrix> factors) {
  Matrix out = Matrix::Identity(1, 1);
  for (const Matrix& f : factors) out = kron(out, f);
  return out;
}

Matrix partial_trace(const Matrix& m, const SubsystemShape& shape, std::span<const std::size_t> keep) {
  require_shape(m, shape, "partial_trace");
  const auto kept = sorted_unique(keep);
  const auto traced = shape.complement(kept);
  const SiteIndexMap k_map(shape, kept);
  const SiteIndexMap t_map(shape, traced);
  const auto dk = static_cast<Eigen::Index>(k_map.dim());
  Matrix out = Matrix::Zero(dk, dk);
  for (Eigen::Index j = 0; j < dk; ++j) {
    for (Eigen::Index i = 0; i < dk; ++i) {
      Complex acc = 0.0;
      for (std::size_t r : t_map.offsets()) {
        acc += m(static_cast<Eigen::Index>(k_map[i] + r), static_cast<Eigen::Index>(k_map[j] + r));
      }
      out(i, j) = acc;
    }
  }
  return out;
}

void add_embedded(Matrix& target, Complex coefficient, const Matrix& op,
                  std::span<const std::size_t> support, const SubsystemShape& shape) {
  require_shape(target, shape, "add_embedded");
  const std::vector<std::size_t> sup(support.begin(), support.end());
  if (!std::is_sorted(sup.begin(), sup.end())) throw ShapeError("support must be ascending");
  const SiteIndexMap s_map(shape, sup);
  if (static_cast<std::size_t>(op.rows()) != s_map.dim() || op.cols() != op.rows()) {
    throw ShapeError("operator dimension does not match its support");
  }
  const SiteIndexMap r_map(shape, shape.complement(sup));
  for (Eigen::Index b = 0; b < op.cols(); ++b) {
    for (Eigen::Index a = 0; a < op.rows(); ++a) {
      const Complex v = coefficient * op(a, b);
      if (v == Complex(0.0)) continue;
      for (std::size_t r : r_map.offsets()) {
        target(static_cast<Eigen::Index>(s_map[a] + r), static_cast<Eigen::Index>(s_map[b] + r)) += v;
      }
    }
  }
}

Matrix embed_operator(const Matrix& op, std::span<const std::size_t> support,
                      const SubsystemShape& shape) {
  const auto d = static_cast<Eigen::Index>(shape.total_dim());
  Matrix out = Matrix::Zero(d, d);
  add_embedded(out, 1.0, op, support, shape);
  return out;
}

Matrix embed_product(const Matrix& a, std::span<const std::size_t> sites_a, const Matrix& b,
                     std::span<const std::size_t> sites_b, const SubsystemShape& shape) {
  const SiteIndexMap a_map(shape, sites_a);
  const SiteIndexMap b_map(shape, sites_b);
  if (a_map.dim() * b_map.dim() != shape.total_dim()) {
    throw ShapeError("embed_product: site sets must cover the shape");
  }
  if (static_cast<std::size_t>(a.rows()) != a_map.dim() ||
      static_cast<std::size_t>(b.rows()) != b_map.dim()) {
    throw ShapeError("embed_product: factor dimension mismatch");
  }
  const auto d = static_cast<Eigen::Index>(shape.total_dim());
  Matrix out(d, d);
  for (Eigen::Index ja = 0; ja < a.cols(); ++ja) {
    for (Eigen::Index jb = 0; jb < b.cols(); ++jb) {
      const auto col = static_cast<Eigen::Index>(a_map[ja] + b_map[jb]);
      for (Eigen::Index ia = 0; ia < a.rows(); ++ia) {
        const Complex aval = a(ia, ja);
        for (Eigen::Index ib = 0; ib < b.rows(); ++ib) {
          out(static_cast<Eigen::Index>(a_map[ia] + b_map[ib]), col) = aval * b(ib, jb);
        }
      }
    }
  }
  return out;
}

Matrix apply_site_operator(const Matrix& op, std::size_t site, const SubsystemShape& shape,
                           const Matrix& block) {
  if (site >= shape.sites()) throw ShapeError("site out of range");
  const auto d = static_cast<Eigen::Index>(shape.dims[site]);
  if (op.rows() != d || op.cols() != d) throw ShapeError("site operator has wrong dimension");
  if (static_cast<std::size_t>(block.rows()) != shape.total_dim()) throw ShapeError("block dimension");
  const auto st = static_cast<Eigen::Index>(shape.stride(site));
  const Eigen::Index span = st * d;
  Matrix out = Matrix::Zero(block.rows(), block.cols());
  for (Eigen::Index base = 0; base < block.rows(); base += span) {
    for (Eigen::Index a = 0; a < d; ++a) {
      for (Eigen::Index b = 0; b < d; ++b) {
        const Complex c = op(a, b);
        if (c == Complex(0.0)) continue;
        out.middleRows(base + a * st, st) += c * block.middleRows(base + b * st, st);
      }
    }
  }
  return out;
}

Vector apply_site_operator(const Matrix& op, std::size_t site, const SubsystemShape& shape,
                           const Vector& v) {
  return apply_site_operator(op, site, shape, Matrix(v)).col(0);
}

bool is_diagonal(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i != j && m(i, j) != Complex(0.0)) return false;
    }
  }
  return true;
}

bool is_hermitian(const Matrix& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  // ‖D‖_op ≤ ‖D‖_F and ‖m‖_op ≥ max column norm, so this implies the operator-norm test.
  const double defect = (m - m.adjoint()).norm();
  return defect <= rel_tol * operator_norm_lower_bound(m) || defect == 0.0;
}

Matrix matrix_exponential(const Matrix& m) {
  require_square(m, "matrix_exponential");
  if (m.size() == 0) return m;
  if (is_diagonal(m)) {
    return m.diagonal().array().exp().matrix().asDiagonal();
  }
  if (is_hermitian(m)) {
    const Matrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const Vector phases = es.eigenvalues().array().exp().cast<Complex>();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  }
  const Matrix k = Complex(0.0, -1.0) * m;  // m = i·k
  if (is_hermitian(k)) {
    const Matrix h = 0.5 * (k + k.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Vector phases(h.rows());
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
      phases(i) = std::exp(Complex(0.0, es.eigenvalues()(i)));
    }
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  }
  return m.exp();
}

SvdResult svd(const Matrix& m) {
  Eigen::BDCSVD<Matrix> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {dec.matrixU(), dec.singularValues(), dec.matrixV().adjoint()};
}

RealVector singular_values(const Matrix& m) {
  if (m.size() == 0) return RealVector();
  if (is_diagonal(m)) {
    RealVector s = m.diagonal().cwiseAbs();
    std::sort(s.data(), s.data() + s.size(), std::greater<>());
    return s;
  }
  Eigen::BDCSVD<Matrix> dec(m);
  return dec.singularValues();
}

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m)(0);
}

double hs_norm(const Matrix& m) { return m.norm(); }

Norms norms(const Matrix& m) { return {operator_norm(m), hs_norm(m)}; }

RealVector hermitian_eigenvalues(const Matrix& m) {
  require_square(m, "hermitian_eigenvalues");
  if (!is_hermitian(m)) throw NotHermitian("matrix is not Hermitian");
  const Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Matrix hermitian_log(const Matrix& m, double floor) {
  require_square(m, "hermitian_log");
  if (!is_hermitian(m)) throw NotHermitian("hermitian_log of a non-Hermitian matrix");
  const Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const RealVector& ev = es.eigenvalues();
  if (ev.size() > 0 && ev(0) <= floor) {
    std::ostringstream os;
    os << "smallest eigenvalue " << ev(0) << " is not above the floor " << floor;
    throw NotFullRank(os.str());
  }
  const Vector logs = ev.array().log().cast<Complex>();
  return es.eigenvectors() * logs.asDiagonal() * es.eigenvectors().adjoint();
}

PsdSqrt psd_sqrt_and_inverse(const Matrix& m) {
  require_square(m, "psd_sqrt_and_inverse");
  if (!is_hermitian(m)) throw NotPositiveDefinite("matrix is not Hermitian");
  const Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const RealVector& ev = es.eigenvalues();
  if (ev.size() > 0 && ev(0) <= 1e-14 * std::max(1.0, std::abs(ev(ev.size() - 1)))) {
    std::ostringstream os;
    os << "smallest eigenvalue " << ev(0);
    throw NotPositiveDefinite(os.str());
  }
  const Vector root = ev.array().sqrt().cast<Complex>();
  const Vector inv_root = ev.array().rsqrt().cast<Complex>();
  const Matrix& v = es.eigenvectors();
  return {v * root.asDiagonal() * v.adjoint(), v * inv_root.asDiagonal() * v.adjoint()};
}

}  // namespace linalg
}  // namespace nhlc
