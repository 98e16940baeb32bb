#pragma once

#include <cstdint>
#include <random>

#include "nhlc/linalg.hpp"
#include "nhlc/states.hpp"

namespace nhlc::test {

inline Matrix random_matrix(Eigen::Index d, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Matrix m(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) m(i, j) = Complex(n(rng), n(rng));
  return m;
}

inline Matrix random_hermitian(Eigen::Index d, std::mt19937_64& rng) {
  Matrix m = random_matrix(d, rng);
  return 0.5 * (m + m.adjoint());
}

// Full-rank density matrix G G† / Tr + small identity admixture.
inline Matrix random_density(Eigen::Index d, std::mt19937_64& rng, double mix = 0.05) {
  Matrix g = random_matrix(d, rng);
  Matrix r = g * g.adjoint();
  r /= r.trace().real();
  return (1.0 - mix) * r + mix * Matrix::Identity(d, d) / static_cast<double>(d);
}

inline Vector random_unit_vector(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = Complex(n(rng), n(rng));
  return v / v.norm();
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// e^m by scaling, a long Taylor series, and squaring. Deliberately naive.
inline Matrix taylor_exp(const Matrix& m) {
  int k = 0;
  double nrm = m.cwiseAbs().rowwise().sum().maxCoeff();
  while (nrm > 0.1) {
    nrm /= 2.0;
    ++k;
  }
  const Matrix a = m / std::pow(2.0, k);
  Matrix term = Matrix::Identity(m.rows(), m.cols());
  Matrix sum = term;
  for (int j = 1; j < 30; ++j) {
    term = term * a / static_cast<double>(j);
    sum += term;
  }
  for (int i = 0; i < k; ++i) sum = sum * sum;
  return sum;
}

// Dense Kronecker product of a list, written out with explicit index arithmetic.
inline Matrix kron_list(const std::vector<Matrix>& fs) {
  Matrix out = Matrix::Ones(1, 1);
  for (const Matrix& f : fs) {
    Matrix next(out.rows() * f.rows(), out.cols() * f.cols());
    for (Eigen::Index i = 0; i < out.rows(); ++i)
      for (Eigen::Index j = 0; j < out.cols(); ++j)
        for (Eigen::Index k = 0; k < f.rows(); ++k)
          for (Eigen::Index l = 0; l < f.cols(); ++l)
            next(i * f.rows() + k, j * f.cols() + l) = out(i, j) * f(k, l);
    out = next;
  }
  return out;
}

}  // namespace nhlc::test
