#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "nhlc/errors.hpp"
#include "nhlc/model.hpp"
#include "support.hpp"

using namespace nhlc;
using namespace nhlc::test;

namespace {

// The chain Hamiltonian assembled term by term from explicit Kronecker products.
Matrix tfim_oracle(const TfimParams& p) {
  const auto n = p.n;
  const Eigen::Index d = Eigen::Index{1} << n;
  const Matrix I = Matrix::Identity(2, 2);
  auto op_at = [&](std::vector<std::pair<std::size_t, Matrix>> ops) {
    std::vector<Matrix> fs(n, I);
    for (auto& [s, m] : ops) fs[s] = m;
    return kron_list(fs);
  };
  Matrix h = Matrix::Zero(d, d);
  for (std::size_t j = 0; j + 1 < n; ++j) h += p.J * op_at({{j, pauli::z()}, {j + 1, pauli::z()}});
  for (std::size_t j = 0; j < n; ++j) {
    h += p.g * op_at({{j, pauli::x()}}) + p.h * op_at({{j, pauli::z()}}) +
         Complex(0, p.gamma) * op_at({{j, pauli::y()}});
  }
  return h;
}

std::vector<Complex> sorted_eigs(const Matrix& m) {
  Eigen::ComplexEigenSolver<Matrix> es(m);
  std::vector<Complex> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(v.begin(), v.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
  return v;
}

}  // namespace

TEST_CASE("Pauli matrices") {
  CHECK(max_abs(pauli::x() * pauli::y() - Complex(0, 1) * pauli::z()) < 1e-16);
  CHECK(pauli::xyz().size() == 3);
}

TEST_CASE("single-site NH TFIM matrix") {
  TfimParams p;
  p.n = 1;
  p.h = 0.0;
  p.gamma = 0.5;
  Matrix expect(2, 2);
  expect << 0, 1.5, 0.5, 0;
  CHECK(max_abs(build_nh_tfim(p) - expect) < 1e-16);
}

TEST_CASE("chain Hamiltonian matches term-by-term oracle") {
  for (std::size_t n : {1u, 2u, 3u, 5u}) {
    TfimParams p;
    p.n = n;
    p.gamma = 0.37;
    CHECK(max_abs(build_nh_tfim(p) - tfim_oracle(p)) < 1e-13);
  }
}

TEST_CASE("Dyson map constants at gamma = 0.6") {
  TfimParams p;
  p.n = 1;
  p.gamma = 0.6;
  const auto m = build_quasi_hermitian(p);
  CHECK(m.beta_site == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  // H0 on one site: g0 σx + h σz with g0 = 0.8.
  CHECK(std::abs(m.H0(0, 1) - 0.8) < 1e-14);
  CHECK(std::abs(m.H0(0, 0) - 0.5) < 1e-14);
  CHECK(m.dyson_condition() == doctest::Approx(2.0));
}

TEST_CASE("pseudo-Hermiticity and Dyson decomposition over the parameter grid") {
  for (double gamma : {0.3, 0.6, 0.9}) {
    for (std::size_t n = 2; n <= 6; ++n) {
      TfimParams p;
      p.n = n;
      p.gamma = gamma;
      const auto m = build_quasi_hermitian(p);
      CHECK(verify_pseudo_hermitian(m.H, m.eta) <= 1e-12);
      CHECK(dyson_residual(m) <= 1e-9);
      CHECK(linalg::is_hermitian(m.H0, 1e-12));
      CHECK(max_abs(m.eta * m.eta_inv - Matrix::Identity(m.H.rows(), m.H.rows())) < 1e-10);
      if (n <= 4) {
        const auto eh = sorted_eigs(m.H);
        const RealVector e0 = linalg::hermitian_eigenvalues(m.H0);
        for (std::size_t k = 0; k < eh.size(); ++k) {
          CHECK(std::abs(eh[k] - e0(static_cast<Eigen::Index>(k))) < 1e-8);
        }
      }
    }
  }
}

TEST_CASE("dyson condition grows as e^{|beta| n}") {
  TfimParams p;
  p.n = 4;
  p.gamma = 0.6;
  const auto m = build_quasi_hermitian(p);
  const double svd_cond = linalg::operator_norm(m.S) * linalg::operator_norm(m.S_inv);
  CHECK(m.dyson_condition() == doctest::Approx(svd_cond).epsilon(1e-12));
  CHECK(m.dyson_condition() == doctest::Approx(16.0).epsilon(1e-12));
}

TEST_CASE("PT breaking and parameter validation") {
  TfimParams p;
  p.n = 3;
  p.gamma = 1.0;
  CHECK_THROWS_AS(build_quasi_hermitian(p), PTBroken);
  p.gamma = -1.2;
  CHECK_THROWS_AS(build_quasi_hermitian(p), PTBroken);
  p.gamma = 0.2;
  p.n = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.n = 3;
  p.J = std::nan("");
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("generic metric decomposition") {
  TfimParams p;
  p.n = 3;
  p.gamma = 0.45;
  const auto ref = build_quasi_hermitian(p);
  const auto m = quasi_hermitian_from_metric(ref.H, ref.eta, ref.shape);
  CHECK(dyson_residual(m) < 1e-10);
  CHECK(max_abs(m.H0 - ref.H0) < 1e-10);
  CHECK(m.dyson_condition() == doctest::Approx(ref.dyson_condition()).epsilon(1e-10));
  // The identity is not a metric for a non-Hermitian H.
  CHECK_THROWS_AS(quasi_hermitian_from_metric(ref.H, Matrix::Identity(8, 8), ref.shape), NotHermitian);
  CHECK(verify_pseudo_hermitian(ref.H, Matrix::Identity(8, 8)) > 1e-3);
}

TEST_CASE("site distance on the open chain") {
  const std::vector<std::size_t> a{0, 1}, b{4, 7};
  CHECK(site_distance(a, b) == 3);
  CHECK(site_distance(b, a) == 3);
}
