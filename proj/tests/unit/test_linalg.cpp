#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nhlc/errors.hpp"
#include "nhlc/linalg.hpp"
#include "nhlc/model.hpp"
#include "support.hpp"

using namespace nhlc;
using namespace nhlc::test;

TEST_CASE("kron of two sigma_z is diag(1,-1,-1,1)") {
  const Matrix zz = linalg::kron(pauli::z(), pauli::z());
  Matrix expect = Matrix::Zero(4, 4);
  expect.diagonal() << 1, -1, -1, 1;
  CHECK(max_abs(zz - expect) == 0.0);
}

TEST_CASE("kron_all matches explicit index products on mixed dimensions") {
  std::mt19937_64 rng(3);
  std::vector<Matrix> fs{random_matrix(2, rng), random_matrix(3, rng), random_matrix(2, rng)};
  CHECK(max_abs(linalg::kron_all(fs) - kron_list(fs)) < 1e-13);
}

TEST_CASE("partial trace of a Bell state is maximally mixed") {
  Vector bell = Vector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const Matrix rho = bell * bell.adjoint();
  const auto shape = SubsystemShape::qubits(2);
  for (std::size_t keep : {0u, 1u}) {
    const std::vector<std::size_t> k{keep};
    CHECK(max_abs(linalg::partial_trace(rho, shape, k) - 0.5 * Matrix::Identity(2, 2)) < 1e-15);
  }
}

TEST_CASE("partial trace of a product recovers the factor, any site order") {
  std::mt19937_64 rng(5);
  const Matrix a = random_density(2, rng), b = random_density(3, rng), c = random_density(2, rng);
  const SubsystemShape shape{{2, 3, 2}};
  const Matrix rho = kron_list({a, b, c});
  const std::vector<std::size_t> k1{1};
  CHECK(max_abs(linalg::partial_trace(rho, shape, k1) - b) < 1e-14);
  const std::vector<std::size_t> k02{0, 2};
  CHECK(max_abs(linalg::partial_trace(rho, shape, k02) - kron_list({a, c})) < 1e-14);
  const std::vector<std::size_t> none{};
  CHECK(std::abs(linalg::partial_trace(rho, shape, none)(0, 0) - 1.0) < 1e-14);
}

TEST_CASE("embedding and site application agree with Kronecker products") {
  std::mt19937_64 rng(7);
  const SubsystemShape shape{{2, 3, 2}};
  const Matrix op = random_matrix(3, rng);
  const std::vector<std::size_t> s{1};
  const Matrix full = kron_list({Matrix::Identity(2, 2), op, Matrix::Identity(2, 2)});
  CHECK(max_abs(linalg::embed_operator(op, s, shape) - full) < 1e-14);
  const Matrix two = random_matrix(4, rng);
  const std::vector<std::size_t> s02{0, 2};
  // op on sites {0, 2}: check against permuted action on basis vectors.
  const Matrix e02 = linalg::embed_operator(two, s02, shape);
  for (int i0 = 0; i0 < 2; ++i0)
    for (int i1 = 0; i1 < 3; ++i1)
      for (int i2 = 0; i2 < 2; ++i2)
        for (int j0 = 0; j0 < 2; ++j0)
          for (int j2 = 0; j2 < 2; ++j2)
            CHECK(std::abs(e02(i0 * 6 + i1 * 2 + i2, j0 * 6 + i1 * 2 + j2) - two(i0 * 2 + i2, j0 * 2 + j2)) <
                  1e-14);
  const Matrix block = random_matrix(12, rng).leftCols(5);
  const Matrix a2 = random_matrix(2, rng);
  CHECK(max_abs(linalg::apply_site_operator(a2, 2, shape, block) -
                kron_list({Matrix::Identity(6, 6), a2}) * block) < 1e-13);
  const Vector v = random_unit_vector(12, rng);
  CHECK((linalg::apply_site_operator(a2, 0, shape, v) - kron_list({a2, Matrix::Identity(6, 6)}) * v).norm() <
        1e-13);
}

TEST_CASE("embed_product places factors on interleaved sites") {
  std::mt19937_64 rng(9);
  const auto shape = SubsystemShape::qubits(3);
  const Matrix a = random_matrix(4, rng), b = random_matrix(2, rng);
  const std::vector<std::size_t> sa{0, 1}, sb{2};
  CHECK(max_abs(linalg::embed_product(a, sa, b, sb, shape) - kron_list({a, b})) < 1e-13);
}

TEST_CASE("matrix exponential") {
  SUBCASE("rotation by pi/2 about x") {
    const Matrix u = linalg::matrix_exponential(Complex(0, -std::numbers::pi / 2) * pauli::x());
    CHECK(max_abs(u - Complex(0, -1) * pauli::x()) < 1e-14);
  }
  SUBCASE("non-normal input against a Taylor series") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 5; ++k) {
      const Matrix m = random_matrix(6, rng, 0.8);
      const Matrix e = linalg::matrix_exponential(m);
      CHECK(max_abs(e - taylor_exp(m)) / max_abs(e) < 1e-11);
    }
  }
  SUBCASE("Hermitian input against a Taylor series") {
    std::mt19937_64 rng(12);
    const Matrix h = random_hermitian(5, rng);
    CHECK(max_abs(linalg::matrix_exponential(Complex(0, -0.7) * h) - taylor_exp(Complex(0, -0.7) * h)) < 1e-12);
  }
  SUBCASE("diagonal") {
    Matrix d = Matrix::Zero(3, 3);
    d.diagonal() << 1.0, Complex(0, 2), -3.0;
    const Matrix e = linalg::matrix_exponential(d);
    CHECK(std::abs(e(1, 1) - std::exp(Complex(0, 2))) < 1e-15);
    CHECK(std::abs(e(2, 2) - std::exp(-3.0)) < 1e-15);
  }
}

TEST_CASE("singular values and norms") {
  Matrix d = Matrix::Zero(2, 2);
  d.diagonal() << 3.0, -4.0;
  const auto s = linalg::svd(d);
  CHECK(s.singular_values(0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(s.singular_values(1) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(max_abs(s.u * s.singular_values.cast<Complex>().asDiagonal() * s.v_adjoint - d) < 1e-14);
  const auto nx = linalg::norms(pauli::x());
  CHECK(nx.operator_norm == doctest::Approx(1.0));
  CHECK(nx.hilbert_schmidt_norm == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("hermiticity test and Hermitian spectral helpers") {
  std::mt19937_64 rng(13);
  const Matrix h = random_hermitian(4, rng);
  CHECK(linalg::is_hermitian(h));
  CHECK_FALSE(linalg::is_hermitian(random_matrix(4, rng)));
  CHECK_THROWS_AS(linalg::hermitian_eigenvalues(random_matrix(4, rng)), NotHermitian);

  const Matrix p = random_density(4, rng, 0.3);
  const Matrix lg = linalg::hermitian_log(p);
  CHECK(max_abs(linalg::matrix_exponential(lg) - p) < 1e-13);
  const auto r = linalg::psd_sqrt_and_inverse(p);
  CHECK(max_abs(r.sqrt * r.sqrt - p) < 1e-13);
  CHECK(max_abs(r.sqrt * r.inv_sqrt - Matrix::Identity(4, 4)) < 1e-11);
  Matrix sing = Matrix::Zero(2, 2);
  sing(0, 0) = 1.0;
  CHECK_THROWS_AS(linalg::hermitian_log(sing), NotFullRank);
  CHECK_THROWS_AS(linalg::psd_sqrt_and_inverse(-Matrix::Identity(2, 2)), NotPositiveDefinite);
  CHECK(linalg::is_diagonal(Matrix::Identity(3, 3)));
  CHECK_FALSE(linalg::is_diagonal(pauli::x()));
}

TEST_CASE("shape errors") {
  const auto shape = SubsystemShape::qubits(2);
  const std::vector<std::size_t> bad{2};
  CHECK_THROWS_AS(linalg::partial_trace(Matrix::Identity(4, 4), shape, bad), ShapeError);
  const std::vector<std::size_t> s0{0};
  CHECK_THROWS_AS(linalg::partial_trace(Matrix::Identity(3, 3), shape, s0), ShapeError);
}
