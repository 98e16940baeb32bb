#include <doctest.h>

#include <cmath>

#include "nhlc/correlators.hpp"
#include "nhlc/errors.hpp"
#include "nhlc/model.hpp"
#include "nhlc/states.hpp"
#include "support.hpp"

using namespace nhlc;
using namespace nhlc::test;

TEST_CASE("plus product state") {
  const auto shape = SubsystemShape::qubits(3);
  const auto rho = make_state(state_kind::PlusProduct{}, shape);
  for (std::size_t s = 0; s < 3; ++s) {
    CHECK(std::abs(expectation(rho.matrix(), site_operator(pauli::x(), s, shape)) - 1.0) < 1e-14);
  }
  CHECK(make_state_factor(state_kind::PlusProduct{}, shape).cols() == 1);
}

TEST_CASE("GHZ end-to-end connected correlation is one") {
  for (std::size_t n = 2; n <= 8; ++n) {
    const auto shape = SubsystemShape::qubits(n);
    const auto rho = make_state(state_kind::Ghz{}, shape);
    const Complex c = equal_time_cc(rho.matrix(), site_operator(pauli::z(), 0, shape),
                                    site_operator(pauli::z(), n - 1, shape));
    CHECK(std::abs(c - 1.0) <= 1e-12);
  }
}

TEST_CASE("local Gibbs equals global Gibbs of the summed field") {
  const auto shape = SubsystemShape::qubits(3);
  const Matrix h = -pauli::x();
  Matrix big = Matrix::Zero(8, 8);
  for (std::size_t s = 0; s < 3; ++s) big += site_operator(h, s, shape);
  const auto local = make_state(state_kind::LocalGibbs{h, 3.0}, shape);
  const auto global = make_state(state_kind::Gibbs{big, 3.0}, shape);
  CHECK(max_abs(local.matrix() - global.matrix()) < 1e-13);
  // Single-site marginal: (I + tanh β σx)/2.
  const std::vector<std::size_t> k{1};
  const auto r = reduced_state(local, k);
  CHECK(std::abs(r.matrix()(0, 1) - 0.5 * std::tanh(3.0)) < 1e-14);
}

TEST_CASE("random states are seeded and valid") {
  const auto shape = SubsystemShape::qubits(4);
  const auto a = make_state(state_kind::RandomFullRank{42}, shape);
  const auto b = make_state(state_kind::RandomFullRank{42}, shape);
  const auto c = make_state(state_kind::RandomFullRank{43}, shape);
  CHECK(max_abs(a.matrix() - b.matrix()) == 0.0);
  CHECK(max_abs(a.matrix() - c.matrix()) > 1e-3);
  const RealVector ev = linalg::hermitian_eigenvalues(a.matrix());
  CHECK(ev(0) >= full_rank_mixing(16) / 16.0 * (1 - 1e-9));
  const auto p = make_state(state_kind::RandomPure{7}, shape);
  CHECK(std::abs(p.matrix().trace() - 1.0) < 1e-14);
  CHECK(std::abs((p.matrix() * p.matrix()).trace() - 1.0) < 1e-13);
}

TEST_CASE("density state validation") {
  const auto shape = SubsystemShape::qubits(1);
  CHECK_THROWS_AS(DensityState(Matrix::Identity(2, 2), shape), PositivityFailure);
  CHECK_THROWS_AS(DensityState(pauli::y() * Complex(0, 1), shape), NotHermitian);
  Matrix neg = Matrix::Zero(2, 2);
  neg.diagonal() << 1.5, -0.5;
  CHECK_THROWS(DensityState(neg, shape));
  CHECK_THROWS_AS(DensityState(Matrix::Identity(3, 3) / 3.0, shape), ShapeError);
  CHECK_NOTHROW(DensityState(Matrix::Identity(2, 2) / 2.0, shape));
}

TEST_CASE("trace product") {
  std::mt19937_64 rng(1);
  const Matrix r = random_density(5, rng), x = random_matrix(5, rng);
  CHECK(std::abs(trace_product(r, x) - (r * x).trace()) < 1e-13);
}
