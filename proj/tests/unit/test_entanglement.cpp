#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nhlc/correlators.hpp"
#include "nhlc/entanglement.hpp"
#include "nhlc/errors.hpp"
#include "nhlc/evolution.hpp"
#include "support.hpp"

using namespace nhlc;
using namespace nhlc::test;

namespace {

DensityState bell() {
  Vector v = Vector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return DensityState(v * v.adjoint(), SubsystemShape::qubits(2));
}

// Smallest eigenvalue of the partial transpose on the second qubit of a two-qubit matrix.
double min_partial_transpose_eig(const Matrix& r) {
  Matrix pt(4, 4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) pt(a * 2 + b, c * 2 + d) = r(a * 2 + d, c * 2 + b);
  return linalg::hermitian_eigenvalues(pt)(0);
}

}  // namespace

TEST_CASE("operator Schmidt decomposition reconstructs the input") {
  std::mt19937_64 rng(41);
  const SubsystemShape shape{{2, 3, 2}};
  const Matrix m = random_matrix(12, rng);
  const Bipartition bp{{0, 2}, {1}};
  const auto s = operator_schmidt(m, shape, bp);
  CHECK(s.rank == 9);
  CHECK(max_abs(schmidt_reconstruct(s, shape, bp) - m) < 1e-12);
  for (std::size_t i = 0; i < s.rank; ++i) {
    CHECK(std::abs((s.gamma_a[i].adjoint() * s.gamma_a[i]).trace() - 1.0) < 1e-12);
    if (i > 0) CHECK(s.lambdas[i] <= s.lambdas[i - 1]);
  }
  // A product operator has Schmidt rank one.
  const Matrix a = random_matrix(2, rng), b = random_matrix(2, rng), c = random_matrix(2, rng);
  const auto s1 = operator_schmidt(kron_list({a, b, c}), SubsystemShape::qubits(3), Bipartition{{1}, {0, 2}});
  CHECK(s1.rank == 1);
}

TEST_CASE("Bell state delta-rho norm and mutual information") {
  const auto r = delta_rho_analysis(bell(), Bipartition{{0}, {1}});
  CHECK(std::abs(r.hs_norm - std::sqrt(3.0) / 2.0) <= 1e-10);
  CHECK(mutual_information(bell(), Bipartition{{0}, {1}}) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("delta-rho norm equals the norm of its connected correlators") {
  std::mt19937_64 rng(42);
  const std::vector<Bipartition> cuts{{{0, 1}, {2, 3}}, {{0, 2}, {1, 3}}, {{0, 3}, {1, 2}}};
  for (int k = 0; k < 100; ++k) {
    const DensityState rho(random_density(16, rng, 0.0), SubsystemShape::qubits(4));
    for (const auto& bp : cuts) {
      const auto r = delta_rho_analysis(rho, bp);
      double sum = 0.0;
      for (Complex c : r.cc_values) sum += std::norm(c);
      CHECK(std::abs(r.hs_norm * r.hs_norm - sum) <= 1e-10);
      const auto pb = delta_rho_product_basis(rho, bp);
      CHECK(std::abs(pb.hs_norm - r.hs_norm) <= 1e-10);
    }
  }
}

TEST_CASE("single-qubit thermal entropy at beta = 3") {
  const auto shape = SubsystemShape::qubits(1);
  const auto rho = make_state(state_kind::LocalGibbs{-pauli::x(), 3.0}, shape);
  const double b = 3.0;
  const double expect = std::log(2.0 * std::cosh(b)) - b * std::tanh(b);
  CHECK(von_neumann_entropy(rho.matrix()) == doctest::Approx(expect).epsilon(1e-12));
  // Binary entropy of the eigenvalue 1/(1 + e^{2β}).
  const double q = 1.0 / (1.0 + std::exp(2.0 * b));
  CHECK(expect == doctest::Approx(-q * std::log(q) - (1 - q) * std::log(1 - q)).epsilon(1e-12));
}

TEST_CASE("mutual-information bound and its optimal scale") {
  std::mt19937_64 rng(43);
  for (int k = 0; k < 100; ++k) {
    const DensityState rho(random_density(4, rng, 0.1), SubsystemShape::qubits(2));
    const Bipartition bp{{0}, {1}};
    const auto b = mi_bound(rho, bp);
    CHECK(b.bound - mutual_information(rho, bp) >= 0.0);
    // Grid search over log k.
    const Matrix lg = linalg::hermitian_log(rho.matrix());
    double best = 1e300;
    for (double lk = b.log_k_star - 0.5; lk <= b.log_k_star + 0.5; lk += 1e-4) {
      best = std::min(best, (lg + lk * Matrix::Identity(4, 4)).norm());
    }
    CHECK(std::abs(best - b.log_norm) <= 1e-6);
    CHECK(b.k_star == doctest::Approx(std::exp(b.log_k_star)));
  }
  Matrix pure = Matrix::Zero(4, 4);
  pure(0, 0) = 1.0;
  CHECK_THROWS_AS(mi_bound(DensityState(pure, SubsystemShape::qubits(2)), Bipartition{{0}, {1}}), NotFullRank);
}

TEST_CASE("four-term metric decomposition of the traditional CC") {
  std::mt19937_64 rng(44);
  for (int k = 0; k < 10; ++k) {
    const DensityState rho(random_density(4, rng), SubsystemShape::qubits(2));
    const Matrix ea = random_density(2, rng, 0.3) * 2.0, eb = random_density(2, rng, 0.3) * 2.0;
    const auto c = metric_cc_decomposition_check(rho, Bipartition{{0}, {1}}, ea, eb, random_hermitian(2, rng),
                                                 random_hermitian(2, rng));
    CHECK(c.residual <= 1e-10);
    CHECK(c.auxiliary_residual <= 1e-10);
  }
}

TEST_CASE("Hermitian operator basis is orthonormal") {
  for (std::size_t d : {2u, 3u, 4u}) {
    const auto basis = hermitian_operator_basis(d);
    REQUIRE(basis.size() == d * d);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      CHECK(linalg::is_hermitian(basis[i]));
      for (std::size_t j = 0; j < basis.size(); ++j) {
        CHECK(std::abs((basis[i].adjoint() * basis[j]).trace() - (i == j ? 1.0 : 0.0)) < 1e-13);
      }
    }
  }
}

TEST_CASE("tripartite construction with vanishing metric CCs") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto ex = tripartite_example(2, 2, 2, seed, 0.1);
    CHECK(ex.max_metric_cc <= 1e-10);
    CHECK(ex.max_c1k <= 1e-10);
    CHECK(ex.min_eigenvalue >= 0.0);
    const std::vector<std::size_t> ab{0, 1};
    const Matrix rab = linalg::partial_trace(ex.rho, ex.shape, ab);
    CHECK(min_partial_transpose_eig(rab) < -1e-6);
    CHECK(ex.delta_rho_ab_norm > 1e-3);
    // Independent check of one metric CC at t = 0.
    const Matrix oa = linalg::embed_operator(pauli::x(), std::vector<std::size_t>{0}, ex.shape);
    const Matrix ob = linalg::embed_operator(pauli::z(), std::vector<std::size_t>{1}, ex.shape);
    const Complex e = (ex.rho * ex.eta).trace();
    const Complex cc = (ex.rho * ex.eta * oa * ob).trace() / e -
                       (ex.rho * ex.eta * oa).trace() * (ex.rho * ex.eta * ob).trace() / (e * e);
    CHECK(std::abs(cc) <= 1e-10);
    CHECK(verify_pseudo_hermitian(ex.H, ex.eta) <= 1e-10);
  }
}

TEST_CASE("the tripartite construction builds AB correlations at short times") {
  TripartiteOptions opts;
  opts.entangled_second_term = false;
  const auto ex = tripartite_example(2, 2, 2, 11, 0.1, opts);
  const std::vector<std::size_t> ab{0, 1};
  const SubsystemShape ab_shape = SubsystemShape::qubits(2);
  auto delta_ab = [&](const Matrix& r) {
    const DensityState s(linalg::partial_trace(r, ex.shape, ab), ab_shape);
    return delta_rho_analysis(s, Bipartition{{0}, {1}}).hs_norm;
  };
  CHECK(delta_ab(ex.rho) <= 1e-12);
  const auto later = evolve_state(DensityState(ex.rho, ex.shape), propagator(ex.H, 0.01));
  CHECK(delta_ab(later.matrix()) > 1e-6);
}

TEST_CASE("sigma product membership") {
  const auto shape = SubsystemShape::qubits(3);
  std::mt19937_64 rng(45);
  const Matrix rho = kron_list({random_density(2, rng), random_density(2, rng), random_density(2, rng)});
  const std::vector<double> ts{0.0, 0.5};
  const auto rep = sigma_product_membership(DensityState(rho, shape), Matrix::Identity(8, 8), Matrix::Zero(8, 8),
                                            Tripartition{{0}, {1}, {2}}, ts);
  CHECK(rep.trivial);
  const auto ent = tripartite_example(2, 2, 2, 3, 0.1);
  const auto rep2 =
      sigma_product_membership(DensityState(ent.rho, ent.shape), ent.eta, ent.H, ent.parts, ts);
  CHECK(rep2.pseudo_hermitian);
}
