#include <doctest.h>

#include <cmath>

#include "nhlc/errors.hpp"
#include "nhlc/evolution.hpp"
#include "support.hpp"

using namespace nhlc;
using namespace nhlc::test;

namespace {

QuasiHermitianModel model(std::size_t n, double gamma) {
  TfimParams p;
  p.n = n;
  p.gamma = gamma;
  return build_quasi_hermitian(p);
}

}  // namespace

TEST_CASE("evolver routes agree with a direct exponential") {
  for (double gamma : {0.0, 0.6}) {
    const auto m = model(4, gamma);
    const Evolver ev(m);
    CHECK(ev.mode() == (gamma == 0.0 ? Evolver::Mode::Hermitian : Evolver::Mode::Similarity));
    const Evolver plain(m.H);
    for (double t : {0.0, 0.3, 1.7}) {
      const Matrix ref = taylor_exp(Complex(0, -t) * m.H);
      const auto p = ev.at(t);
      CHECK(max_abs(p.U - ref) < 1e-10);
      CHECK(max_abs(p.U * p.U_inv - Matrix::Identity(16, 16)) < 1e-10);
      CHECK(max_abs(p.U_dag - p.U.adjoint()) < 1e-14);
      CHECK(max_abs(plain.at(t).U - ref) < 1e-10);
      CHECK(max_abs(propagator(m.H, t).U - ref) < 1e-10);
    }
  }
}

TEST_CASE("normalized state is invariant under complex energy shifts") {
  std::mt19937_64 rng(21);
  const auto m = model(3, 0.6);
  const auto shape = m.shape;
  const DensityState rho(random_density(8, rng), shape);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const auto base = evolve_state(rho, propagator(m.H, 1.3));
  for (int k = 0; k < 10; ++k) {
    const Complex shift(u(rng), u(rng));
    const Matrix h2 = m.H + shift * Matrix::Identity(8, 8);
    const auto shifted = evolve_state(rho, propagator(h2, 1.3));
    CHECK(max_abs(shifted.matrix() - base.matrix()) <= 1e-10);
  }
}

TEST_CASE("norm decays monotonically once the damping part is non-negative") {
  std::mt19937_64 rng(22);
  const auto m = model(3, 0.9);
  const Matrix h = shift_to_nonnegative_damping(m.H);
  const auto damping = damping_part(h);
  CHECK(linalg::hermitian_eigenvalues(damping.Gamma)(0) >= -1e-12);
  CHECK(max_abs(h - damping_part(h).Gamma * Complex(0, -1) - 0.5 * (h + h.adjoint())) < 1e-12);
  const Vector psi0 = random_unit_vector(8, rng);
  const Evolver ev(h);
  double prev = 1.0 + 1e-15;
  for (int i = 0; i <= 40; ++i) {
    const double nrm = (ev.at(0.1 * i).U * psi0).squaredNorm();
    CHECK(nrm <= prev + 1e-14);
    prev = nrm;
  }
}

TEST_CASE("success decay rate matches a centered difference") {
  std::mt19937_64 rng(23);
  const auto m = model(3, 0.6);
  const auto damping = damping_part(m.H);
  const Vector psi0 = random_unit_vector(8, rng);
  const double t = 0.8, h = 1e-4;
  auto n2 = [&](double s) { return (propagator(m.H, s).U * psi0).squaredNorm(); };
  const double fd = (n2(t + h) - n2(t - h)) / (2 * h);
  const Vector psi_t = propagator(m.H, t).U * psi0;
  CHECK(std::abs(success_decay_rate(psi_t, damping) - fd) <= 1e-6);
}

TEST_CASE("operator pictures") {
  std::mt19937_64 rng(24);
  const auto m = model(2, 0.6);
  const auto p = propagator(m.H, 0.9);
  const Matrix o = site_operator(pauli::x(), 0, m.shape);
  const Matrix heis = evolve_operator(o, p, picture::Heisenberg{});
  const Matrix tilde = evolve_operator(o, p, picture::Tilde{});
  const Matrix dyson = evolve_operator(o, p, picture::Dyson{m.S});
  CHECK(max_abs(heis - p.U.adjoint() * o * p.U) < 1e-13);
  CHECK(max_abs(tilde - p.U_inv * o * p.U) < 1e-13);
  // Dyson picture equals S⁻¹ Õ S.
  CHECK(max_abs(dyson - m.S_inv * tilde * m.S) < 1e-10);
  const auto h0 = model(2, 0.0);
  const auto p0 = propagator(h0.H, 0.9);
  CHECK(max_abs(evolve_operator(o, p0, picture::Heisenberg{}) - evolve_operator(o, p0, picture::Tilde{})) <
        1e-12);
}

TEST_CASE("POVM success probability") {
  const Vector psi = Vector::Unit(2, 0);
  const Matrix p0 = 0.5 * (Matrix::Identity(2, 2) + pauli::z());
  const Matrix px = 0.5 * (Matrix::Identity(2, 2) + pauli::x());
  const std::vector<Matrix> ops{p0, px};
  CHECK(povm_success(psi, ops) == doctest::Approx(0.5));
  const std::vector<Matrix> big{2.0 * p0};
  CHECK_THROWS_AS(povm_success(psi, big), OperatorNormExceedsOne);
}

TEST_CASE("vanishing trajectory") {
  Matrix h = Matrix::Zero(2, 2);
  h(0, 0) = Complex(0, -800.0);
  h(1, 1) = Complex(0, -800.0);
  const DensityState rho(Matrix::Identity(2, 2) / 2.0, SubsystemShape::qubits(1));
  CHECK_THROWS_AS(evolve_state(rho, propagator(h, 1.0)), VanishingTrajectory);
}
