#include <doctest.h>

#include <cmath>
#include <limits>

#include "nhlc/correlators.hpp"
#include "nhlc/entanglement.hpp"
#include "nhlc/lightcone.hpp"
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

std::vector<std::size_t> all_sites(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

LrBoundParams unit_params() {
  // c̄ = c̃ + c(|A|+|B|) = 1 and χ′ = χ + 2ξ = 1.
  LrBoundParams p;
  p.c = 0.1;
  p.c_tilde = 0.8;
  p.xi = 0.25;
  p.chi = 0.5;
  p.v = 1.0;
  return p;
}

}  // namespace

TEST_CASE("time grid") {
  TimeGrid g{0.0, 5.0, 51};
  const auto t = g.values();
  CHECK(t.size() == 51);
  CHECK(t[10] == doctest::Approx(1.0));
  CHECK(t.back() == doctest::Approx(5.0));
  CHECK_THROWS(TimeGrid{0.0, 1.0, 0}.values());
  CHECK_THROWS(TimeGrid{1.0, 0.0, 3}.values());
  CHECK(TimeGrid{2.0, 2.0, 1}.values() == std::vector<double>{2.0});
}

TEST_CASE("CC scan cells equal directly evaluated correlators") {
  const auto m = model(4, 0.6);
  const Evolver ev(m);
  const StateKind st = state_kind::RandomFullRank{5};
  const Matrix rho = make_state(st, m.shape).matrix();
  const TimeGrid grid{0.0, 1.0, 5};
  const auto sites = all_sites(4);
  const auto grids = scan_cc_kinds(m, st, {CcKind::Traditional, CcKind::Schrodinger, CcKind::Metric}, 1, sites,
                                   grid, Aggregate::MeanAbs, 2);
  const auto paulis = pauli::xyz();
  const auto times = grid.values();
  for (std::size_t ti = 0; ti < times.size(); ++ti) {
    for (std::size_t x : sites) {
      double sums[3] = {0, 0, 0};
      for (const auto& pa : paulis) {
        for (const auto& pb : paulis) {
          const Matrix oa = site_operator(pa, 1, m.shape), ob = site_operator(pb, x, m.shape);
          sums[0] += std::abs(traditional_cc(rho, oa, ob, times[ti], 0.0, ev));
          sums[1] += std::abs(schrodinger_cc(rho, oa, ob, times[ti], 0.0, ev));
          sums[2] += std::abs(metric_cc(rho, m.eta, oa, ob, times[ti], 0.0, ev));
        }
      }
      for (int k = 0; k < 3; ++k) {
        CHECK(std::abs(grids[static_cast<std::size_t>(k)].values(static_cast<Eigen::Index>(ti),
                                                                 static_cast<Eigen::Index>(x)) -
                       sums[k] / 9.0) < 1e-11);
      }
    }
  }
  CHECK(grids[2].meta["kind"] == "metric");
  CHECK(grids[0].errors.empty());
}

TEST_CASE("aggregation modes") {
  const auto m = model(3, 0.3);
  const Evolver ev(m);
  const StateKind st = state_kind::PlusProduct{};
  const Matrix rho = make_state(st, m.shape).matrix();
  const TimeGrid grid{0.7, 0.7, 1};
  const std::vector<std::size_t> b{2};
  const double sum_abs = scan_cc(m, st, CcKind::Metric, 0, b, grid, Aggregate::SumAbs).values(0, 0);
  const double abs_sum = scan_cc(m, st, CcKind::Metric, 0, b, grid, Aggregate::AbsSum).values(0, 0);
  double s = 0.0;
  Complex z = 0.0;
  for (const auto& pa : pauli::xyz())
    for (const auto& pb : pauli::xyz()) {
      const Complex c =
          metric_cc(rho, m.eta, site_operator(pa, 0, m.shape), site_operator(pb, 2, m.shape), 0.7, 0.0, ev);
      s += std::abs(c);
      z += c;
    }
  CHECK(sum_abs == doctest::Approx(s).epsilon(1e-11));
  CHECK(abs_sum == doctest::Approx(std::abs(z)).epsilon(1e-9));
  CHECK(parse_aggregate("abs_sum") == Aggregate::AbsSum);
}

TEST_CASE("Hermitian chain: traditional and metric grids coincide") {
  const auto m = model(6, 0.0);
  const auto g = scan_cc_kinds(m, state_kind::PlusProduct{}, {CcKind::Traditional, CcKind::Metric}, 0,
                               all_sites(6), TimeGrid{0.0, 2.0, 11}, Aggregate::MeanAbs);
  CHECK((g[0].values - g[1].values).cwiseAbs().maxCoeff() <= 1e-10);
  const auto front = extract_front(g[0], 1e-2);
  CHECK(front_is_monotone(g[0], front, 0));
}

TEST_CASE("scan output does not depend on worker count") {
  const auto m = model(5, 0.6);
  const TimeGrid grid{0.0, 1.0, 4};
  const auto a = scan_cc(m, state_kind::RandomPure{3}, CcKind::Schrodinger, 2, all_sites(5), grid,
                         Aggregate::MeanAbs, 1);
  const auto b = scan_cc(m, state_kind::RandomPure{3}, CcKind::Schrodinger, 2, all_sites(5), grid,
                         Aggregate::MeanAbs, 4);
  CHECK((a.values.array() == b.values.array()).all());
  const auto c1 = scan_commutator_both(m, 1, all_sites(5), grid, OperatorPicture::Tilde, 1);
  const auto c3 = scan_commutator_both(m, 1, all_sites(5), grid, OperatorPicture::Tilde, 3);
  CHECK((c1.normalized.values.array() == c3.normalized.values.array()).all());
}

TEST_CASE("mutual-information scan") {
  const auto m = model(4, 0.6);
  const StateKind st = state_kind::LocalGibbs{-pauli::x(), 3.0};
  const TimeGrid grid{0.0, 1.0, 3};
  const auto g = scan_mi(m, st, 0, all_sites(4), grid, 2);
  const double h = std::log(2.0 * std::cosh(3.0)) - 3.0 * std::tanh(3.0);
  CHECK(g.values(0, 0) == doctest::Approx(h).epsilon(1e-10));
  for (Eigen::Index x = 1; x < 4; ++x) CHECK(std::abs(g.values(0, x)) <= 1e-10);
  // Direct evaluation at the last time.
  const auto rho = make_state(st, m.shape);
  const auto rt = evolve_state(rho, propagator(m.H, 1.0));
  for (std::size_t x = 1; x < 4; ++x) {
    CHECK(std::abs(g.values(2, static_cast<Eigen::Index>(x)) - mutual_information(rt, Bipartition{{0}, {x}})) <
          1e-10);
  }
  // Pure states take the factor route.
  const auto gp = scan_mi(m, state_kind::RandomPure{9}, 1, all_sites(4), grid);
  const auto rp = evolve_state(make_state(state_kind::RandomPure{9}, m.shape), propagator(m.H, 0.5));
  CHECK(std::abs(gp.values(1, 3) - mutual_information(rp, Bipartition{{1}, {3}})) < 1e-10);
}

TEST_CASE("commutator scan") {
  const auto m = model(4, 0.6);
  const TimeGrid grid{0.0, 1.5, 4};
  const auto g = scan_commutator_both(m, 1, all_sites(4), grid, OperatorPicture::Tilde);
  for (Eigen::Index x : {0, 2, 3}) CHECK(g.unnormalized.values(0, x) == doctest::Approx(0.0));
  CHECK(g.normalized.values.maxCoeff() <= 1.0 + 1e-10);
  CHECK(g.normalized.values.minCoeff() >= 0.0);
  // Direct evaluation of one cell.
  const auto p = propagator(m.H, 1.0);
  double sum_u = 0.0, sum_n = 0.0;
  for (const auto& pa : pauli::xyz()) {
    const Matrix ot = p.U_inv * site_operator(pa, 1, m.shape) * p.U;
    for (const auto& pb : pauli::xyz()) {
      const Matrix ob = site_operator(pb, 3, m.shape);
      const double c = 0.5 * linalg::operator_norm(ot * ob - ob * ot);
      sum_u += c;
      sum_n += c / linalg::operator_norm(ot);
    }
  }
  CHECK(g.unnormalized.values(2, 3) == doctest::Approx(sum_u / 9.0).epsilon(1e-10));
  CHECK(g.normalized.values(2, 3) == doctest::Approx(sum_n / 9.0).epsilon(1e-10));
  // Hermitian chain: Tilde and Heisenberg pictures coincide.
  const auto h = model(4, 0.0);
  const auto ta = scan_commutator(h, 1, all_sites(4), grid, true, OperatorPicture::Tilde);
  const auto hb = scan_commutator(h, 1, all_sites(4), grid, true, OperatorPicture::Heisenberg);
  CHECK((ta.values - hb.values).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("restriction to a lightcone") {
  const auto m = model(5, 0.0);
  const Matrix o = site_operator(pauli::x(), 2, m.shape);
  CHECK(restrict_to_lightcone(o, 2, 0.0, m.shape).distance < 1e-12);
  const auto p = propagator(m.H, 1.2);
  const Matrix ot = p.U_dag * o * p.U;
  const auto full = restrict_to_lightcone(ot, 2, 10.0, m.shape);
  CHECK(full.distance == 0.0);
  CHECK(max_abs(full.restricted - ot) == 0.0);
  double prev = std::numeric_limits<double>::infinity();
  for (double l = 0.0; l <= 3.0; l += 1.0) {
    const auto r = restrict_to_lightcone(ot, 2, l, m.shape);
    CHECK(r.distance <= prev + 1e-10);
    prev = r.distance;
  }
  CHECK_THROWS(restrict_to_lightcone(ot, 2, -1.0, m.shape));
}

TEST_CASE("closed-form bounds") {
  const auto p = unit_params();
  BoundGeometry g;
  g.L = 4.0;
  g.t = 1.0;
  CHECK(eval_bound(BoundKind::CcLr, p, g, {}) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
  CHECK(eval_bound(BoundKind::CcLr, p, g, {}) == doctest::Approx(0.13534).epsilon(1e-4));
  // Unequal-time bound at the optimal radii equals its closed form.
  for (auto [t, t2] : {std::pair{1.0, 0.0}, {0.3, 1.1}, {2.0, 2.0}}) {
    g.t = t;
    g.t2 = t2;
    g.L = 9.0;
    const auto terms = cc_lr_unequal_terms(p, g);
    CHECK(terms.total == doctest::Approx(eval_bound(BoundKind::CcLrUnequal, p, g, {})).epsilon(1e-12));
    // The closed-form radii equalize the three exponents.
    const double e1 = (g.L - terms.l - terms.l_prime) / p.chi;
    CHECK((terms.l - p.v * t) / p.xi == doctest::Approx(e1).epsilon(1e-12));
    CHECK((terms.l_prime - p.v * t2) / p.xi == doctest::Approx(e1).epsilon(1e-12));
  }
  g = BoundGeometry{};
  g.L = 1e4;
  CHECK(eval_bound(BoundKind::MetricCcLr, p, g, {}) >= 0.0);
  CHECK(eval_bound(BoundKind::MetricCcLr, p, g, {}) < 1e-300);
  // Entangling time inverts the metric bound.
  g.L = 6.0;
  g.t = 1.3;
  g.t2 = 1.3;
  BoundExtras x;
  x.norm_hat_a = 1.5;
  x.norm_hat_b = 2.0;
  x.cc_value = eval_bound(BoundKind::MetricCcLr, p, g, x);
  CHECK(eval_bound(BoundKind::EntanglingTime, p, g, x) == doctest::Approx(1.3).epsilon(1e-12));
  CHECK(parse_bound_kind("mi_lr") == BoundKind::MiLr);
  LrBoundParams bad = p;
  bad.v = 0.0;
  CHECK_THROWS(eval_bound(BoundKind::Lr, bad, g, {}));
}

TEST_CASE("bounds are monotone in distance and time") {
  const auto p = unit_params();
  BoundExtras x;
  x.dyson_condition = 3.0;
  x.log_norm = 2.0;
  for (BoundKind k : {BoundKind::Lr, BoundKind::CcLr, BoundKind::CcLrUnequal, BoundKind::MetricCcLr,
                      BoundKind::DeltaRhoLr, BoundKind::MiLr, BoundKind::CommutatorD1}) {
    for (double L = 1.0; L < 8.0; L += 1.0) {
      for (double t = 0.0; t < 3.0; t += 0.5) {
        BoundGeometry g;
        g.L = L;
        g.t = t;
        g.t2 = 0.2;
        const double v = eval_bound(k, p, g, x);
        BoundGeometry closer = g, later = g;
        closer.L -= 0.5;
        later.t += 0.5;
        CHECK(eval_bound(k, p, closer, x) >= v);
        CHECK(eval_bound(k, p, later, x) >= v);
      }
    }
  }
}

TEST_CASE("front extraction") {
  ScanGrid g;
  g.sites = {0, 1, 2};
  g.times = {0.0, 1.0, 2.0};
  g.values = RealMatrix::Zero(3, 3);
  for (const auto& f : extract_front(g, 0.5)) CHECK_FALSE(f.has_value());
  g.values.row(1).setOnes();
  g.values.row(2).setOnes();
  for (const auto& f : extract_front(g, 0.5)) CHECK(*f == 1.0);
  CHECK_THROWS(extract_front(g, 0.0));
  // Site 2 crosses before site 1: not monotone.
  g.values.setZero();
  g.values(1, 0) = g.values(2, 1) = g.values(1, 2) = 1.0;
  CHECK_FALSE(front_is_monotone(g, extract_front(g, 0.5), 0));
  g.values(1, 2) = 0.0;
  CHECK(front_is_monotone(g, extract_front(g, 0.5), 0));
  g.values(1, 1) = std::nan("");
  CHECK(front_is_monotone(g, extract_front(g, 0.5), 0));
}

TEST_CASE("least-squares fit recovers synthetic constants") {
  ScanGrid g;
  g.sites = {0, 1, 2, 3, 4};
  g.times = {0.0, 0.5, 1.0, 1.5};
  g.values.resize(4, 5);
  const double c = 0.3, v = 2.0, xi = 0.7;
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index j = 0; j < 5; ++j)
      g.values(i, j) = c * std::exp(-(static_cast<double>(j) - v * g.times[static_cast<std::size_t>(i)]) / xi);
  const auto fit = fit_lr_constants(g, 0);
  CHECK(fit.c == doctest::Approx(c).epsilon(1e-10));
  CHECK(fit.v == doctest::Approx(v).epsilon(1e-10));
  CHECK(fit.xi == doctest::Approx(xi).epsilon(1e-10));
  CHECK(fit.samples == 20);
}
