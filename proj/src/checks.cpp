#include "nhlc/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>

#include "nhlc/config.hpp"
#include "nhlc/correlators.hpp"
#include "nhlc/entanglement.hpp"
#include "nhlc/errors.hpp"
#include "nhlc/evolution.hpp"
#include "nhlc/runner.hpp"

namespace nhlc {

namespace {

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

template <class F>
CheckResult timed(const std::string& name, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.name = name;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

QuasiHermitianModel tfim(std::size_t n, double gamma, double J = 0.95) {
  TfimParams p;
  p.n = n;
  p.J = J;
  p.gamma = gamma;
  return build_quasi_hermitian(p);
}

std::vector<std::size_t> chain(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

Matrix gaussian(std::mt19937_64& rng, Eigen::Index d) {
  std::normal_distribution<double> nd;
  Matrix m(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) m(i, j) = Complex(nd(rng), nd(rng));
  return m;
}

Matrix random_hermitian(std::mt19937_64& rng, Eigen::Index d) {
  const Matrix g = gaussian(rng, d);
  return 0.5 * (g + g.adjoint());
}

Matrix random_pauli(std::mt19937_64& rng, const SubsystemShape& shape) {
  std::uniform_int_distribution<std::size_t> site(0, shape.sites() - 1), which(0, 2);
  const std::size_t w = which(rng);
  return site_operator(pauli::xyz()[w], site(rng), shape);
}

Complex tr(const Matrix& m) { return m.trace(); }

// Smallest eigenvalue of the partial transpose on the second factor of a d_a·d_b matrix.
double min_partial_transpose(const Matrix& r, Eigen::Index da, Eigen::Index db) {
  Matrix pt(da * db, da * db);
  for (Eigen::Index a = 0; a < da; ++a)
    for (Eigen::Index b = 0; b < db; ++b)
      for (Eigen::Index c = 0; c < da; ++c)
        for (Eigen::Index d = 0; d < db; ++d) pt(a * db + b, c * db + d) = r(a * db + d, c * db + b);
  return linalg::hermitian_eigenvalues(0.5 * (pt + pt.adjoint()))(0);
}

}  // namespace

namespace checks {

CheckResult pseudo_hermiticity(std::size_t n_max, bool inject) {
  return timed("pseudo_hermiticity", [&] {
    CheckResult r;
    double worst = 0.0;
    std::string where;
    for (double gamma : {0.3, 0.6, 0.9}) {
      for (std::size_t n = 2; n <= n_max; ++n) {
        const auto m = tfim(n, gamma);
        const Matrix eta = inject ? Matrix::Identity(m.H.rows(), m.H.cols()) : m.eta;
        const double res = verify_pseudo_hermitian(m.H, eta);
        if (res > worst) {
          worst = res;
          where = "n=" + std::to_string(n) + " gamma=" + fmt("%g", gamma);
        }
      }
    }
    r.passed = worst <= 1e-12;
    r.detail = (r.passed ? "max residual " : "pseudo-Hermiticity violated: residual ") + fmt("%.3g", worst) +
               " at " + where + (inject ? " (metric replaced by identity)" : "");
    r.data = {{"max_residual", worst}, {"n_max", n_max}, {"injected_fault", inject}};
    return r;
  });
}

CheckResult dyson_decomposition(std::size_t n_max) {
  return timed("dyson_decomposition", [&] {
    CheckResult r;
    double worst_res = 0.0, worst_spec = 0.0;
    for (double gamma : {0.3, 0.6, 0.9}) {
      for (std::size_t n = 2; n <= n_max; ++n) {
        const auto m = tfim(n, gamma);
        worst_res = std::max(worst_res, dyson_residual(m));
        // Eigenvalues of the non-Hermitian H from a general solver, against H₀'s.
        const Eigen::ComplexEigenSolver<Matrix> es(m.H, false);
        std::vector<Complex> eh(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
        std::sort(eh.begin(), eh.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
        const RealVector e0 = linalg::hermitian_eigenvalues(m.H0);
        for (std::size_t k = 0; k < eh.size(); ++k) {
          worst_spec = std::max(worst_spec, std::abs(eh[k] - e0(static_cast<Eigen::Index>(k))));
        }
      }
    }
    r.passed = worst_res <= 1e-9 && worst_spec <= 1e-8;
    r.detail = "max reconstruction residual " + fmt("%.3g", worst_res) + ", max spectral mismatch " +
               fmt("%.3g", worst_spec);
    r.data = {{"max_residual", worst_res}, {"max_spectral_mismatch", worst_spec}, {"n_max", n_max}};
    return r;
  });
}

CheckResult equal_time_equivalence(std::size_t n, int tuples, std::uint64_t seed) {
  return timed("equal_time_equivalence", [&] {
    CheckResult r;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> tu(0.0, 2.0), gu(0.0, 0.95);
    const auto shape = SubsystemShape::qubits(n);
    double worst = 0.0;
    for (int k = 0; k < tuples; ++k) {
      const auto m = tfim(n, gu(rng));
      const Evolver ev(m);
      const auto rho = make_state(state_kind::RandomFullRank{rng()}, shape);
      const Matrix o1 = random_pauli(rng, shape), o2 = random_pauli(rng, shape);
      const double t = tu(rng);
      const Complex s = schrodinger_cc(rho.matrix(), o1, o2, t, t, ev);
      const auto rt = evolve_state(rho, ev.at(t));
      worst = std::max(worst, std::abs(s - equal_time_cc(rt.matrix(), o1, o2)));
    }
    r.passed = worst <= 1e-10;
    r.detail = "max deviation " + fmt("%.3g", worst) + " over " + std::to_string(tuples) + " tuples";
    r.data = {{"max_deviation", worst}, {"tuples", tuples}, {"n", n}};
    return r;
  });
}

CheckResult hermitian_degeneration(std::size_t n, int tuples, std::uint64_t seed) {
  return timed("hermitian_degeneration", [&] {
    CheckResult r;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> tu(0.0, 2.0);
    const auto m = tfim(n, 0.0);
    const Evolver ev(m);
    double worst = 0.0;
    for (int k = 0; k < tuples; ++k) {
      const auto rho = make_state(state_kind::RandomFullRank{rng()}, m.shape).matrix();
      const Matrix o1 = random_pauli(rng, m.shape), o2 = random_pauli(rng, m.shape);
      const double t = tu(rng), t2 = tu(rng);
      const Complex a = traditional_cc(rho, o1, o2, t, t2, ev);
      worst = std::max({worst, std::abs(a - schrodinger_cc(rho, o1, o2, t, t2, ev)),
                        std::abs(a - metric_cc(rho, m.eta, o1, o2, t, t2, ev))});
    }
    r.passed = worst <= 1e-12;
    r.detail = "max spread between kinds " + fmt("%.3g", worst);
    r.data = {{"max_deviation", worst}, {"tuples", tuples}, {"n", n}};
    return r;
  });
}

CheckResult delta_rho_identity(int states, std::uint64_t seed) {
  return timed("delta_rho_identity", [&] {
    CheckResult r;
    const auto shape = SubsystemShape::qubits(4);
    const std::vector<Bipartition> cuts{{{0, 1}, {2, 3}}, {{0, 2}, {1, 3}}, {{0, 3}, {1, 2}}};
    double worst = 0.0;
    for (int k = 0; k < states; ++k) {
      const StateKind kind = k % 2 == 0 ? StateKind{state_kind::RandomFullRank{seed + static_cast<std::uint64_t>(k)}}
                                        : StateKind{state_kind::RandomPure{seed + static_cast<std::uint64_t>(k)}};
      const auto rho = make_state(kind, shape);
      for (const auto& bp : cuts) {
        const auto rep = delta_rho_analysis(rho, bp);
        // ‖δρ‖₂ straight from the definition.
        const std::vector<std::size_t> a = bp.a, b = bp.b;
        const Matrix ra = linalg::partial_trace(rho.matrix(), shape, a);
        const Matrix rb = linalg::partial_trace(rho.matrix(), shape, b);
        const double direct = (rho.matrix() - linalg::embed_product(ra, a, rb, b, shape)).norm();
        double sum = 0.0;
        for (Complex c : rep.cc_values) sum += std::norm(c);
        worst = std::max({worst, std::abs(direct * direct - sum), std::abs(rep.hs_norm - direct)});
      }
    }
    Vector bell = Vector::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    const DensityState b(bell * bell.adjoint(), SubsystemShape::qubits(2));
    const double bell_norm = delta_rho_analysis(b, Bipartition{{0}, {1}}).hs_norm;
    const double bell_err = std::abs(bell_norm - std::sqrt(3.0) / 2.0);
    r.passed = worst <= 1e-10 && bell_err <= 1e-10;
    r.detail = "max identity residual " + fmt("%.3g", worst) + ", Bell norm " + fmt("%.15f", bell_norm);
    r.data = {{"max_residual", worst}, {"bell_norm", bell_norm}, {"states", states}};
    return r;
  });
}

CheckResult mi_bound(int states, std::uint64_t seed) {
  return timed("mi_bound", [&] {
    CheckResult r;
    const auto shape = SubsystemShape::qubits(4);
    const Bipartition bp{{0, 1}, {2, 3}};
    double min_gap = std::numeric_limits<double>::infinity();
    double worst_k = 0.0;
    for (int k = 0; k < states; ++k) {
      const auto rho = make_state(state_kind::RandomFullRank{seed + static_cast<std::uint64_t>(k)}, shape);
      const auto b = nhlc::mi_bound(rho, bp);
      min_gap = std::min(min_gap, b.bound - mutual_information(rho, bp));
      // Nested grid search for the minimizer of ‖log ρ + x·I‖₂ over x = log k.
      const Matrix lg = linalg::hermitian_log(rho.matrix());
      const auto id = Matrix::Identity(lg.rows(), lg.cols());
      auto f = [&](double x) { return (lg + x * id).norm(); };
      double centre = 0.0, half = 60.0, step = 0.1;
      for (int level = 0; level < 5; ++level) {
        double best = centre, best_v = f(centre);
        for (double x = centre - half; x <= centre + half; x += step) {
          const double v = f(x);
          if (v < best_v) {
            best_v = v;
            best = x;
          }
        }
        centre = best;
        half = 2.0 * step;
        step /= 100.0;
      }
      worst_k = std::max(worst_k, std::abs(std::exp(centre - b.log_k_star) - 1.0));
    }
    r.passed = min_gap >= 0.0 && worst_k <= 1e-6;
    r.detail = "min bound gap " + fmt("%.3g", min_gap) + ", max relative k* mismatch " + fmt("%.3g", worst_k);
    r.data = {{"min_gap", min_gap}, {"max_k_star_mismatch", worst_k}, {"states", states}};
    return r;
  });
}

CheckResult metric_identities(int tuples, std::uint64_t seed) {
  return timed("metric_identities", [&] {
    CheckResult r;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> tu(0.0, 2.0);
    const auto m = tfim(4, 0.6);
    const Evolver ev(m);
    double worst_route = 0.0;
    for (int k = 0; k < tuples; ++k) {
      const auto rho = make_state(state_kind::RandomFullRank{rng()}, m.shape).matrix();
      const Matrix o1 = random_pauli(rng, m.shape), o2 = random_pauli(rng, m.shape);
      const double t = tu(rng), t2 = tu(rng);
      worst_route = std::max(worst_route, std::abs(metric_cc(rho, m.eta, o1, o2, t, t2, ev) -
                                                   metric_cc_dyson_route(rho, m, o1, o2, t, t2)));
    }
    double worst_four = 0.0, worst_aux = 0.0;
    const auto shape = SubsystemShape::qubits(4);
    for (int k = 0; k < tuples; ++k) {
      const auto rho = make_state(state_kind::RandomFullRank{rng()}, shape);
      const Matrix ga = gaussian(rng, 4), gb = gaussian(rng, 4);
      const Matrix eta_a = ga * ga.adjoint() + 0.1 * Matrix::Identity(4, 4);
      const Matrix eta_b = gb * gb.adjoint() + 0.1 * Matrix::Identity(4, 4);
      const auto c = metric_cc_decomposition_check(rho, Bipartition{{0, 1}, {2, 3}}, eta_a, eta_b,
                                                   random_hermitian(rng, 4), random_hermitian(rng, 4));
      worst_four = std::max(worst_four, c.residual);
      worst_aux = std::max(worst_aux, c.auxiliary_residual);
    }
    r.passed = worst_route <= 1e-10 && worst_four <= 1e-10 && worst_aux <= 1e-10;
    r.detail = "route mismatch " + fmt("%.3g", worst_route) + ", four-term residual " + fmt("%.3g", worst_four) +
               ", auxiliary residual " + fmt("%.3g", worst_aux);
    r.data = {{"dual_route_max", worst_route}, {"four_term_max", worst_four}, {"auxiliary_max", worst_aux}};
    return r;
  });
}

CheckResult npartite(std::uint64_t seed) {
  return timed("npartite_cc", [&] {
    CheckResult r;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> tu(0.0, 2.0);
    const auto m = tfim(3, 0.6);
    const Evolver ev(m);
    double worst_two = 0.0, worst_three = 0.0;
    for (int k = 0; k < 10; ++k) {
      const auto rho = make_state(state_kind::RandomFullRank{rng()}, m.shape).matrix();
      const Matrix o1 = random_pauli(rng, m.shape), o2 = random_pauli(rng, m.shape);
      const double t1 = tu(rng), t2 = tu(rng);
      const std::vector<TimedOperator> ops{{o1, t1}, {o2, t2}};
      worst_two = std::max({worst_two,
                            std::abs(npartite_cc(CcKind::Traditional, rho, ops, ev) -
                                     traditional_cc(rho, o1, o2, t1, t2, ev)),
                            std::abs(npartite_cc(CcKind::Schrodinger, rho, ops, ev) -
                                     schrodinger_cc(rho, o1, o2, t1, t2, ev)),
                            std::abs(npartite_cc(CcKind::Metric, rho, ops, ev, &m.eta) -
                                     metric_cc(rho, m.eta, o1, o2, t1, t2, ev))});

      // Moment expansion with Heisenberg operators built from scratch.
      const Matrix o3 = random_pauli(rng, m.shape);
      const double t3 = tu(rng);
      auto heis = [&](const Matrix& o, double t) {
        const Matrix u = linalg::matrix_exponential(Complex(0, -t) * m.H);
        return Matrix(u.adjoint() * o * u);
      };
      const Matrix X = heis(o1, t1), Y = heis(o2, t2), Z = heis(o3, t3);
      auto e = [&](const Matrix& a) { return tr(rho * a); };
      const Complex hand = e(X * Y * Z) - e(X) * e(Y * Z) - e(Y) * e(X * Z) - e(Z) * e(X * Y) +
                           2.0 * e(X) * e(Y) * e(Z);
      const std::vector<TimedOperator> ops3{{o1, t1}, {o2, t2}, {o3, t3}};
      worst_three = std::max(worst_three, std::abs(npartite_cc(CcKind::Traditional, rho, ops3, ev) - hand));
    }
    // Product states under a product (J = 0) NH evolution.
    const auto mp = tfim(3, 0.7, 0.0);
    const Evolver evp(mp);
    double worst_product = 0.0;
    for (int k = 0; k < 10; ++k) {
      const auto one = SubsystemShape::qubits(1);
      Matrix rho = make_state(state_kind::RandomFullRank{rng()}, one).matrix();
      for (int s = 1; s < 3; ++s) rho = linalg::kron(rho, make_state(state_kind::RandomFullRank{rng()}, one).matrix());
      std::uniform_int_distribution<std::size_t> w(0, 2);
      const std::vector<TimedOperator> ops{{site_operator(pauli::xyz()[w(rng)], 0, mp.shape), tu(rng)},
                                           {site_operator(pauli::xyz()[w(rng)], 1, mp.shape), tu(rng)},
                                           {site_operator(pauli::xyz()[w(rng)], 2, mp.shape), tu(rng)}};
      worst_product = std::max({worst_product, std::abs(npartite_cc(CcKind::Schrodinger, rho, ops, evp)),
                                std::abs(npartite_cc(CcKind::Metric, rho, ops, evp, &mp.eta))});
    }
    r.passed = worst_two <= 1e-12 && worst_three <= 1e-10 && worst_product <= 1e-10;
    r.detail = "bipartite limit " + fmt("%.3g", worst_two) + ", moment expansion " + fmt("%.3g", worst_three) +
               ", product evolution " + fmt("%.3g", worst_product);
    r.data = {{"bipartite_limit_max", worst_two},
              {"moment_expansion_max", worst_three},
              {"product_vanishing_max", worst_product}};
    return r;
  });
}

CheckResult cc_figure_morphology(const FigureOptions& o) {
  return timed("cc_figure_morphology", [&] {
    CheckResult r;
    const auto sites = chain(o.n);
    const std::vector<CcKind> kinds{CcKind::Traditional, CcKind::Metric};
    const auto g0 = scan_cc_kinds(tfim(o.n, 0.0), state_kind::PlusProduct{}, kinds, 0, sites, o.grid,
                                  Aggregate::MeanAbs, o.workers);
    const auto g9 = scan_cc_kinds(tfim(o.n, 0.9), state_kind::PlusProduct{}, kinds, 0, sites, o.grid,
                                  Aggregate::MeanAbs, o.workers);
    constexpr double kFrontThreshold = 1e-2;
    // (a) kinds coincide at γ = 0 and the front moves outward.
    const double diff0 = (g0[0].values - g0[1].values).cwiseAbs().maxCoeff();
    const auto front0 = extract_front(g0[0], kFrontThreshold);
    const bool mono0 = front_is_monotone(g0[0], front0, 0);
    // (b) far-site traditional CC at the grid time closest to t = 0.1.
    const auto& times = g0[0].times;
    std::size_t ti = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (std::abs(times[i] - 0.1) < std::abs(times[ti] - 0.1)) ti = i;
    }
    const auto far = static_cast<Eigen::Index>(o.n - 1);
    const double base = g0[0].values(static_cast<Eigen::Index>(ti), far);
    const double broken = g9[0].values(static_cast<Eigen::Index>(ti), far);
    const bool ratio_ok = broken >= 10.0 * base && std::isfinite(broken);
    // (c) the metric front at γ = 0.9, at the γ = 0 threshold.
    const auto front9 = extract_front(g9[1], kFrontThreshold);
    const bool mono9 = front_is_monotone(g9[1], front9, 0);
    r.passed = diff0 <= 1e-10 && mono0 && ratio_ok && mono9;
    auto front_json = [](const std::vector<std::optional<double>>& f) {
      nlohmann::json j = nlohmann::json::array();
      for (const auto& x : f) j.push_back(x ? nlohmann::json(*x) : nlohmann::json(nullptr));
      return j;
    };
    r.detail = "(a) kind spread " + fmt("%.3g", diff0) + (mono0 ? ", front monotone" : ", FRONT NOT MONOTONE") +
               "; (b) far site t=" + fmt("%g", times[ti]) + ": " + fmt("%.3g", broken) + " vs baseline " +
               fmt("%.3g", base) + "; (c) metric front " + (mono9 ? "monotone" : "NOT MONOTONE");
    r.data = {{"n", o.n},
              {"front_threshold", kFrontThreshold},
              {"gamma0_kind_spread", diff0},
              {"gamma0_front", front_json(front0)},
              {"gamma0_max", g0[0].values.maxCoeff()},
              {"breakdown_time", times[ti]},
              {"breakdown_baseline", base},
              {"breakdown_value", broken},
              {"breakdown_required_ratio", 10.0},
              {"gamma09_metric_front", front_json(front9)},
              {"gamma09_metric_max", g9[1].values.maxCoeff()},
              {"gamma09_traditional_max", g9[0].values.maxCoeff()}};
    return r;
  });
}

CheckResult mi_figure(const FigureOptions& o) {
  return timed("mi_figure", [&] {
    CheckResult r;
    const auto sites = chain(o.n);
    const StateKind st = state_kind::LocalGibbs{-pauli::x(), 3.0};
    const auto g0 = scan_mi(tfim(o.n, 0.0), st, 0, sites, o.grid, o.workers);
    const auto g9 = scan_mi(tfim(o.n, 0.9), st, 0, sites, o.grid, o.workers);
    double t0_max = 0.0;
    for (const auto* g : {&g0, &g9}) {
      for (Eigen::Index x = 1; x < g->values.cols(); ++x) t0_max = std::max(t0_max, std::abs(g->values(0, x)));
    }
    auto far_max = [&](const ScanGrid& g) {
      double m = -std::numeric_limits<double>::infinity();
      for (Eigen::Index x = 2; x < g.values.cols(); ++x) m = std::max(m, g.values.col(x).maxCoeff());
      return m;
    };
    const double m0 = far_max(g0), m9 = far_max(g9);
    const bool no_nan = !g0.values.hasNaN() && !g9.values.hasNaN();
    r.passed = t0_max <= 1e-10 && m9 < m0 && no_nan;
    r.detail = "max |I(t=0)| off-site " + fmt("%.3g", t0_max) + "; max I at distance >= 2: gamma=0.9 " +
               fmt("%.4g", m9) + " vs gamma=0 " + fmt("%.4g", m0);
    nlohmann::json per0 = nlohmann::json::array(), per9 = nlohmann::json::array();
    for (Eigen::Index x = 0; x < g0.values.cols(); ++x) {
      per0.push_back(g0.values.col(x).maxCoeff());
      per9.push_back(g9.values.col(x).maxCoeff());
    }
    r.data = {{"n", o.n},         {"t0_offsite_max", t0_max}, {"far_max_gamma0", m0},
              {"far_max_gamma09", m9}, {"per_site_max_gamma0", per0}, {"per_site_max_gamma09", per9},
              {"entropy_A_t0", g0.values(0, 0)}};
    return r;
  });
}

CheckResult commutator_figures(const FigureOptions& o) {
  return timed("commutator_figures", [&] {
    CheckResult r;
    const std::size_t a = 1;
    const auto sites = chain(o.n);
    constexpr double kFrontThreshold = 1e-2;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    bool finite = true;
    double herm_diff = 0.0;
    bool mono_n = false, mono_u = false;
    nlohmann::json per_gamma = nlohmann::json::array();
    for (double gamma : {0.0, 0.3, 0.6, 0.9}) {
      const auto m = tfim(o.n, gamma);
      const auto g = scan_commutator_both(m, a, sites, o.grid, OperatorPicture::Tilde, o.workers);
      finite = finite && !g.normalized.values.hasNaN() && !g.unnormalized.values.hasNaN();
      lo = std::min(lo, g.normalized.values.minCoeff());
      hi = std::max(hi, g.normalized.values.maxCoeff());
      if (gamma == 0.0) {
        // The plain LR commutator ½‖[O_A(t), O_B]‖ with unitary Heisenberg evolution.
        const auto h = scan_commutator(m, a, sites, o.grid, false, OperatorPicture::Heisenberg, o.workers);
        herm_diff = (g.normalized.values - h.values).cwiseAbs().maxCoeff();
      }
      const bool mn = front_is_monotone(g.normalized, extract_front(g.normalized, kFrontThreshold), a);
      const bool mu = front_is_monotone(g.unnormalized, extract_front(g.unnormalized, kFrontThreshold), a);
      if (gamma == 0.6) {
        mono_n = mn;
        mono_u = mu;
      }
      per_gamma.push_back({{"gamma", gamma},
                           {"normalized_max", g.normalized.values.maxCoeff()},
                           {"unnormalized_max", g.unnormalized.values.maxCoeff()},
                           {"normalized_front_monotone", mn},
                           {"unnormalized_front_monotone", mu}});
    }
    r.passed = finite && lo >= 0.0 && hi <= 1.0 + 1e-10 && herm_diff <= 1e-10 && mono_n && mono_u;
    r.detail = "normalized range [" + fmt("%.3g", lo) + ", " + fmt("%.12g", hi) + "], gamma=0 vs LR commutator " +
               fmt("%.3g", herm_diff) + ", gamma=0.6 fronts " + (mono_n && mono_u ? "monotone" : "NOT MONOTONE");
    r.data = {{"n", o.n},
              {"A", a},
              {"front_threshold", kFrontThreshold},
              {"normalized_min", lo},
              {"normalized_max", hi},
              {"gamma0_lr_commutator_diff", herm_diff},
              {"per_gamma", per_gamma}};
    return r;
  });
}

CheckResult evolution_invariances(std::uint64_t seed) {
  return timed("evolution_invariances", [&] {
    CheckResult r;
    std::mt19937_64 rng(seed);
    const auto m = tfim(4, 0.6);
    const auto rho = make_state(state_kind::RandomFullRank{rng()}, m.shape);
    const double t = 1.3;
    const auto base = evolve_state(rho, propagator(m.H, t));
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double worst_shift = 0.0;
    const auto d = m.H.rows();
    for (int k = 0; k < 10; ++k) {
      const Complex shift(u(rng), u(rng));
      const auto shifted = evolve_state(rho, propagator(m.H + shift * Matrix::Identity(d, d), t));
      worst_shift = std::max(worst_shift, (shifted.matrix() - base.matrix()).cwiseAbs().maxCoeff());
    }
    // ‖ψ(t)‖² on a grid once Γ ≥ 0.
    const Matrix h = shift_to_nonnegative_damping(m.H);
    const Evolver ev(h);
    const Vector psi0 = make_state_factor(state_kind::RandomPure{rng()}, m.shape).col(0);
    double prev = psi0.squaredNorm();
    double worst_increase = -std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 50; ++i) {
      const double nrm = (ev.at(0.1 * i).U * psi0).squaredNorm();
      worst_increase = std::max(worst_increase, nrm - prev);
      prev = nrm;
    }
    // Decay rate against a centered difference.
    const auto damping = damping_part(m.H);
    const double t1 = 0.8, dt = 1e-4;
    auto n2 = [&](double s) { return (propagator(m.H, s).U * psi0).squaredNorm(); };
    const double fd = (n2(t1 + dt) - n2(t1 - dt)) / (2 * dt);
    const Vector psi_t = propagator(m.H, t1).U * psi0;
    const double rate_err = std::abs(success_decay_rate(psi_t, damping) - fd);
    r.passed = worst_shift <= 1e-10 && worst_increase <= 0.0 && rate_err <= 1e-6;
    r.detail = "shift deviation " + fmt("%.3g", worst_shift) + ", largest norm increase " +
               fmt("%.3g", worst_increase) + ", decay-rate error " + fmt("%.3g", rate_err);
    r.data = {{"shift_max", worst_shift}, {"norm_increase_max", worst_increase}, {"decay_rate_error", rate_err}};
    return r;
  });
}

CheckResult ghz(std::size_t n_max) {
  return timed("ghz_correlation", [&] {
    CheckResult r;
    double worst = 0.0;
    for (std::size_t n = 2; n <= n_max; ++n) {
      const auto shape = SubsystemShape::qubits(n);
      const auto rho = make_state(state_kind::Ghz{}, shape);
      const Complex c = equal_time_cc(rho.matrix(), site_operator(pauli::z(), 0, shape),
                                      site_operator(pauli::z(), n - 1, shape));
      worst = std::max(worst, std::abs(c - 1.0));
    }
    r.passed = worst <= 1e-12;
    r.detail = "max |CC - 1| " + fmt("%.3g", worst) + " for n = 2.." + std::to_string(n_max);
    r.data = {{"max_deviation", worst}, {"n_max", n_max}};
    return r;
  });
}

CheckResult tripartite_construction(int seeds) {
  return timed("tripartite_construction", [&] {
    CheckResult r;
    double worst_cc = 0.0, worst_c1k = 0.0, max_pt = -std::numeric_limits<double>::infinity();
    double min_delta = std::numeric_limits<double>::infinity();
    for (int s = 0; s < seeds; ++s) {
      const auto ex = tripartite_example(2, 2, 2, static_cast<std::uint64_t>(s), 0.1);
      // Metric CCs over the Pauli basis, from traces.
      const Complex e = tr(ex.rho * ex.eta);
      std::vector<Matrix> basis{pauli::identity(), pauli::x(), pauli::y(), pauli::z()};
      for (const Matrix& pa : basis) {
        const Matrix oa = linalg::embed_operator(pa, std::vector<std::size_t>{0}, ex.shape);
        for (const Matrix& pb : basis) {
          const Matrix ob = linalg::embed_operator(pb, std::vector<std::size_t>{1}, ex.shape);
          const Complex cc = tr(ex.rho * ex.eta * oa * ob) / e -
                             tr(ex.rho * ex.eta * oa) * tr(ex.rho * ex.eta * ob) / (e * e);
          worst_cc = std::max(worst_cc, std::abs(cc));
        }
      }
      const std::vector<std::size_t> ab{0, 1};
      const Matrix rab = linalg::partial_trace(ex.rho, ex.shape, ab);
      max_pt = std::max(max_pt, min_partial_transpose(rab, 2, 2));
      min_delta = std::min(min_delta, ex.delta_rho_ab_norm);
      for (const Matrix& g : ex.gamma_c) {
        const Matrix dg = ex.H_C * g - g * ex.H_C.adjoint();
        worst_c1k = std::max(worst_c1k, std::abs(tr(ex.gamma_c[0].adjoint() * dg)));
      }
    }
    r.passed = worst_cc <= 1e-10 && max_pt < 0.0 && min_delta > 1e-9 && worst_c1k <= 1e-10;
    r.detail = "max metric CC " + fmt("%.3g", worst_cc) + ", most positive partial-transpose minimum " +
               fmt("%.3g", max_pt) + ", min ||delta rho_AB|| " + fmt("%.3g", min_delta) + ", max C_1k " +
               fmt("%.3g", worst_c1k);
    r.data = {{"max_metric_cc", worst_cc},
              {"max_partial_transpose_min", max_pt},
              {"min_delta_rho_ab", min_delta},
              {"max_c1k", worst_c1k},
              {"seeds", seeds}};
    return r;
  });
}

CheckResult thermal_report() {
  return timed("thermal_invariance", [&] {
    CheckResult r;
    const std::vector<std::pair<double, double>> pairs{{0.2, 0.9}, {1.0, 0.3}, {0.5, 0.5}, {1.5, 0.0}, {2.0, 1.2}};
    const std::size_t n = 4;
    const double beta = 1.0;
    nlohmann::json table = nlohmann::json::array();
    double herm_a = 0.0;
    for (double gamma : {0.0, 0.3}) {
      const auto m = tfim(n, gamma);
      const Matrix oa = site_operator(pauli::x(), 0, m.shape);
      const Matrix ob = site_operator(pauli::z(), n - 1, m.shape);
      for (auto c : {ThermalCandidate::NhGibbs, ThermalCandidate::DysonGibbs, ThermalCandidate::MetricGibbs}) {
        nlohmann::json rows = nlohmann::json::array();
        double worst = 0.0;
        for (auto [t, t2] : pairs) {
          const double res = thermal_invariance_residual(m, beta, c, oa, ob, t, t2);
          worst = std::max(worst, res);
          rows.push_back({{"t", t}, {"t_prime", t2}, {"residual", res}});
        }
        if (gamma == 0.0 && c == ThermalCandidate::NhGibbs) herm_a = worst;
        table.push_back({{"gamma", gamma}, {"candidate", to_string(c)}, {"max_residual", worst}, {"pairs", rows}});
      }
    }
    r.passed = herm_a <= 1e-9;
    std::string summary;
    for (const auto& row : table) {
      if (row["gamma"] == 0.3) {
        summary += " " + row["candidate"].get<std::string>() + "=" + fmt("%.3g", row["max_residual"].get<double>());
      }
    }
    r.detail = "gamma=0 candidate (a) residual " + fmt("%.3g", herm_a) + "; gamma=0.3 max residuals:" + summary;
    r.data = {{"n", n}, {"beta", beta}, {"operators", "sigma_x(0), sigma_z(n-1)"}, {"results", table}};
    return r;
  });
}

}  // namespace checks

namespace {

CheckResult config_round_trip() {
  return timed("config_round_trip", [] {
    CheckResult r;
    r.passed = true;
    for (const auto& name : bundled_config_names()) {
      const auto c = parse_config(bundled_config(name));
      if (!(parse_config(serialize_config(c)) == c)) {
        r.passed = false;
        r.detail += name + " ";
      }
    }
    r.detail = r.passed ? "bundled configs survive parse -> serialize -> parse" : "round trip changed: " + r.detail;
    return r;
  });
}

CheckResult emit_figure_grids(const std::filesystem::path& dir, std::size_t workers) {
  return timed("figure_grids", [&] {
    CheckResult r;
    r.passed = true;
    nlohmann::json files = nlohmann::json::array();
    for (const auto& name : bundled_config_names()) {
      const auto c = parse_config(bundled_config(name));
      const double gamma = c.model.gamma.back();
      const auto grid = run_scan(c, gamma, workers);
      const std::string csv = grid_to_csv(grid);
      const auto file = dir / (name + "_" + scan_label(c.scan) + "_" + gamma_tag(gamma) + ".csv");
      write_file_atomic(file, csv);
      files.push_back({{"file", file.string()}, {"sha256", sha256_hex(csv)}, {"cell_errors", grid.errors.size()}});
      if (grid.values.hasNaN()) r.passed = false;
    }
    r.detail = "wrote " + std::to_string(files.size()) + " grids to " + dir.string();
    r.data = {{"files", files}};
    return r;
  });
}

}  // namespace

std::vector<CheckResult> verify_suite(const VerifyOptions& o) {
  std::vector<CheckResult> out;
  const std::uint64_t seed = 20240611;
  out.push_back(checks::pseudo_hermiticity(6, o.inject_eta_identity));
  out.push_back(checks::dyson_decomposition(6));
  out.push_back(checks::equal_time_equivalence(5, 50, seed));
  out.push_back(checks::hermitian_degeneration(5, 50, seed + 1));
  out.push_back(checks::delta_rho_identity(100, seed + 2));
  out.push_back(checks::mi_bound(100, seed + 3));
  out.push_back(checks::metric_identities(20, seed + 4));
  out.push_back(checks::npartite(seed + 5));
  out.push_back(checks::evolution_invariances(seed + 6));
  out.push_back(checks::ghz(6));
  out.push_back(checks::tripartite_construction(10));
  out.push_back(checks::thermal_report());
  out.push_back(config_round_trip());
  if (o.level == VerifyLevel::Full) {
    checks::FigureOptions fo;
    fo.workers = o.workers;
    out.push_back(checks::cc_figure_morphology(fo));
    out.push_back(checks::mi_figure(fo));
    checks::FigureOptions co = fo;
    co.n = 7;
    out.push_back(checks::commutator_figures(co));
    out.push_back(emit_figure_grids(o.out.value_or("verify_grids"), o.workers));
  }
  return out;
}

}  // namespace nhlc
