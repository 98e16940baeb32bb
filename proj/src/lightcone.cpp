#include "nhlc/lightcone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nhlc/entanglement.hpp"
#include "nhlc/errors.hpp"
#include "nhlc/evolution.hpp"
#include "nhlc/pool.hpp"

namespace nhlc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Largest stacked block a CC scan may hold (bytes).
constexpr double kMaxScanBytes = 1.5e9;

Complex inner(const Matrix& x, const Matrix& y) { return x.conjugate().cwiseProduct(y).sum(); }

// Largest singular value from the spectrum of the Gram matrix m†m. Accurate relative to
// ‖m‖ itself, and several times cheaper than a full SVD at these sizes.
double spectral_norm(const Matrix& m) {
  Matrix gram(m.cols(), m.cols());
  gram.triangularView<Eigen::Lower>() = m.adjoint() * m;
  const Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues()(es.eigenvalues().size() - 1)));
}

std::string mode_name(Evolver::Mode m) {
  switch (m) {
    case Evolver::Mode::Hermitian:
      return "hermitian_spectral";
    case Evolver::Mode::Similarity:
      return "dyson_spectral";
    case Evolver::Mode::Diagonalizable:
      return "general_spectral";
    case Evolver::Mode::Pade:
      return "pade";
  }
  return "?";
}

void check_sites(const QuasiHermitianModel& model, std::size_t a, const std::vector<std::size_t>& b_sites) {
  const std::size_t n = model.shape.sites();
  if (a >= n) throw ShapeError("site A = " + std::to_string(a) + " outside the chain");
  if (b_sites.empty()) throw ShapeError("empty B range");
  for (std::size_t x : b_sites) {
    if (x >= n) throw ShapeError("site B = " + std::to_string(x) + " outside the chain");
  }
}

// Propagators needed to walk a uniform grid: U at the first time, then one step.
struct StepPlan {
  Propagator start;
  Propagator step;
  bool start_is_identity = true;
  bool has_step = false;
  std::string mode;
};

StepPlan plan_steps(const QuasiHermitianModel& model, const TimeGrid& grid) {
  const Evolver ev(model);
  StepPlan plan;
  plan.mode = mode_name(ev.mode());
  const auto d = static_cast<Eigen::Index>(model.dim());
  if (grid.start == 0.0) {
    plan.start.U = plan.start.U_inv = plan.start.U_dag = Matrix::Identity(d, d);
  } else {
    plan.start = ev.at(grid.start);
    plan.start_is_identity = false;
  }
  if (grid.steps > 1) {
    plan.step = ev.at(grid.dt());
    plan.has_step = true;
  }
  return plan;
}

nlohmann::json base_meta(const QuasiHermitianModel& model, std::size_t a, const TimeGrid& grid,
                         const std::string& mode) {
  nlohmann::json m;
  m["n"] = model.params.n;
  m["J"] = model.params.J;
  m["g"] = model.params.g;
  m["h"] = model.params.h;
  m["gamma"] = model.params.gamma;
  m["beta_site"] = model.beta_site;
  m["A"] = a;
  m["t_grid"] = {{"start", grid.start}, {"stop", grid.stop}, {"steps", grid.steps}};
  m["propagator"] = mode;
  return m;
}

ScanGrid empty_grid(const std::vector<std::size_t>& b_sites, const TimeGrid& grid) {
  ScanGrid g;
  g.sites = b_sites;
  g.times = grid.values();
  g.values = RealMatrix::Constant(static_cast<Eigen::Index>(g.times.size()),
                                  static_cast<Eigen::Index>(b_sites.size()), kNaN);
  return g;
}

double aggregate_values(const std::vector<Complex>& v, Aggregate mode) {
  double s = 0.0;
  Complex total = 0.0;
  for (const Complex& z : v) {
    s += std::abs(z);
    total += z;
  }
  switch (mode) {
    case Aggregate::MeanAbs:
      return s / static_cast<double>(v.size());
    case Aggregate::SumAbs:
      return s;
    case Aggregate::AbsSum:
      return std::abs(total);
  }
  return kNaN;
}

// Reduced density matrix of Φ Φ† on `keep` (ascending), without forming Φ Φ†.
Matrix reduced_from_factor(const Matrix& phi, const SubsystemShape& shape,
                           const std::vector<std::size_t>& keep) {
  const SiteIndexMap kmap(shape, keep);
  const SiteIndexMap rmap(shape, shape.complement(keep));
  const auto dk = static_cast<Eigen::Index>(kmap.dim());
  const auto nr = static_cast<Eigen::Index>(rmap.dim());
  std::vector<Matrix> blocks(static_cast<std::size_t>(dk));
  for (Eigen::Index k = 0; k < dk; ++k) {
    Matrix& b = blocks[static_cast<std::size_t>(k)];
    b.resize(nr, phi.cols());
    for (Eigen::Index r = 0; r < nr; ++r) {
      b.row(r) = phi.row(static_cast<Eigen::Index>(kmap[static_cast<std::size_t>(k)] +
                                                    rmap[static_cast<std::size_t>(r)]));
    }
  }
  Matrix out(dk, dk);
  for (Eigen::Index k = 0; k < dk; ++k) {
    for (Eigen::Index q = 0; q < dk; ++q) {
      out(k, q) = inner(blocks[static_cast<std::size_t>(q)], blocks[static_cast<std::size_t>(k)]);
    }
  }
  return out;
}

}  // namespace

std::vector<double> TimeGrid::values() const {
  if (steps == 0) throw std::invalid_argument("time grid needs at least one point");
  if (!std::isfinite(start) || !std::isfinite(stop) || stop < start) {
    throw std::invalid_argument("time grid needs finite start <= stop");
  }
  std::vector<double> t(steps);
  for (std::size_t i = 0; i < steps; ++i) t[i] = start + static_cast<double>(i) * dt();
  return t;
}

double TimeGrid::dt() const {
  return steps > 1 ? (stop - start) / static_cast<double>(steps - 1) : 0.0;
}

std::string to_string(Aggregate a) {
  switch (a) {
    case Aggregate::MeanAbs:
      return "mean_abs";
    case Aggregate::SumAbs:
      return "sum_abs";
    case Aggregate::AbsSum:
      return "abs_sum";
  }
  return "?";
}

Aggregate parse_aggregate(const std::string& s) {
  if (s == "mean_abs") return Aggregate::MeanAbs;
  if (s == "sum_abs") return Aggregate::SumAbs;
  if (s == "abs_sum") return Aggregate::AbsSum;
  throw std::invalid_argument("unknown aggregate '" + s + "'");
}

std::vector<ScanGrid> scan_cc_kinds(const QuasiHermitianModel& model, const StateKind& state,
                                    const std::vector<CcKind>& kinds, std::size_t a,
                                    const std::vector<std::size_t>& b_sites, const TimeGrid& grid,
                                    Aggregate aggregate, std::size_t workers) {
  check_sites(model, a, b_sites);
  if (kinds.empty()) throw std::invalid_argument("no correlator kind requested");
  const std::vector<double> times = grid.values();
  const SubsystemShape& shape = model.shape;
  const auto paulis = pauli::xyz();
  const Matrix f = make_state_factor(state, shape);
  const auto r = f.cols();
  const auto nb = static_cast<Eigen::Index>(b_sites.size());
  const double bytes = 16.0 * static_cast<double>(f.rows()) * static_cast<double>(r) * (3.0 * nb + 3.0);
  if (bytes > kMaxScanBytes) {
    throw std::invalid_argument("state has too many factor columns for a CC scan at this size");
  }
  const bool want_metric = std::find(kinds.begin(), kinds.end(), CcKind::Metric) != kinds.end();

  const StepPlan plan = plan_steps(model, grid);

  // Column block (b, j) of psi holds U·O_b(x_j)·F.
  Matrix psi(f.rows(), r * 3 * nb);
  std::vector<Complex> exp_b(static_cast<std::size_t>(3 * nb));      // Tr[ρ O_B]
  std::vector<Complex> exp_eta_b(static_cast<std::size_t>(3 * nb));  // Tr[ρ η O_B]
  const Matrix eta_f = want_metric ? Matrix(model.eta * f) : Matrix();
  const Complex eta_exp = want_metric ? inner(f, eta_f) : Complex(1.0);
  for (std::size_t b = 0; b < 3; ++b) {
    for (Eigen::Index j = 0; j < nb; ++j) {
      const Matrix ob_f = linalg::apply_site_operator(paulis[b], b_sites[static_cast<std::size_t>(j)], shape, f);
      const auto slot = static_cast<std::size_t>(static_cast<Eigen::Index>(b) * nb + j);
      exp_b[slot] = inner(f, ob_f);
      if (want_metric) exp_eta_b[slot] = inner(eta_f, ob_f);
      psi.middleCols(static_cast<Eigen::Index>(slot) * r, r) = ob_f;
    }
  }
  Matrix phi = f;
  Matrix e = eta_f;
  if (!plan.start_is_identity) {
    phi = plan.start.U * phi;
    psi = plan.start.U * psi;
    if (want_metric) e = plan.start.U_inv.adjoint() * e;
  }
  Matrix step_inv_dag;
  if (want_metric && plan.has_step) step_inv_dag = plan.step.U_inv.adjoint();

  std::vector<ScanGrid> out(kinds.size());
  for (std::size_t k = 0; k < kinds.size(); ++k) {
    out[k] = empty_grid(b_sites, grid);
    out[k].meta = base_meta(model, a, grid, plan.mode);
    out[k].meta["scan"] = "cc";
    out[k].meta["kind"] = to_string(kinds[k]);
    out[k].meta["aggregate"] = to_string(aggregate);
    out[k].meta["state"] = state_kind_name(state);
    out[k].meta["operators"] = "pauli_xyz";
  }
  const bool metric_diverges = want_metric && !(std::abs(eta_exp) > kDivergenceFloor);

  for (std::size_t ti = 0; ti < times.size(); ++ti) {
    if (ti > 0) {
      phi = plan.step.U * phi;
      psi = plan.step.U * psi;
      if (want_metric) e = step_inv_dag * e;
    }
    std::vector<Matrix> a_phi(3), a_e(3);
    std::vector<Complex> exp_a(3), exp_eta_a(3);
    for (std::size_t q = 0; q < 3; ++q) {
      a_phi[q] = linalg::apply_site_operator(paulis[q], a, shape, phi);
      exp_a[q] = inner(phi, a_phi[q]);
      if (want_metric) {
        a_e[q] = linalg::apply_site_operator(paulis[q], a, shape, e);
        exp_eta_a[q] = inner(a_e[q], phi);
      }
    }
    const Complex norm = inner(phi, phi);
    const bool schro_ok = std::abs(norm) > kDivergenceFloor;

    std::vector<std::vector<std::string>> cell_errors(b_sites.size());
    parallel_for(b_sites.size(), workers, [&](std::size_t j) {
      for (std::size_t k = 0; k < kinds.size(); ++k) {
        const CcKind kind = kinds[k];
        if (kind == CcKind::Schrodinger && !schro_ok) {
          std::ostringstream os;
          os << "VanishingTrajectory: <I(t)> = " << std::abs(norm) << " at t = " << times[ti];
          cell_errors[j].push_back(os.str());
          continue;
        }
        if (kind == CcKind::Metric && metric_diverges) {
          std::ostringstream os;
          os << "MetricDivergence: |<eta>| = " << std::abs(eta_exp);
          cell_errors[j].push_back(os.str());
          continue;
        }
        std::vector<Complex> vals;
        vals.reserve(9);
        for (std::size_t qa = 0; qa < 3; ++qa) {
          for (std::size_t qb = 0; qb < 3; ++qb) {
            const auto slot = qb * b_sites.size() + j;
            const auto blk = psi.middleCols(static_cast<Eigen::Index>(slot) * r, r);
            switch (kind) {
              case CcKind::Traditional:
                vals.push_back(inner(a_phi[qa], blk) - exp_a[qa] * exp_b[slot]);
                break;
              case CcKind::Schrodinger:
                vals.push_back(inner(a_phi[qa], blk) / norm -
                               exp_a[qa] * inner(phi, blk) / (norm * norm));
                break;
              case CcKind::Metric:
                vals.push_back(inner(a_e[qa], blk) / eta_exp -
                               exp_eta_a[qa] * exp_eta_b[slot] / (eta_exp * eta_exp));
                break;
            }
          }
        }
        const double v = aggregate_values(vals, aggregate);
        if (std::isfinite(v)) {
          out[k].values(static_cast<Eigen::Index>(ti), static_cast<Eigen::Index>(j)) = v;
        } else {
          std::ostringstream os;
          os << to_string(kind) << " CC is not finite at t = " << times[ti];
          cell_errors[j].push_back(os.str());
        }
      }
    });
    for (std::size_t j = 0; j < b_sites.size(); ++j) {
      for (const auto& msg : cell_errors[j]) {
        std::ostringstream os;
        os << "x=" << b_sites[j] << " t=" << times[ti] << ": " << msg;
        for (std::size_t k = 0; k < kinds.size(); ++k) {
          if (msg.find(to_string(kinds[k])) != std::string::npos ||
              (kinds[k] == CcKind::Schrodinger && msg.starts_with("Vanishing")) ||
              (kinds[k] == CcKind::Metric && msg.starts_with("Metric"))) {
            out[k].errors.push_back(os.str());
          }
        }
      }
    }
  }
  return out;
}

ScanGrid scan_cc(const QuasiHermitianModel& model, const StateKind& state, CcKind kind, std::size_t a,
                 const std::vector<std::size_t>& b_sites, const TimeGrid& grid, Aggregate aggregate,
                 std::size_t workers) {
  return std::move(scan_cc_kinds(model, state, {kind}, a, b_sites, grid, aggregate, workers).front());
}

ScanGrid scan_mi(const QuasiHermitianModel& model, const StateKind& state, std::size_t a,
                 const std::vector<std::size_t>& b_sites, const TimeGrid& grid, std::size_t workers) {
  check_sites(model, a, b_sites);
  const std::vector<double> times = grid.values();
  const SubsystemShape& shape = model.shape;
  const StepPlan plan = plan_steps(model, grid);
  ScanGrid out = empty_grid(b_sites, grid);
  out.meta = base_meta(model, a, grid, plan.mode);
  out.meta["scan"] = "mi";
  out.meta["state"] = state_kind_name(state);

  Matrix f = make_state_factor(state, shape);
  // Few columns: evolve the factor. Otherwise evolve ρ itself.
  const bool use_factor = f.cols() * 8 <= f.rows();
  Matrix rho;
  if (use_factor) {
    if (!plan.start_is_identity) f = plan.start.U * f;
  } else {
    rho = f * f.adjoint();
    if (!plan.start_is_identity) rho = plan.start.U * rho * plan.start.U_dag;
  }

  for (std::size_t ti = 0; ti < times.size(); ++ti) {
    if (ti > 0) {
      if (use_factor) {
        f = plan.step.U * f;
      } else {
        // ρ' = (Uρ)U† is Hermitian: form one triangle and mirror it.
        const Matrix w = plan.step.U * rho;
        rho.triangularView<Eigen::Lower>() = w * plan.step.U_dag;
        rho.triangularView<Eigen::StrictlyUpper>() = rho.adjoint();
      }
    }
    const double tr = use_factor ? f.squaredNorm() : rho.trace().real();
    if (!(tr > kTrajectoryFloor) || !std::isfinite(tr)) {
      std::ostringstream os;
      os << "t=" << times[ti] << ": VanishingTrajectory: Tr[rho(t)] = " << tr;
      out.errors.push_back(os.str());
      continue;
    }
    // Renormalize in place so the walk never drifts toward under- or overflow.
    if (use_factor) {
      f /= std::sqrt(tr);
    } else {
      rho /= tr;
    }
    auto reduced = [&](std::vector<std::size_t> keep) {
      std::sort(keep.begin(), keep.end());
      Matrix m = use_factor ? reduced_from_factor(f, shape, keep) : linalg::partial_trace(rho, shape, keep);
      return Matrix(0.5 * (m + m.adjoint()));
    };
    const double h_a = von_neumann_entropy(reduced({a}));
    std::vector<std::string> errs(b_sites.size());
    parallel_for(b_sites.size(), workers, [&](std::size_t j) {
      const std::size_t x = b_sites[j];
      double v;
      if (x == a) {
        v = h_a;
      } else {
        v = h_a + von_neumann_entropy(reduced({x})) - von_neumann_entropy(reduced({a, x}));
      }
      if (std::isfinite(v)) {
        out.values(static_cast<Eigen::Index>(ti), static_cast<Eigen::Index>(j)) = v;
      } else {
        errs[j] = "mutual information is not finite";
      }
    });
    for (std::size_t j = 0; j < b_sites.size(); ++j) {
      if (!errs[j].empty()) {
        std::ostringstream os;
        os << "x=" << b_sites[j] << " t=" << times[ti] << ": " << errs[j];
        out.errors.push_back(os.str());
      }
    }
  }
  return out;
}

CommutatorGrids scan_commutator_both(const QuasiHermitianModel& model, std::size_t a,
                                     const std::vector<std::size_t>& b_sites, const TimeGrid& grid,
                                     OperatorPicture picture, std::size_t workers) {
  check_sites(model, a, b_sites);
  const std::vector<double> times = grid.values();
  const SubsystemShape& shape = model.shape;
  const auto paulis = pauli::xyz();
  const StepPlan plan = plan_steps(model, grid);
  const bool tilde = picture == OperatorPicture::Tilde;

  CommutatorGrids out{empty_grid(b_sites, grid), empty_grid(b_sites, grid)};
  for (ScanGrid* g : {&out.normalized, &out.unnormalized}) {
    g->meta = base_meta(model, a, grid, plan.mode);
    g->meta["scan"] = "commutator";
    g->meta["picture"] = tilde ? "tilde" : "heisenberg";
    g->meta["operators"] = "pauli_xyz";
  }
  out.normalized.meta["normalize"] = true;
  out.unnormalized.meta["normalize"] = false;

  auto conj_by = [&](const Propagator& p, const Matrix& o) -> Matrix {
    return tilde ? Matrix(p.U_inv * o * p.U) : Matrix(p.U_dag * o * p.U);
  };
  std::vector<Matrix> ops(3);
  for (std::size_t q = 0; q < 3; ++q) {
    ops[q] = site_operator(paulis[q], a, shape);
    if (!plan.start_is_identity) ops[q] = conj_by(plan.start, ops[q]);
  }

  for (std::size_t ti = 0; ti < times.size(); ++ti) {
    if (ti > 0) {
      for (auto& o : ops) o = conj_by(plan.step, o);
    }
    std::vector<double> norms(3);
    std::vector<Matrix> adj(3);
    parallel_for(3, workers, [&](std::size_t q) {
      norms[q] = spectral_norm(ops[q]);
      adj[q] = ops[q].adjoint();
    });
    std::vector<std::string> errs(b_sites.size());
    parallel_for(b_sites.size(), workers, [&](std::size_t j) {
      const std::size_t x = b_sites[j];
      double sum_n = 0.0;
      double sum_u = 0.0;
      for (std::size_t qa = 0; qa < 3; ++qa) {
        for (std::size_t qb = 0; qb < 3; ++qb) {
          // [Õ, O_B] = Õ O_B − O_B Õ, with Õ O_B = (O_B Õ†)† for Hermitian O_B.
          const Matrix left = linalg::apply_site_operator(paulis[qb], x, shape, ops[qa]);
          const Matrix right = linalg::apply_site_operator(paulis[qb], x, shape, adj[qa]).adjoint();
          const double c = 0.5 * spectral_norm(right - left);
          sum_u += c;
          sum_n += norms[qa] > 0.0 ? c / norms[qa] : 0.0;
        }
      }
      const double vn = sum_n / 9.0;
      const double vu = sum_u / 9.0;
      if (std::isfinite(vn) && std::isfinite(vu)) {
        out.normalized.values(static_cast<Eigen::Index>(ti), static_cast<Eigen::Index>(j)) = vn;
        out.unnormalized.values(static_cast<Eigen::Index>(ti), static_cast<Eigen::Index>(j)) = vu;
      } else {
        errs[j] = "commutator norm is not finite";
      }
    });
    for (std::size_t j = 0; j < b_sites.size(); ++j) {
      if (!errs[j].empty()) {
        std::ostringstream os;
        os << "x=" << b_sites[j] << " t=" << times[ti] << ": " << errs[j];
        out.normalized.errors.push_back(os.str());
        out.unnormalized.errors.push_back(os.str());
      }
    }
  }
  return out;
}

ScanGrid scan_commutator(const QuasiHermitianModel& model, std::size_t a,
                         const std::vector<std::size_t>& b_sites, const TimeGrid& grid, bool normalize,
                         OperatorPicture picture, std::size_t workers) {
  CommutatorGrids both = scan_commutator_both(model, a, b_sites, grid, picture, workers);
  return normalize ? std::move(both.normalized) : std::move(both.unnormalized);
}

Restriction restrict_to_lightcone(const Matrix& o_t, std::size_t site, double l,
                                  const SubsystemShape& shape) {
  if (!(l >= 0.0)) throw std::invalid_argument("lightcone radius must be non-negative");
  if (site >= shape.sites()) throw ShapeError("site outside the chain");
  if (o_t.rows() != o_t.cols() || static_cast<std::size_t>(o_t.rows()) != shape.total_dim()) {
    throw ShapeError("operator does not match the shape");
  }
  std::vector<std::size_t> keep;
  std::vector<std::size_t> spacelike;
  for (std::size_t s = 0; s < shape.sites(); ++s) {
    const double dist = static_cast<double>(s > site ? s - site : site - s);
    (dist > l ? spacelike : keep).push_back(s);
  }
  Restriction r;
  if (spacelike.empty()) {
    r.restricted = o_t;
    return r;
  }
  const double d_s = static_cast<double>(shape.dim_of(spacelike));
  const Matrix reduced = linalg::partial_trace(o_t, shape, keep) / d_s;
  r.restricted = linalg::embed_operator(reduced, keep, shape);
  r.distance = linalg::operator_norm(o_t - r.restricted);
  return r;
}

void LrBoundParams::validate() const {
  for (double x : {c, v, xi, c_tilde, chi}) {
    if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("LR constants must be positive");
  }
}

std::string to_string(BoundKind k) {
  switch (k) {
    case BoundKind::Lr:
      return "lr";
    case BoundKind::CcLr:
      return "cc_lr";
    case BoundKind::CcLrUnequal:
      return "cc_lr_unequal";
    case BoundKind::MetricCcLr:
      return "metric_cc_lr";
    case BoundKind::DeltaRhoLr:
      return "delta_rho_lr";
    case BoundKind::MiLr:
      return "mi_lr";
    case BoundKind::CommutatorD1:
      return "commutator_d1";
    case BoundKind::EntanglingTime:
      return "entangling_time";
  }
  return "?";
}

BoundKind parse_bound_kind(const std::string& s) {
  for (BoundKind k : {BoundKind::Lr, BoundKind::CcLr, BoundKind::CcLrUnequal, BoundKind::MetricCcLr,
                      BoundKind::DeltaRhoLr, BoundKind::MiLr, BoundKind::CommutatorD1,
                      BoundKind::EntanglingTime}) {
    if (to_string(k) == s) return k;
  }
  throw std::invalid_argument("unknown bound '" + s + "'");
}

double eval_bound(BoundKind kind, const LrBoundParams& p, const BoundGeometry& g, const BoundExtras& x) {
  p.validate();
  const double cbar = p.c_bar(g.size_a, g.size_b);
  const double chi_p = p.chi_prime();
  const double n_min = std::min(g.size_a, g.size_b);
  switch (kind) {
    case BoundKind::Lr:
      return p.c * n_min * std::exp(-(g.L - p.v * g.t) / p.xi);
    case BoundKind::CcLr:
      return cbar * std::exp(-(g.L - 2.0 * p.v * g.t) / chi_p);
    case BoundKind::CcLrUnequal:
      return cbar * std::exp(-(g.L - p.v * (g.t + g.t2)) / chi_p);
    case BoundKind::MetricCcLr:
      return cbar * x.norm_hat_a * x.norm_hat_b * std::exp(-(g.L - p.v * (g.t + g.t2)) / chi_p);
    case BoundKind::DeltaRhoLr:
      return cbar * g.d_min * std::exp(-(g.L - 2.0 * p.v * g.t) / chi_p);
    case BoundKind::MiLr:
      return cbar * x.log_norm * g.d_min * std::exp(-(g.L - 2.0 * p.v * g.t) / chi_p);
    case BoundKind::CommutatorD1:
      return x.dyson_condition * x.norm_hat_a * x.norm_hat_b * p.c * n_min *
             std::exp(-(g.L - p.v * g.t) / p.xi);
    case BoundKind::EntanglingTime:
      if (!(x.cc_value > 0.0)) throw std::invalid_argument("entangling_time needs a positive CC value");
      return chi_p / (2.0 * p.v) * std::log(x.cc_value / (cbar * x.norm_hat_a * x.norm_hat_b)) +
             g.L / (2.0 * p.v);
  }
  throw std::invalid_argument("unknown bound kind");
}

UnequalTimeTerms cc_lr_unequal_terms(const LrBoundParams& p, const BoundGeometry& g) {
  p.validate();
  const double chi_p = p.chi_prime();
  UnequalTimeTerms u;
  u.l = (p.xi * g.L + p.chi * p.v * g.t + p.xi * p.v * (g.t - g.t2)) / chi_p;
  u.l_prime = (p.xi * g.L + p.chi * p.v * g.t2 + p.xi * p.v * (g.t2 - g.t)) / chi_p;
  u.total = p.c_tilde * std::exp(-(g.L - u.l - u.l_prime) / p.chi) +
            p.c * g.size_a * std::exp(-(u.l - p.v * g.t) / p.xi) +
            p.c * g.size_b * std::exp(-(u.l_prime - p.v * g.t2) / p.xi);
  return u;
}

std::vector<std::optional<double>> extract_front(const ScanGrid& grid, double threshold) {
  if (!(threshold > 0.0)) throw std::invalid_argument("front threshold must be positive");
  std::vector<std::optional<double>> front(grid.sites.size());
  for (Eigen::Index j = 0; j < grid.values.cols(); ++j) {
    for (Eigen::Index i = 0; i < grid.values.rows(); ++i) {
      const double v = grid.values(i, j);
      if (!std::isnan(v) && v >= threshold) {
        front[static_cast<std::size_t>(j)] = grid.times[static_cast<std::size_t>(i)];
        break;
      }
    }
  }
  return front;
}

bool front_is_monotone(const ScanGrid& grid, const std::vector<std::optional<double>>& front,
                       std::size_t a) {
  const double inf = std::numeric_limits<double>::infinity();
  auto dist = [&](std::size_t j) { return grid.sites[j] > a ? grid.sites[j] - a : a - grid.sites[j]; };
  for (std::size_t i = 0; i < front.size(); ++i) {
    for (std::size_t j = 0; j < front.size(); ++j) {
      if (dist(i) < dist(j) && front[i].value_or(inf) > front[j].value_or(inf)) return false;
    }
  }
  return true;
}

LrFit fit_lr_constants(const ScanGrid& grid, std::size_t a, double floor) {
  std::vector<std::array<double, 3>> rows;
  std::vector<double> rhs;
  for (Eigen::Index i = 0; i < grid.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < grid.values.cols(); ++j) {
      const double v = grid.values(i, j);
      if (!(v > floor) || !std::isfinite(v)) continue;
      const std::size_t x = grid.sites[static_cast<std::size_t>(j)];
      rows.push_back({1.0, static_cast<double>(x > a ? x - a : a - x), grid.times[static_cast<std::size_t>(i)]});
      rhs.push_back(std::log(v));
    }
  }
  LrFit fit;
  fit.samples = rows.size();
  if (rows.size() < 3) return fit;
  RealMatrix m(static_cast<Eigen::Index>(rows.size()), 3);
  RealVector y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (int c = 0; c < 3; ++c) m(static_cast<Eigen::Index>(k), c) = rows[k][static_cast<std::size_t>(c)];
    y(static_cast<Eigen::Index>(k)) = rhs[k];
  }
  const RealVector coef = m.colPivHouseholderQr().solve(y);
  fit.c = std::exp(coef(0));
  fit.xi = coef(1) < 0.0 ? -1.0 / coef(1) : std::numeric_limits<double>::infinity();
  fit.v = std::isfinite(fit.xi) ? coef(2) * fit.xi : 0.0;
  return fit;
}

}  // namespace nhlc
