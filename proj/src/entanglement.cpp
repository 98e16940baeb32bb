#include "nhlc/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "nhlc/correlators.hpp"
#include "nhlc/errors.hpp"
#include "nhlc/evolution.hpp"

namespace nhlc {

namespace {

Bipartition checked_cover(const Bipartition& bp, const SubsystemShape& shape) {
  Bipartition out = bp;
  std::sort(out.a.begin(), out.a.end());
  std::sort(out.b.begin(), out.b.end());
  if (out.a.empty() || out.b.empty()) throw ShapeError("bipartition sides must be nonempty");
  std::vector<std::size_t> all = out.a;
  all.insert(all.end(), out.b.begin(), out.b.end());
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
    throw ShapeError("bipartition sides overlap");
  }
  if (all.size() != shape.sites() || all.back() >= shape.sites()) {
    throw ShapeError("bipartition must cover every site of the state");
  }
  return out;
}

SubsystemShape sub_shape(const SubsystemShape& shape, std::span<const std::size_t> sites) {
  SubsystemShape s;
  for (std::size_t k : sites) s.dims.push_back(shape.dims[k]);
  return s;
}

// Restricts to A ∪ B and relabels the sites to positions in the sorted union.
struct Restricted {
  Matrix m;
  SubsystemShape shape;
  Bipartition bp;
};

Restricted restrict_to(const Matrix& m, const SubsystemShape& shape, const Bipartition& bp) {
  std::vector<std::size_t> all = bp.a;
  all.insert(all.end(), bp.b.begin(), bp.b.end());
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) throw ShapeError("A and B overlap");
  if (bp.a.empty() || bp.b.empty()) throw ShapeError("bipartition sides must be nonempty");
  Restricted r;
  r.m = all.size() == shape.sites() ? m : linalg::partial_trace(m, shape, all);
  r.shape = sub_shape(shape, all);
  auto pos = [&](std::size_t s) {
    return static_cast<std::size_t>(std::find(all.begin(), all.end(), s) - all.begin());
  };
  for (std::size_t s : bp.a) r.bp.a.push_back(pos(s));
  for (std::size_t s : bp.b) r.bp.b.push_back(pos(s));
  std::sort(r.bp.a.begin(), r.bp.a.end());
  std::sort(r.bp.b.begin(), r.bp.b.end());
  return r;
}

Matrix product_of_marginals(const Matrix& m, const SubsystemShape& shape, const Bipartition& bp) {
  const Matrix ma = linalg::partial_trace(m, shape, bp.a);
  const Matrix mb = linalg::partial_trace(m, shape, bp.b);
  return linalg::embed_product(ma, bp.a, mb, bp.b, shape);
}

Propagator identity_propagator(Eigen::Index d) {
  Propagator p;
  p.U = p.U_inv = p.U_dag = Matrix::Identity(d, d);
  return p;
}

Matrix random_gaussian(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

Matrix random_density(std::mt19937_64& rng, Eigen::Index d, double mix) {
  const Matrix g = random_gaussian(rng, d, d);
  Matrix r = g * g.adjoint();
  r /= r.trace().real();
  return (1.0 - mix) * r + mix * Matrix::Identity(d, d) / static_cast<double>(d);
}

Matrix random_pure_density(std::mt19937_64& rng, Eigen::Index d) {
  Vector v = random_gaussian(rng, d, 1).col(0);
  v /= v.norm();
  return v * v.adjoint();
}

// Σ_i |i⟩_A ⊗ V|i⟩_B / √min(d_A, d_B) with a random unitary V.
Matrix max_entangled_density(std::mt19937_64& rng, std::size_t d_a, std::size_t d_b) {
  const auto db = static_cast<Eigen::Index>(d_b);
  const Matrix v = Eigen::HouseholderQR<Matrix>(random_gaussian(rng, db, db)).householderQ();
  const std::size_t r = std::min(d_a, d_b);
  Vector psi = Vector::Zero(static_cast<Eigen::Index>(d_a * d_b));
  for (std::size_t i = 0; i < r; ++i) {
    psi.segment(static_cast<Eigen::Index>(i * d_b), db) += v.col(static_cast<Eigen::Index>(i));
  }
  psi /= psi.norm();
  return psi * psi.adjoint();
}


double realigned_rank_tol(double lmax) { return kSchmidtRankTolerance * lmax; }

}  // namespace

SchmidtDecomposition operator_schmidt(const Matrix& m, const SubsystemShape& shape,
                                      const Bipartition& bp_in) {
  if (m.rows() != m.cols() || static_cast<std::size_t>(m.rows()) != shape.total_dim()) {
    throw ShapeError("operator_schmidt: matrix does not match its shape");
  }
  const Bipartition bp = checked_cover(bp_in, shape);
  const SiteIndexMap amap(shape, bp.a);
  const SiteIndexMap bmap(shape, bp.b);
  const auto da = static_cast<Eigen::Index>(amap.dim());
  const auto db = static_cast<Eigen::Index>(bmap.dim());

  Matrix r(da * da, db * db);
  for (Eigen::Index a = 0; a < da; ++a) {
    for (Eigen::Index ap = 0; ap < da; ++ap) {
      for (Eigen::Index b = 0; b < db; ++b) {
        for (Eigen::Index bq = 0; bq < db; ++bq) {
          r(a * da + ap, b * db + bq) = m(static_cast<Eigen::Index>(amap[a] + bmap[b]),
                                          static_cast<Eigen::Index>(amap[ap] + bmap[bq]));
        }
      }
    }
  }
  const linalg::SvdResult dec = linalg::svd(r);

  SchmidtDecomposition s;
  s.shape_a = sub_shape(shape, bp.a);
  s.shape_b = sub_shape(shape, bp.b);
  const double lmax = dec.singular_values.size() ? dec.singular_values(0) : 0.0;
  for (Eigen::Index i = 0; i < dec.singular_values.size(); ++i) {
    const double l = dec.singular_values(i);
    if (!(l > realigned_rank_tol(lmax)) || l == 0.0) break;
    Matrix ga(da, da);
    Matrix gb(db, db);
    for (Eigen::Index a = 0; a < da; ++a) {
      for (Eigen::Index ap = 0; ap < da; ++ap) ga(a, ap) = dec.u(a * da + ap, i);
    }
    for (Eigen::Index b = 0; b < db; ++b) {
      for (Eigen::Index bq = 0; bq < db; ++bq) gb(b, bq) = dec.v_adjoint(i, b * db + bq);
    }
    s.lambdas.push_back(l);
    s.gamma_a.push_back(std::move(ga));
    s.gamma_b.push_back(std::move(gb));
  }
  s.rank = s.lambdas.size();
  return s;
}

SchmidtDecomposition operator_schmidt(const DensityState& rho, const Bipartition& bp) {
  return operator_schmidt(rho.matrix(), rho.shape(), bp);
}

Matrix schmidt_reconstruct(const SchmidtDecomposition& s, const SubsystemShape& shape,
                           const Bipartition& bp_in) {
  const Bipartition bp = checked_cover(bp_in, shape);
  const auto d = static_cast<Eigen::Index>(shape.total_dim());
  Matrix out = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < s.rank; ++i) {
    out += s.lambdas[i] * linalg::embed_product(s.gamma_a[i], bp.a, s.gamma_b[i], bp.b, shape);
  }
  return out;
}

namespace {

// Expands δ in its own Schmidt basis; C_i evaluated by `cc(Γ_A^{i†}, Γ_B^{i†})`.
template <class CcFn>
DeltaRhoReport schmidt_cc_report(Matrix delta, const SubsystemShape& shape, const Bipartition& bp,
                                 CcFn cc) {
  DeltaRhoReport rep;
  rep.schmidt = operator_schmidt(delta, shape, bp);
  rep.hs_norm = delta.norm();
  rep.delta_rho = std::move(delta);
  for (std::size_t i = 0; i < rep.schmidt.rank; ++i) {
    rep.cc_values.push_back(cc(rep.schmidt.gamma_a[i].adjoint(), rep.schmidt.gamma_b[i].adjoint()));
  }
  return rep;
}

}  // namespace

DeltaRhoReport delta_rho_analysis(const DensityState& rho, const Bipartition& bp_in) {
  const SubsystemShape& shape = rho.shape();
  const Bipartition bp = checked_cover(bp_in, shape);
  const Matrix& m = rho.matrix();
  const auto id_a = Matrix::Identity(static_cast<Eigen::Index>(shape.dim_of(bp.a)),
                                     static_cast<Eigen::Index>(shape.dim_of(bp.a)));
  const auto id_b = Matrix::Identity(static_cast<Eigen::Index>(shape.dim_of(bp.b)),
                                     static_cast<Eigen::Index>(shape.dim_of(bp.b)));
  auto cc = [&](const Matrix& x, const Matrix& y) {
    const Matrix xa = linalg::embed_product(x, bp.a, id_b, bp.b, shape);
    const Matrix yb = linalg::embed_product(id_a, bp.a, y, bp.b, shape);
    return equal_time_cc(m, xa, yb);
  };
  return schmidt_cc_report(m - product_of_marginals(m, shape, bp), shape, bp, cc);
}

DeltaRhoReport delta_sigma_analysis(const DensityState& rho, const Matrix& eta, const Bipartition& bp_in) {
  const SubsystemShape& shape = rho.shape();
  const Bipartition bp = checked_cover(bp_in, shape);
  const SigmaState sigma = sigma_state(rho.matrix(), eta);
  const Propagator p0 = identity_propagator(eta.rows());
  const auto id_a = Matrix::Identity(static_cast<Eigen::Index>(shape.dim_of(bp.a)),
                                     static_cast<Eigen::Index>(shape.dim_of(bp.a)));
  const auto id_b = Matrix::Identity(static_cast<Eigen::Index>(shape.dim_of(bp.b)),
                                     static_cast<Eigen::Index>(shape.dim_of(bp.b)));
  auto cc = [&](const Matrix& x, const Matrix& y) {
    const Matrix xa = linalg::embed_product(x, bp.a, id_b, bp.b, shape);
    const Matrix yb = linalg::embed_product(id_a, bp.a, y, bp.b, shape);
    return metric_cc(rho.matrix(), eta, xa, yb, p0, p0);
  };
  return schmidt_cc_report(sigma.matrix - product_of_marginals(sigma.matrix, shape, bp), shape, bp, cc);
}

std::vector<Matrix> hermitian_operator_basis(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  std::vector<Matrix> basis;
  basis.push_back(Matrix::Identity(n, n) / std::sqrt(static_cast<double>(d)));
  const double r2 = 1.0 / std::sqrt(2.0);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j + 1; k < n; ++k) {
      Matrix s = Matrix::Zero(n, n);
      s(j, k) = s(k, j) = r2;
      basis.push_back(s);
      Matrix a = Matrix::Zero(n, n);
      a(j, k) = Complex(0.0, -r2);
      a(k, j) = Complex(0.0, r2);
      basis.push_back(a);
    }
  }
  for (Eigen::Index l = 1; l < n; ++l) {
    Matrix g = Matrix::Zero(n, n);
    const double c = 1.0 / std::sqrt(static_cast<double>(l * (l + 1)));
    for (Eigen::Index j = 0; j < l; ++j) g(j, j) = c;
    g(l, l) = -static_cast<double>(l) * c;
    basis.push_back(g);
  }
  return basis;
}

ProductBasisReport delta_rho_product_basis(const DensityState& rho, const Bipartition& bp_in) {
  const SubsystemShape& shape = rho.shape();
  const Bipartition bp = checked_cover(bp_in, shape);
  const std::size_t da = shape.dim_of(bp.a);
  const std::size_t db = shape.dim_of(bp.b);
  const auto ba = hermitian_operator_basis(da);
  const auto bb = hermitian_operator_basis(db);
  const Matrix id_a = Matrix::Identity(static_cast<Eigen::Index>(da), static_cast<Eigen::Index>(da));
  const Matrix id_b = Matrix::Identity(static_cast<Eigen::Index>(db), static_cast<Eigen::Index>(db));
  std::vector<Matrix> xa, yb;
  for (const Matrix& x : ba) xa.push_back(linalg::embed_product(x.adjoint(), bp.a, id_b, bp.b, shape));
  for (const Matrix& y : bb) yb.push_back(linalg::embed_product(id_a, bp.a, y.adjoint(), bp.b, shape));
  ProductBasisReport rep;
  rep.coefficients.resize(static_cast<Eigen::Index>(ba.size()), static_cast<Eigen::Index>(bb.size()));
  for (std::size_t i = 0; i < xa.size(); ++i) {
    for (std::size_t j = 0; j < yb.size(); ++j) {
      rep.coefficients(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          equal_time_cc(rho.matrix(), xa[i], yb[j]);
    }
  }
  rep.hs_norm = rep.coefficients.norm();
  return rep;
}

double von_neumann_entropy(const Matrix& rho) {
  const RealVector ev = linalg::hermitian_eigenvalues(rho);
  double h = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const double l = ev(i);
    if (l > 0.0) h -= l * std::log(l);
  }
  return h;
}

double mutual_information(const DensityState& rho, const Bipartition& bp) {
  const Restricted r = restrict_to(rho.matrix(), rho.shape(), bp);
  const Matrix ra = linalg::partial_trace(r.m, r.shape, r.bp.a);
  const Matrix rb = linalg::partial_trace(r.m, r.shape, r.bp.b);
  return von_neumann_entropy(ra) + von_neumann_entropy(rb) - von_neumann_entropy(r.m);
}

MiBound mi_bound(const DensityState& rho, const Bipartition& bp) {
  const Restricted r = restrict_to(rho.matrix(), rho.shape(), bp);
  const RealVector ev = linalg::hermitian_eigenvalues(r.m);
  if (ev(0) <= 1e-12) {
    std::ostringstream os;
    os << "reduced state has eigenvalue " << ev(0);
    throw NotFullRank(os.str());
  }
  const RealVector logs = ev.array().log();
  MiBound out;
  out.log_k_star = -logs.mean();
  out.k_star = std::exp(out.log_k_star);
  out.log_norm = (logs.array() + out.log_k_star).matrix().norm();
  out.delta_rho_norm = (r.m - product_of_marginals(r.m, r.shape, r.bp)).norm();
  out.bound = out.log_norm * out.delta_rho_norm;
  return out;
}

MetricDecompositionCheck metric_cc_decomposition_check(const DensityState& rho, const Bipartition& bp_in,
                                                       const Matrix& eta_a_in, const Matrix& eta_b_in,
                                                       const Matrix& o_a, const Matrix& o_b) {
  const SubsystemShape& shape = rho.shape();
  const Bipartition bp = checked_cover(bp_in, shape);
  const Matrix& m = rho.matrix();
  const auto da = static_cast<Eigen::Index>(shape.dim_of(bp.a));
  const auto db = static_cast<Eigen::Index>(shape.dim_of(bp.b));
  if (eta_a_in.rows() != da || eta_b_in.rows() != db || o_a.rows() != da || o_b.rows() != db) {
    throw ShapeError("metric decomposition operand dimensions");
  }
  const Matrix id_a = Matrix::Identity(da, da);
  const Matrix id_b = Matrix::Identity(db, db);
  auto embed = [&](const Matrix& x, const Matrix& y) { return linalg::embed_product(x, bp.a, y, bp.b, shape); };

  const Complex raw = trace_product(m, embed(eta_a_in, eta_b_in));
  if (!(std::abs(raw) > kDivergenceFloor)) throw MetricDivergence("<eta_A eta_B> vanishes");
  MetricDecompositionCheck out;
  out.eta_scale = 1.0 / std::abs(raw);
  // Split the rescaling evenly; ⟨η⟩ = 1 afterwards up to the phase of `raw`.
  const Complex half = 1.0 / std::sqrt(raw);
  const Matrix eta_a = half * eta_a_in;
  const Matrix eta_b = half * eta_b_in;
  const Matrix eta = embed(eta_a, eta_b);
  const Matrix ia = eta_a.inverse();
  const Matrix ib = eta_b.inverse();
  const Propagator p0 = identity_propagator(m.rows());

  auto ex = [&](const Matrix& x, const Matrix& y) { return trace_product(m, embed(x, y)); };
  auto mcc = [&](const Matrix& x, const Matrix& y) {
    return metric_cc(m, eta, embed(x, id_b), embed(id_a, y), p0, p0);
  };

  const Complex lhs = ex(o_a, o_b) - ex(o_a, id_b) * ex(id_a, o_b);
  const Complex aux = mcc(ia, ib);
  const Complex rhs = mcc(ia * o_a, ib * o_b) + ex(o_a, eta_b) * ex(eta_a, o_b) * aux -
                      mcc(ia * o_a, ib) * ex(id_a, o_b) -
                      ex(o_a, eta_b) * ex(eta_a, id_b) * mcc(ia, ib * o_b);
  out.residual = std::abs(lhs - rhs);
  out.auxiliary_residual = std::abs(1.0 - ex(eta_a, id_b) * ex(id_a, eta_b) - aux);
  return out;
}

MembershipReport sigma_product_membership(const DensityState& rho, const Matrix& eta, const Matrix& H,
                                          const Tripartition& parts, std::span<const double> times) {
  const SubsystemShape& shape = rho.shape();
  Bipartition ab{parts.a, parts.b};
  std::vector<std::size_t> all = parts.a;
  all.insert(all.end(), parts.b.begin(), parts.b.end());
  all.insert(all.end(), parts.c.begin(), parts.c.end());
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end() || all.size() != shape.sites() ||
      all.back() >= shape.sites()) {
    throw ShapeError("tripartition must split the sites into disjoint sets");
  }

  MembershipReport rep;
  rep.pseudo_hermitian_residual = verify_pseudo_hermitian(H, eta);
  rep.pseudo_hermitian = rep.pseudo_hermitian_residual <= 1e-10;
  const Evolver ev(H);
  bool all_product = true;
  for (double t : times) {
    const DensityState rt = evolve_state(rho, ev.at(t));
    const SigmaState sigma = sigma_state(rt.matrix(), eta);
    const Restricted r = restrict_to(sigma.matrix, shape, ab);
    const double dn = (r.m - product_of_marginals(r.m, r.shape, r.bp)).norm();
    rep.times.push_back(t);
    rep.delta_sigma_norms.push_back(dn);
    rep.sigma_product.push_back(dn <= kProductTolerance);
    all_product = all_product && dn <= kProductTolerance;
  }
  rep.trivial = all_product && rep.pseudo_hermitian;
  return rep;
}

TripartiteExample tripartite_example(std::size_t d_a, std::size_t d_b, std::size_t d_c,
                                    std::uint64_t seed, double epsilon, const TripartiteOptions& opts) {
  if (d_c < 2) throw ShapeError("tripartite_example needs d_C >= 2");
  if (d_a < 1 || d_b < 1) throw ShapeError("tripartite_example needs nonempty A and B");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be non-negative");
  std::mt19937_64 rng(seed);
  const auto nc = static_cast<Eigen::Index>(d_c);
  const auto nab = static_cast<Eigen::Index>(d_a * d_b);

  // O_C > 0 in a random basis with eigenvalues spread geometrically over two decades.
  // A small lowest eigenvalue keeps the negative part of Γ_C² small, which leaves room
  // for a large entangled weight a₂.
  const Matrix basis = Eigen::HouseholderQR<Matrix>(random_gaussian(rng, nc, nc)).householderQ();
  RealVector spectrum(nc);
  for (Eigen::Index i = 0; i < nc; ++i) spectrum(i) = std::pow(1e-2, static_cast<double>(i) / static_cast<double>(nc - 1));
  Matrix o_c = basis * spectrum.cast<Complex>().asDiagonal() * basis.adjoint();
  o_c = 0.5 * (o_c + o_c.adjoint());

  // Gram-Schmidt on {O_C, I, Gell-Mann...} in the Hilbert-Schmidt inner product.
  std::vector<Matrix> candidates{o_c, Matrix::Identity(nc, nc)};
  for (const Matrix& g : hermitian_operator_basis(d_c)) candidates.push_back(g);
  std::vector<Matrix> gamma;
  for (const Matrix& c : candidates) {
    Matrix v = c;
    for (const Matrix& g : gamma) v -= trace_product(g.adjoint(), v) * g;
    const double nrm = v.norm();
    if (nrm < 1e-8) continue;
    v /= nrm;
    gamma.push_back(0.5 * (v + v.adjoint()));
    if (gamma.size() == static_cast<std::size_t>(nc * nc)) break;
  }
  if (gamma.size() != static_cast<std::size_t>(nc * nc) || gamma.size() < 2) {
    throw NumericalError("Gram-Schmidt did not produce a complete operator basis");
  }

  const Matrix rho_a = random_density(rng, static_cast<Eigen::Index>(d_a), 0.8);
  const Matrix rho_b = random_density(rng, static_cast<Eigen::Index>(d_b), 0.8);
  const Matrix rho1 = linalg::kron(rho_a, rho_b);
  std::vector<Matrix> rho_k(gamma.size());
  rho_k[1] = max_entangled_density(rng, d_a, d_b);
  for (std::size_t k = 2; k < gamma.size(); ++k) rho_k[k] = random_pure_density(rng, nab);

  const double tr1 = gamma[0].trace().real();
  const double tr2 = gamma[1].trace().real();  // > 0: Γ_C² is the part of I orthogonal to O_C
  auto build = [&](double eps, double a2) {
    const double a1 = (1.0 - a2 * tr2) / tr1;
    Matrix r = a1 * linalg::kron(rho1, gamma[0]);
    if (a2 != 0.0) r += a2 * linalg::kron(rho_k[1], gamma[1]);
    for (std::size_t k = 2; k < gamma.size(); ++k) r += eps * linalg::kron(rho_k[k], gamma[k]);
    return Matrix(0.5 * (r + r.adjoint()));
  };
  auto min_eig = [](const Matrix& r) { return linalg::hermitian_eigenvalues(r)(0); };

  std::vector<double> tries{epsilon};
  for (double e : opts.epsilon_fallbacks) {
    if (e < epsilon) tries.push_back(e);
  }
  TripartiteExample ex;
  bool found = false;
  double last_min = 0.0;
  for (double eps : tries) {
    last_min = min_eig(build(eps, 0.0));
    if (last_min < 0.0) continue;
    // Largest a₂ keeping ρ ≥ 0, found by bisection, then backed off by 10%.
    double a2 = 0.0;
    if (opts.entangled_second_term) {
      double lo = 0.0, hi = 1.0 / tr2;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (min_eig(build(eps, mid)) >= 0.0 ? lo : hi) = mid;
      }
      a2 = 0.9 * lo;
    }
    const Matrix r = build(eps, a2);
    ex.rho = r / r.trace().real();
    ex.epsilon = eps;
    ex.a2 = a2;
    ex.min_eigenvalue = min_eig(r);
    found = true;
    break;
  }
  if (!found) {
    std::ostringstream os;
    os << "no epsilon in the search grid gives a positive state (last min eigenvalue " << last_min << ")";
    throw PositivityFailure(os.str());
  }

  ex.shape = SubsystemShape{{d_a, d_b, d_c}};
  ex.parts = Tripartition{{0}, {1}, {2}};
  ex.gamma_c = gamma;
  ex.eta_c = gamma[0];
  ex.eta = linalg::kron(Matrix::Identity(nab, nab), ex.eta_c);
  const Matrix k = random_gaussian(rng, nc, nc);
  const Matrix herm = 0.5 * (k + k.adjoint());
  ex.H_C = ex.eta_c.inverse() * herm;
  ex.H = linalg::kron(Matrix::Identity(nab, nab), ex.H_C);

  const auto ba = hermitian_operator_basis(d_a);
  const auto bb = hermitian_operator_basis(d_b);
  const Propagator p0 = identity_propagator(ex.rho.rows());
  const std::size_t a_site[] = {0};
  const std::size_t b_site[] = {1};
  for (const Matrix& x : ba) {
    const Matrix xa = linalg::embed_operator(x, a_site, ex.shape);
    for (const Matrix& y : bb) {
      const Matrix yb = linalg::embed_operator(y, b_site, ex.shape);
      ex.max_metric_cc = std::max(ex.max_metric_cc, std::abs(metric_cc(ex.rho, ex.eta, xa, yb, p0, p0)));
    }
  }
  const std::size_t ab_sites[] = {0, 1};
  const Matrix rho_ab = linalg::partial_trace(ex.rho, ex.shape, ab_sites);
  const SubsystemShape ab_shape{{d_a, d_b}};
  ex.delta_rho_ab_norm = (rho_ab - product_of_marginals(rho_ab, ab_shape, Bipartition{{0}, {1}})).norm();
  for (const Matrix& g : gamma) {
    const Matrix dg = ex.H_C * g - g * ex.H_C.adjoint();
    ex.max_c1k = std::max(ex.max_c1k, std::abs(trace_product(gamma[0].adjoint(), dg)));
  }
  return ex;
}

}  // namespace nhlc
