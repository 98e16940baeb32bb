#include "nhlc/correlators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "nhlc/errors.hpp"
#include "nhlc/states.hpp"

namespace nhlc {

namespace {

void check_square(const Matrix& rho, const Matrix& o) {
  if (rho.rows() != rho.cols() || o.rows() != rho.rows() || o.cols() != rho.cols()) {
    throw ShapeError("operator and state dimensions differ");
  }
}

Complex checked_norm(Complex n, const char* what, double t) {
  if (!(std::abs(n) > kDivergenceFloor)) {
    std::ostringstream os;
    os << what << " = " << std::abs(n) << " at t = " << t;
    throw VanishingTrajectory(os.str());
  }
  return n;
}

Complex checked_eta(const Matrix& rho, const Matrix& eta) {
  check_square(rho, eta);
  const Complex e = trace_product(rho, eta);
  if (!(std::abs(e) > kDivergenceFloor)) {
    std::ostringstream os;
    os << "|Tr[rho eta]| = " << std::abs(e);
    throw MetricDivergence(os.str());
  }
  return e;
}

}  // namespace

std::string to_string(CcKind k) {
  switch (k) {
    case CcKind::Traditional:
      return "traditional";
    case CcKind::Schrodinger:
      return "schrodinger";
    case CcKind::Metric:
      return "metric";
  }
  return "?";
}

CcKind parse_cc_kind(const std::string& s) {
  if (s == "traditional") return CcKind::Traditional;
  if (s == "schrodinger") return CcKind::Schrodinger;
  if (s == "metric") return CcKind::Metric;
  throw std::invalid_argument("unknown correlator kind '" + s + "'");
}

Complex expectation(const Matrix& rho, const Matrix& O) {
  check_square(rho, O);
  return trace_product(rho, O);
}

Complex equal_time_cc(const Matrix& rho, const Matrix& O1, const Matrix& O2) {
  check_square(rho, O1);
  check_square(rho, O2);
  return trace_product(rho, O1 * O2) - trace_product(rho, O1) * trace_product(rho, O2);
}

Complex traditional_cc(const Matrix& rho, const Matrix& O1, const Matrix& O2, const Propagator& p1,
                       const Propagator& p2) {
  check_square(rho, O1);
  check_square(rho, O2);
  const Matrix a = p1.U_dag * O1 * p1.U;
  const Matrix b = p2.U_dag * O2 * p2.U;
  return trace_product(rho, a * b) - trace_product(rho, a) * trace_product(rho, b);
}

Complex traditional_cc(const Matrix& rho, const Matrix& O1, const Matrix& O2, double t, double t2,
                       const Evolver& ev) {
  const Propagator p1 = ev.at(t);
  return traditional_cc(rho, O1, O2, p1, t2 == t ? p1 : ev.at(t2));
}

Complex schrodinger_cc(const Matrix& rho, const Matrix& O1, const Matrix& O2, const Propagator& p1,
                       const Propagator& p2) {
  check_square(rho, O1);
  check_square(rho, O2);
  const Matrix idt = p1.U_dag * p1.U;
  const Complex n = checked_norm(trace_product(rho, idt), "<I(t)>", p1.t);
  const Matrix a = p1.U_dag * O1 * p1.U;
  const Matrix b = p2.U_inv * O2 * p2.U;
  return trace_product(rho, a * b) / n - trace_product(rho, a) * trace_product(rho, idt * b) / (n * n);
}

Complex schrodinger_cc(const Matrix& rho, const Matrix& O1, const Matrix& O2, double t, double t2,
                       const Evolver& ev) {
  const Propagator p1 = ev.at(t);
  return schrodinger_cc(rho, O1, O2, p1, t2 == t ? p1 : ev.at(t2));
}

SigmaState sigma_state(const Matrix& rho, const Matrix& eta) {
  const Complex e = checked_eta(rho, eta);
  return {rho * eta / e, e};
}

Complex metric_cc(const Matrix& rho, const Matrix& eta, const Matrix& O1, const Matrix& O2,
                  const Propagator& p1, const Propagator& p2) {
  check_square(rho, O1);
  check_square(rho, O2);
  const Complex e = checked_eta(rho, eta);
  const Matrix re = rho * eta;
  const Matrix a = p1.U_inv * O1 * p1.U;
  const Matrix b = p2.U_inv * O2 * p2.U;
  return trace_product(re, a * b) / e - trace_product(re, a) * trace_product(re, b) / (e * e);
}

Complex metric_cc(const Matrix& rho, const Matrix& eta, const Matrix& O1, const Matrix& O2, double t,
                  double t2, const Evolver& ev) {
  const Propagator p1 = ev.at(t);
  return metric_cc(rho, eta, O1, O2, p1, t2 == t ? p1 : ev.at(t2));
}

Complex metric_cc_dyson_route(const Matrix& rho, const QuasiHermitianModel& model, const Matrix& O1,
                              const Matrix& O2, double t, double t2) {
  check_square(rho, O1);
  check_square(rho, O2);
  const Complex e = checked_eta(rho, model.eta);
  const Matrix sigma_hat = model.S_inv * rho * model.S_inv / e;
  const Evolver v(model.H0);
  const Propagator v1 = v.at(t);
  const Propagator v2 = t2 == t ? v1 : v.at(t2);
  const Matrix a = v1.U_dag * (model.S_inv * O1 * model.S) * v1.U;
  const Matrix b = v2.U_dag * (model.S_inv * O2 * model.S) * v2.U;
  return trace_product(sigma_hat, a * b) -
         trace_product(sigma_hat, a) * trace_product(sigma_hat, b);
}

Complex connected_correlator(CcKind kind, const Matrix& rho, const Matrix* eta, const Matrix& O1,
                             const Matrix& O2, const Propagator& p1, const Propagator& p2) {
  switch (kind) {
    case CcKind::Traditional:
      return traditional_cc(rho, O1, O2, p1, p2);
    case CcKind::Schrodinger:
      return schrodinger_cc(rho, O1, O2, p1, p2);
    case CcKind::Metric:
      if (eta == nullptr) throw std::invalid_argument("metric CC needs a metric");
      return metric_cc(rho, *eta, O1, O2, p1, p2);
  }
  throw std::invalid_argument("unknown correlator kind");
}

std::vector<Partition> set_partitions(std::size_t n) {
  if (n > 6) throw TooManyParts("set_partitions supports n <= 6, got " + std::to_string(n));
  std::vector<Partition> out;
  if (n == 0) return out;
  // Restricted growth strings a[0] = 0, a[i] ≤ 1 + max(a[0..i−1]), in lexicographic order.
  std::vector<std::size_t> a(n, 0);
  while (true) {
    std::size_t blocks = 0;
    for (std::size_t v : a) blocks = std::max(blocks, v + 1);
    Partition p(blocks);
    for (std::size_t i = 0; i < n; ++i) p[a[i]].push_back(i);
    out.push_back(std::move(p));

    bool advanced = false;
    for (std::size_t i = n; i-- > 1;) {
      std::size_t prefix_max = 0;
      for (std::size_t j = 0; j < i; ++j) prefix_max = std::max(prefix_max, a[j]);
      if (a[i] <= prefix_max) {
        ++a[i];
        for (std::size_t j = i + 1; j < n; ++j) a[j] = 0;
        advanced = true;
        break;
      }
    }
    if (!advanced) break;
  }
  return out;
}

double partition_weight(std::size_t blocks) {
  if (blocks == 0) throw std::invalid_argument("partition with no blocks");
  double f = 1.0;
  for (std::size_t k = 2; k < blocks; ++k) f *= static_cast<double>(k);
  return (blocks % 2 == 1) ? f : -f;
}

Complex npartite_cc(CcKind kind, const Matrix& rho, std::span<const TimedOperator> ops,
                    const Evolver& ev, const Matrix* eta) {
  const std::size_t n = ops.size();
  if (n < 1) throw std::invalid_argument("npartite_cc needs operators");
  if (n > 6) throw TooManyParts("npartite_cc supports n <= 6, got " + std::to_string(n));
  for (const auto& o : ops) check_square(rho, o.op);

  std::map<double, Propagator> props;
  for (const auto& o : ops) {
    if (!props.contains(o.t)) props.emplace(o.t, ev.at(o.t));
  }

  std::vector<Matrix> x(n);
  Matrix weighted;  // ρ or ρη
  Complex norm = 1.0;
  Matrix lead;      // I(t₁) for the Schrödinger kind
  switch (kind) {
    case CcKind::Traditional:
      for (std::size_t i = 0; i < n; ++i) {
        const auto& p = props.at(ops[i].t);
        x[i] = p.U_dag * ops[i].op * p.U;
      }
      weighted = rho;
      break;
    case CcKind::Schrodinger: {
      const auto& p1 = props.at(ops[0].t);
      x[0] = p1.U_dag * ops[0].op * p1.U;
      for (std::size_t i = 1; i < n; ++i) {
        const auto& p = props.at(ops[i].t);
        x[i] = p.U_inv * ops[i].op * p.U;
      }
      lead = p1.U_dag * p1.U;
      norm = checked_norm(trace_product(rho, lead), "<I(t1)>", p1.t);
      weighted = rho;
      break;
    }
    case CcKind::Metric:
      if (eta == nullptr) throw std::invalid_argument("metric CC needs a metric");
      norm = checked_eta(rho, *eta);
      for (std::size_t i = 0; i < n; ++i) {
        const auto& p = props.at(ops[i].t);
        x[i] = p.U_inv * ops[i].op * p.U;
      }
      weighted = rho * *eta;
      break;
  }

  // Normalized moment of every nonempty subset, indexed by bit mask.
  std::vector<Complex> moment(std::size_t{1} << n);
  for (std::size_t mask = 1; mask < moment.size(); ++mask) {
    Matrix prod;
    bool started = false;
    if (kind == CcKind::Schrodinger && !(mask & 1U)) {
      prod = lead;
      started = true;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!(mask & (std::size_t{1} << i))) continue;
      prod = started ? Matrix(prod * x[i]) : x[i];
      started = true;
    }
    moment[mask] = trace_product(weighted, prod) / norm;
  }

  Complex total = 0.0;
  for (const Partition& p : set_partitions(n)) {
    Complex term = partition_weight(p.size());
    for (const auto& block : p) {
      std::size_t mask = 0;
      for (std::size_t i : block) mask |= std::size_t{1} << i;
      term *= moment[mask];
    }
    total += term;
  }
  return total;
}

std::string to_string(ThermalCandidate c) {
  switch (c) {
    case ThermalCandidate::NhGibbs:
      return "nh_gibbs";
    case ThermalCandidate::DysonGibbs:
      return "dyson_gibbs";
    case ThermalCandidate::MetricGibbs:
      return "metric_gibbs";
  }
  return "?";
}

Matrix thermal_candidate(const QuasiHermitianModel& model, double beta, ThermalCandidate c) {
  // e^{−βH} = S e^{−βH₀} S⁻¹, evaluated spectrally through H₀.
  const Matrix g0 = linalg::matrix_exponential(-beta * model.H0);
  Matrix out;
  switch (c) {
    case ThermalCandidate::NhGibbs:
      out = model.S * g0 * model.S_inv;
      break;
    case ThermalCandidate::DysonGibbs:
      out = model.S_inv * g0 * model.S_inv;
      break;
    case ThermalCandidate::MetricGibbs:
      out = model.eta * (model.S * g0 * model.S_inv);
      break;
  }
  const Complex tr = out.trace();
  if (!(std::abs(tr) > kDivergenceFloor)) throw VanishingTrajectory("thermal candidate trace vanishes");
  return out / tr;
}

Complex schrodinger_correlator(const Matrix& rho, const Matrix& O1, const Matrix& O2, double t,
                               double t2, const Evolver& ev) {
  check_square(rho, O1);
  check_square(rho, O2);
  const Propagator pt = ev.at(t);
  const Propagator pd = ev.at(t - t2);
  const Propagator p2 = ev.at(t2);
  const Complex n = checked_norm(trace_product(rho, pt.U_dag * pt.U), "<I(t)>", t);
  return trace_product(rho, pt.U_dag * O1 * pd.U * O2 * p2.U) / n;
}

double thermal_invariance_residual(const QuasiHermitianModel& model, double beta,
                                   ThermalCandidate candidate, const Matrix& O_A, const Matrix& O_B,
                                   double t, double t2) {
  const Matrix rho = thermal_candidate(model, beta, candidate);
  const Evolver ev(model);
  const Complex lhs = schrodinger_correlator(rho, O_A, O_B, t, t2, ev);
  const Complex rhs = schrodinger_correlator(rho, O_A, O_B, 0.0, t2 - t, ev);
  return std::abs(lhs - rhs);
}

}  // namespace nhlc
