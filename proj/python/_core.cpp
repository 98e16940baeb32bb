#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "nhlc/checks.hpp"
#include "nhlc/config.hpp"
#include "nhlc/correlators.hpp"
#include "nhlc/entanglement.hpp"
#include "nhlc/errors.hpp"
#include "nhlc/evolution.hpp"
#include "nhlc/runner.hpp"

namespace py = pybind11;
using namespace nhlc;

namespace {

TfimParams params(std::size_t n, double J, double g, double h, double gamma) {
  TfimParams p;
  p.n = n;
  p.J = J;
  p.g = g;
  p.h = h;
  p.gamma = gamma;
  return p;
}

StateKind parse_state(const std::string& kind, std::uint64_t seed, double beta, const std::optional<Matrix>& h) {
  if (kind == "plus_product") return state_kind::PlusProduct{};
  if (kind == "ghz") return state_kind::Ghz{};
  if (kind == "random_pure") return state_kind::RandomPure{seed};
  if (kind == "random_full_rank") return state_kind::RandomFullRank{seed};
  if (kind == "local_gibbs") {
    if (!h) throw std::invalid_argument("local_gibbs needs a single-site h");
    return state_kind::LocalGibbs{*h, beta};
  }
  throw std::invalid_argument("unknown state kind '" + kind + "'");
}

py::dict grid_dict(const ScanGrid& g) {
  py::dict d;
  d["sites"] = g.sites;
  d["times"] = g.times;
  d["values"] = g.values;
  d["errors"] = g.errors;
  d["meta"] = g.meta.dump();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Correlation lightcones of non-Hermitian spin chains";

  static py::exception<NumericalError> numerical(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<PTBroken>(m, "PTBroken", numerical.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("pauli", [](const std::string& which) {
    if (which == "x") return pauli::x();
    if (which == "y") return pauli::y();
    if (which == "z") return pauli::z();
    if (which == "i") return pauli::identity();
    throw std::invalid_argument("pauli: expected one of i, x, y, z");
  });

  m.def("site_operator",
        [](const Matrix& op, std::size_t site, std::size_t n) {
          return site_operator(op, site, SubsystemShape::qubits(n));
        },
        py::arg("op"), py::arg("site"), py::arg("n"));

  py::class_<QuasiHermitianModel>(m, "Model")
      .def_readonly("H", &QuasiHermitianModel::H)
      .def_readonly("H0", &QuasiHermitianModel::H0)
      .def_readonly("S", &QuasiHermitianModel::S)
      .def_readonly("S_inv", &QuasiHermitianModel::S_inv)
      .def_readonly("eta", &QuasiHermitianModel::eta)
      .def_property_readonly("n", [](const QuasiHermitianModel& q) { return q.params.n; })
      .def_property_readonly("gamma", [](const QuasiHermitianModel& q) { return q.params.gamma; })
      .def("dyson_condition", &QuasiHermitianModel::dyson_condition)
      .def("pseudo_hermiticity_residual", [](const QuasiHermitianModel& q) { return verify_pseudo_hermitian(q.H, q.eta); })
      .def("dyson_residual", [](const QuasiHermitianModel& q) { return dyson_residual(q); });

  m.def("tfim", [](std::size_t n, double J, double g, double h, double gamma) {
          return build_quasi_hermitian(params(n, J, g, h, gamma));
        },
        py::arg("n"), py::arg("J") = 0.95, py::arg("g") = 1.0, py::arg("h") = 0.5, py::arg("gamma") = 0.0);

  m.def("state",
        [](const std::string& kind, std::size_t n, std::uint64_t seed, double beta, std::optional<Matrix> h) {
          return make_state(parse_state(kind, seed, beta, h), SubsystemShape::qubits(n)).matrix();
        },
        py::arg("kind"), py::arg("n"), py::arg("seed") = 0, py::arg("beta") = 1.0, py::arg("h") = py::none());

  m.def("propagator", [](const Matrix& H, double t) { return propagator(H, t).U; }, py::arg("H"), py::arg("t"));

  m.def("equal_time_cc", &equal_time_cc, py::arg("rho"), py::arg("o1"), py::arg("o2"));

  m.def("cc",
        [](const std::string& kind, const QuasiHermitianModel& q, const Matrix& rho, const Matrix& o1,
           const Matrix& o2, double t, double t2) {
          const Evolver ev(q);
          const CcKind k = parse_cc_kind(kind);
          return connected_correlator(k, rho, &q.eta, o1, o2, ev.at(t), ev.at(t2));
        },
        py::arg("kind"), py::arg("model"), py::arg("rho"), py::arg("o1"), py::arg("o2"), py::arg("t"),
        py::arg("t_prime"));

  m.def("mutual_information",
        [](const Matrix& rho, std::size_t n, std::vector<std::size_t> a, std::vector<std::size_t> b) {
          return mutual_information(DensityState(rho, SubsystemShape::qubits(n)), Bipartition{a, b});
        },
        py::arg("rho"), py::arg("n"), py::arg("A"), py::arg("B"));

  m.def("delta_rho_norm",
        [](const Matrix& rho, std::size_t n, std::vector<std::size_t> a, std::vector<std::size_t> b) {
          return delta_rho_analysis(DensityState(rho, SubsystemShape::qubits(n)), Bipartition{a, b}).hs_norm;
        },
        py::arg("rho"), py::arg("n"), py::arg("A"), py::arg("B"));

  m.def("mi_bound",
        [](const Matrix& rho, std::size_t n, std::vector<std::size_t> a, std::vector<std::size_t> b) {
          const auto r = mi_bound(DensityState(rho, SubsystemShape::qubits(n)), Bipartition{a, b});
          py::dict d;
          d["bound"] = r.bound;
          d["k_star"] = r.k_star;
          d["log_norm"] = r.log_norm;
          d["delta_rho_norm"] = r.delta_rho_norm;
          return d;
        },
        py::arg("rho"), py::arg("n"), py::arg("A"), py::arg("B"));

  m.def("bundled_configs", &bundled_config_names);
  m.def("bundled_config", &bundled_config, py::arg("name"));

  m.def("scan",
        [](const std::string& yaml, double gamma, std::size_t workers) {
          const auto c = parse_config(yaml);
          py::gil_scoped_release release;
          auto g = run_scan(c, gamma, workers);
          py::gil_scoped_acquire acquire;
          return grid_dict(g);
        },
        py::arg("config_yaml"), py::arg("gamma"), py::arg("workers") = 1,
        "Runs the scan of a YAML config for one gamma; values[t_index, site_index].");

  m.def("run",
        [](const std::string& yaml, std::optional<std::filesystem::path> out, std::optional<std::uint64_t> seed) {
          RunOverrides ov;
          ov.out = out;
          ov.seed = seed;
          RunResult r;
          {
            py::gil_scoped_release release;
            r = run_experiment(parse_config(yaml), ov);
          }
          py::dict d;
          d["exit_code"] = r.exit_code;
          d["message"] = r.message;
          d["files"] = r.files;
          d["manifest"] = r.manifest;
          return d;
        },
        py::arg("config_yaml"), py::arg("out") = py::none(), py::arg("seed") = py::none());

  m.def("verify",
        [](const std::string& level, bool inject_eta_identity) {
          VerifyOptions o;
          o.level = level == "full" ? VerifyLevel::Full : VerifyLevel::Fast;
          o.inject_eta_identity = inject_eta_identity;
          std::vector<CheckResult> rs;
          {
            py::gil_scoped_release release;
            rs = verify_suite(o);
          }
          py::list out;
          for (const auto& r : rs) {
            py::dict d;
            d["name"] = r.name;
            d["passed"] = r.passed;
            d["detail"] = r.detail;
            out.append(d);
          }
          return out;
        },
        py::arg("level") = "fast", py::arg("inject_eta_identity") = false);
}
