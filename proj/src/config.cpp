#include "nhlc/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "bundled_configs.hpp"

namespace nhlc {

namespace {

const std::set<std::string> kStateKinds{"plus_product", "ghz", "gibbs", "local_gibbs", "random_pure",
                                        "random_full_rank"};

void reject_unknown(const YAML::Node& node, const std::string& where, const std::set<std::string>& allowed) {
  if (!node.IsMap()) throw ConfigError(where.empty() ? "<root>" : where, "expected a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.contains(key)) {
      throw ConfigError(where.empty() ? key : where + "." + key, "unknown key");
    }
  }
}

template <class T>
T scalar(const YAML::Node& node, const std::string& key) {
  if (!node.IsScalar()) throw ConfigError(key, "expected a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(key, "cannot read '" + node.Scalar() + "'");
  }
}

std::size_t count(const YAML::Node& node, const std::string& key) {
  // yaml-cpp accepts "-1" for unsigned types, so go through a signed read.
  const auto v = scalar<long long>(node, key);
  if (v < 0) throw ConfigError(key, "must be non-negative");
  return static_cast<std::size_t>(v);
}

double real(const YAML::Node& node, const std::string& key) {
  const double v = scalar<double>(node, key);
  if (!std::isfinite(v)) throw ConfigError(key, "must be finite");
  return v;
}

template <class F>
void maybe(const YAML::Node& parent, const char* name, F&& f) {
  if (const YAML::Node n = parent[name]) f(n);
}

void parse_model(const YAML::Node& n, ModelSection& m) {
  reject_unknown(n, "model", {"n", "J", "g", "h", "gamma", "boundary"});
  maybe(n, "n", [&](const YAML::Node& v) { m.n = count(v, "model.n"); });
  maybe(n, "J", [&](const YAML::Node& v) { m.J = real(v, "model.J"); });
  maybe(n, "g", [&](const YAML::Node& v) { m.g = real(v, "model.g"); });
  maybe(n, "h", [&](const YAML::Node& v) { m.h = real(v, "model.h"); });
  maybe(n, "gamma", [&](const YAML::Node& v) {
    m.gamma.clear();
    if (v.IsScalar()) {
      m.gamma.push_back(real(v, "model.gamma"));
    } else if (v.IsSequence()) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        m.gamma.push_back(real(v[i], "model.gamma[" + std::to_string(i) + "]"));
      }
    } else {
      throw ConfigError("model.gamma", "expected a number or a list");
    }
  });
  maybe(n, "boundary", [&](const YAML::Node& v) { m.boundary = scalar<std::string>(v, "model.boundary"); });
}

void parse_state(const YAML::Node& n, StateSection& s) {
  reject_unknown(n, "state", {"kind", "beta", "h_prime", "seed"});
  maybe(n, "kind", [&](const YAML::Node& v) { s.kind = scalar<std::string>(v, "state.kind"); });
  maybe(n, "beta", [&](const YAML::Node& v) { s.beta = real(v, "state.beta"); });
  maybe(n, "seed", [&](const YAML::Node& v) {
    s.seed = static_cast<std::uint64_t>(count(v, "state.seed"));
  });
  maybe(n, "h_prime", [&](const YAML::Node& v) {
    reject_unknown(v, "state.h_prime", {"x", "y", "z"});
    s.h_prime.clear();
    for (const auto& kv : v) {
      const auto key = kv.first.as<std::string>();
      s.h_prime[key] = real(kv.second, "state.h_prime." + key);
    }
  });
}

void parse_scan(const YAML::Node& n, ScanSection& s) {
  reject_unknown(n, "scan", {"kind", "correlator", "A", "B", "t", "aggregate", "normalize", "picture"});
  maybe(n, "kind", [&](const YAML::Node& v) { s.kind = scalar<std::string>(v, "scan.kind"); });
  maybe(n, "correlator", [&](const YAML::Node& v) { s.correlator = scalar<std::string>(v, "scan.correlator"); });
  maybe(n, "A", [&](const YAML::Node& v) { s.A = count(v, "scan.A"); });
  maybe(n, "B", [&](const YAML::Node& v) {
    reject_unknown(v, "scan.B", {"start", "stop"});
    maybe(v, "start", [&](const YAML::Node& w) { s.B.start = count(w, "scan.B.start"); });
    maybe(v, "stop", [&](const YAML::Node& w) { s.B.stop = count(w, "scan.B.stop"); });
  });
  maybe(n, "t", [&](const YAML::Node& v) {
    reject_unknown(v, "scan.t", {"start", "stop", "steps"});
    maybe(v, "start", [&](const YAML::Node& w) { s.t.start = real(w, "scan.t.start"); });
    maybe(v, "stop", [&](const YAML::Node& w) { s.t.stop = real(w, "scan.t.stop"); });
    maybe(v, "steps", [&](const YAML::Node& w) { s.t.steps = count(w, "scan.t.steps"); });
  });
  maybe(n, "aggregate", [&](const YAML::Node& v) { s.aggregate = scalar<std::string>(v, "scan.aggregate"); });
  maybe(n, "normalize", [&](const YAML::Node& v) { s.normalize = scalar<bool>(v, "scan.normalize"); });
  maybe(n, "picture", [&](const YAML::Node& v) { s.picture = scalar<std::string>(v, "scan.picture"); });
}

void parse_output(const YAML::Node& n, OutputSection& o) {
  reject_unknown(n, "output", {"directory", "formats"});
  maybe(n, "directory", [&](const YAML::Node& v) { o.directory = scalar<std::string>(v, "output.directory"); });
  maybe(n, "formats", [&](const YAML::Node& v) {
    if (!v.IsSequence()) throw ConfigError("output.formats", "expected a list");
    o.formats.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      o.formats.push_back(scalar<std::string>(v[i], "output.formats[" + std::to_string(i) + "]"));
    }
  });
}

}  // namespace

void validate(const ExperimentConfig& c) {
  if (c.name.empty()) throw ConfigError("name", "must not be empty");
  const auto& m = c.model;
  if (m.n < 1 || m.n > 14) throw ConfigError("model.n", "must be in [1, 14]");
  if (m.gamma.empty()) throw ConfigError("model.gamma", "needs at least one value");
  if (m.boundary != "open") throw ConfigError("model.boundary", "only 'open' is supported");

  const auto& s = c.state;
  if (!kStateKinds.contains(s.kind)) throw ConfigError("state.kind", "unknown state kind '" + s.kind + "'");
  if (s.kind == "gibbs" || s.kind == "local_gibbs") {
    if (s.h_prime.empty()) throw ConfigError("state.h_prime", "required for Gibbs states");
    if (m.n > 12 && s.kind == "gibbs") throw ConfigError("state.kind", "gibbs needs n <= 12; use local_gibbs");
  }

  const auto& sc = c.scan;
  if (sc.kind != "cc" && sc.kind != "mi" && sc.kind != "commutator") {
    throw ConfigError("scan.kind", "must be cc, mi or commutator");
  }
  if (sc.kind == "cc") {
    try {
      parse_cc_kind(sc.correlator);
    } catch (const std::invalid_argument&) {
      throw ConfigError("scan.correlator", "unknown correlator '" + sc.correlator + "'");
    }
  }
  try {
    parse_aggregate(sc.aggregate);
  } catch (const std::invalid_argument&) {
    throw ConfigError("scan.aggregate", "unknown aggregate '" + sc.aggregate + "'");
  }
  if (sc.picture != "tilde" && sc.picture != "heisenberg") {
    throw ConfigError("scan.picture", "must be tilde or heisenberg");
  }
  if (sc.A >= m.n) throw ConfigError("scan.A", "site outside [0, n)");
  if (sc.B.stop < sc.B.start) throw ConfigError("scan.B", "empty site range");
  if (sc.B.stop >= m.n) throw ConfigError("scan.B.stop", "site outside [0, n)");
  if (sc.t.steps == 0) throw ConfigError("scan.t.steps", "empty time range");
  if (sc.t.stop < sc.t.start) throw ConfigError("scan.t", "stop before start");

  if (c.output.directory.empty()) throw ConfigError("output.directory", "must not be empty");
  if (c.output.formats.empty()) throw ConfigError("output.formats", "needs at least one format");
  for (const auto& f : c.output.formats) {
    if (f != "csv") throw ConfigError("output.formats", "unsupported format '" + f + "'");
  }
  if (c.run.workers < 1) throw ConfigError("run.workers", "must be at least 1");
}

ExperimentConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("<yaml>", e.what());
  }
  ExperimentConfig c;
  reject_unknown(root, "", {"name", "model", "state", "scan", "output", "run"});
  maybe(root, "name", [&](const YAML::Node& v) { c.name = scalar<std::string>(v, "name"); });
  maybe(root, "model", [&](const YAML::Node& v) { parse_model(v, c.model); });
  maybe(root, "state", [&](const YAML::Node& v) { parse_state(v, c.state); });
  maybe(root, "scan", [&](const YAML::Node& v) { parse_scan(v, c.scan); });
  maybe(root, "output", [&](const YAML::Node& v) { parse_output(v, c.output); });
  maybe(root, "run", [&](const YAML::Node& v) {
    reject_unknown(v, "run", {"workers"});
    maybe(v, "workers", [&](const YAML::Node& w) { c.run.workers = count(w, "run.workers"); });
  });
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << c.name;

  out << YAML::Key << "model" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "n" << YAML::Value << c.model.n;
  out << YAML::Key << "J" << YAML::Value << c.model.J;
  out << YAML::Key << "g" << YAML::Value << c.model.g;
  out << YAML::Key << "h" << YAML::Value << c.model.h;
  out << YAML::Key << "gamma" << YAML::Value << YAML::Flow << c.model.gamma;
  out << YAML::Key << "boundary" << YAML::Value << c.model.boundary;
  out << YAML::EndMap;

  out << YAML::Key << "state" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << c.state.kind;
  out << YAML::Key << "beta" << YAML::Value << c.state.beta;
  out << YAML::Key << "h_prime" << YAML::Value << YAML::Flow << YAML::BeginMap;
  for (const auto& [k, v] : c.state.h_prime) out << YAML::Key << k << YAML::Value << v;
  out << YAML::EndMap;
  out << YAML::Key << "seed" << YAML::Value << c.state.seed;
  out << YAML::EndMap;

  const auto& s = c.scan;
  out << YAML::Key << "scan" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << s.kind;
  out << YAML::Key << "correlator" << YAML::Value << s.correlator;
  out << YAML::Key << "A" << YAML::Value << s.A;
  out << YAML::Key << "B" << YAML::Value << YAML::Flow << YAML::BeginMap;
  out << YAML::Key << "start" << YAML::Value << s.B.start << YAML::Key << "stop" << YAML::Value << s.B.stop;
  out << YAML::EndMap;
  out << YAML::Key << "t" << YAML::Value << YAML::Flow << YAML::BeginMap;
  out << YAML::Key << "start" << YAML::Value << s.t.start << YAML::Key << "stop" << YAML::Value << s.t.stop;
  out << YAML::Key << "steps" << YAML::Value << s.t.steps;
  out << YAML::EndMap;
  out << YAML::Key << "aggregate" << YAML::Value << s.aggregate;
  out << YAML::Key << "normalize" << YAML::Value << s.normalize;
  out << YAML::Key << "picture" << YAML::Value << s.picture;
  out << YAML::EndMap;

  out << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "directory" << YAML::Value << c.output.directory;
  out << YAML::Key << "formats" << YAML::Value << YAML::Flow << c.output.formats;
  out << YAML::EndMap;

  out << YAML::Key << "run" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "workers" << YAML::Value << c.run.workers;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["name"] = c.name;
  j["model"] = {{"n", c.model.n}, {"J", c.model.J}, {"g", c.model.g}, {"h", c.model.h},
                {"gamma", c.model.gamma}, {"boundary", c.model.boundary}};
  j["state"] = {{"kind", c.state.kind}, {"beta", c.state.beta}, {"h_prime", c.state.h_prime},
                {"seed", c.state.seed}};
  const auto& s = c.scan;
  j["scan"] = {{"kind", s.kind},
               {"correlator", s.correlator},
               {"A", s.A},
               {"B", {{"start", s.B.start}, {"stop", s.B.stop}}},
               {"t", {{"start", s.t.start}, {"stop", s.t.stop}, {"steps", s.t.steps}}},
               {"aggregate", s.aggregate},
               {"normalize", s.normalize},
               {"picture", s.picture}};
  j["output"] = {{"directory", c.output.directory}, {"formats", c.output.formats}};
  j["run"] = {{"workers", c.run.workers}};
  return j;
}

TimeGrid time_grid(const ScanSection& s) { return TimeGrid{s.t.start, s.t.stop, s.t.steps}; }

std::vector<std::size_t> b_sites(const ScanSection& s) {
  std::vector<std::size_t> v;
  for (std::size_t x = s.B.start; x <= s.B.stop; ++x) v.push_back(x);
  return v;
}

TfimParams tfim_params(const ModelSection& m, double gamma) {
  TfimParams p;
  p.n = m.n;
  p.J = m.J;
  p.g = m.g;
  p.h = m.h;
  p.gamma = gamma;
  return p;
}

StateKind state_kind_for(const StateSection& s, std::size_t n) {
  if (s.kind == "plus_product") return state_kind::PlusProduct{};
  if (s.kind == "ghz") return state_kind::Ghz{};
  if (s.kind == "random_pure") return state_kind::RandomPure{s.seed};
  if (s.kind == "random_full_rank") return state_kind::RandomFullRank{s.seed};
  Matrix h = Matrix::Zero(2, 2);
  for (const auto& [label, coef] : s.h_prime) {
    h += coef * (label == "x" ? pauli::x() : label == "y" ? pauli::y() : pauli::z());
  }
  if (s.kind == "local_gibbs") return state_kind::LocalGibbs{h, s.beta};
  const auto shape = SubsystemShape::qubits(n);
  Matrix big = Matrix::Zero(static_cast<Eigen::Index>(shape.total_dim()),
                            static_cast<Eigen::Index>(shape.total_dim()));
  for (std::size_t j = 0; j < n; ++j) big += site_operator(h, j, shape);
  return state_kind::Gibbs{big, s.beta};
}

std::vector<std::string> bundled_config_names() { return {"fig1", "fig2", "fig3", "fig4", "d1", "d2"}; }

std::string bundled_config(const std::string& name) {
  for (const auto& [key, text] : detail::kBundledConfigs) {
    if (key == name) return std::string(text);
  }
  throw ConfigError("reproduce", "unknown figure '" + name + "'");
}

}  // namespace nhlc
