#include "mbg/serialize.hpp"

#include <json.hpp>

namespace mbg {

using nlohmann::json;

std::string model_to_text(const TabularModel& m) {
  json j;
  j["n_states"] = m.n_states;
  j["n_actions"] = m.n_actions;
  j["n_opponent"] = m.n_opponent;
  if (m.criterion == Criterion::discounted)
    j["gamma"] = m.gamma;
  else
    j["criterion"] = "average";
  j["P"] = m.P.v;
  j["R"] = m.R.v;
  j["initial_state"] = m.initial_state;
  j["bound_c"] = m.bound_c;
  return j.dump(2);
}

namespace {

json parse_or_throw(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError("document is not valid JSON");
  return j;
}

template <typename T>
T field(const json& j, const char* name) {
  if (!j.contains(name)) throw ConfigError(std::string("missing field: ") + name);
  try {
    return j.at(name).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("malformed field: ") + name);
  }
}

TabularModel model_from_json(const json& j) {
  TabularModel m;
  m.n_states = field<int>(j, "n_states");
  m.n_actions = field<int>(j, "n_actions");
  m.n_opponent = field<int>(j, "n_opponent");
  if (j.contains("gamma")) {
    m.criterion = Criterion::discounted;
    m.gamma = field<double>(j, "gamma");
  } else if (j.contains("criterion") && j.at("criterion") == "average") {
    m.criterion = Criterion::average;
  } else {
    throw ConfigError("missing field: gamma (or criterion: \"average\")");
  }
  auto p = field<std::vector<double>>(j, "P");
  auto r = field<std::vector<double>>(j, "R");
  m.P = Tensor3<double>(m.n_states, m.n_actions, m.n_states);
  m.R = Tensor3<double>(m.n_states, m.n_actions, m.n_opponent);
  if (p.size() != m.P.size()) throw ConfigError("malformed field: P (wrong length)");
  if (r.size() != m.R.size()) throw ConfigError("malformed field: R (wrong length)");
  m.P.v = std::move(p);
  m.R.v = std::move(r);
  m.initial_state = j.value("initial_state", 0);
  m.bound_c = j.value("bound_c", 1.0);
  return m;
}

}  // namespace

TabularModel model_from_text(const std::string& text) { return model_from_json(parse_or_throw(text)); }

ExperimentConfig config_from_text(const std::string& text) {
  json j = parse_or_throw(text);
  ExperimentConfig cfg;

  if (!j.contains("environment")) throw ConfigError("missing field: environment");
  if (j.at("environment").is_string()) {
    cfg.environment = j.at("environment").get<std::string>();
  } else if (j.at("environment").is_object()) {
    cfg.inline_model = model_from_json(j.at("environment"));
  } else {
    throw ConfigError("malformed field: environment (name or inline model object)");
  }

  const std::string alg = field<std::string>(j, "algorithm");
  if (alg == "discounted")
    cfg.algorithm = Algorithm::discounted;
  else if (alg == "average")
    cfg.algorithm = Algorithm::average;
  else if (alg == "oracle-fixed-point")
    cfg.algorithm = Algorithm::oracle_fixed_point;
  else if (alg == "oracle-rvi")
    cfg.algorithm = Algorithm::oracle_rvi;
  else if (alg == "oracle-lp")
    cfg.algorithm = Algorithm::oracle_lp;
  else
    throw ConfigError("malformed field: algorithm (got \"" + alg + "\")");

  cfg.steps = j.value("steps", std::int64_t(0));
  if (cfg.steps < 0) throw ConfigError("malformed field: steps (negative)");

  if (j.contains("seeds")) {
    cfg.seeds = field<std::vector<std::uint64_t>>(j, "seeds");
    if (cfg.seeds.empty()) throw ConfigError("malformed field: seeds (empty)");
  } else if (j.contains("seed")) {
    cfg.seeds = {field<std::uint64_t>(j, "seed")};
  }

  if (j.contains("explore")) {
    const json& e = j.at("explore");
    cfg.eps0 = e.value("eps0", 0.05);
    cfg.eps_floor = e.value("floor", 0.01);
    cfg.eps_sqrt_decay = e.value("sqrt_decay", true);
  }
  cfg.snapshot_every = j.value("snapshot_every", std::int64_t(0));
  if (j.contains("delta")) cfg.delta = field<double>(j, "delta");

  if (j.contains("evaluation")) {
    const json& e = j.at("evaluation");
    EvaluationConfig ev;
    ev.n_traj = e.value("n_traj", 10000);
    ev.n_traj_every = e.value("n_traj_every", 100);
    ev.tol = e.value("tol", 1e-3);
    ev.margin = e.value("margin", 0.05);
    ev.every = e.value("every", std::int64_t(0));
    if (ev.n_traj <= 0) throw ConfigError("malformed field: evaluation.n_traj");
    cfg.evaluation = ev;
  }
  if (j.contains("bisection")) {
    const json& b = j.at("bisection");
    BisectionConfig bi;
    bi.delta_lo = field<double>(b, "delta_lo");
    bi.delta_hi = field<double>(b, "delta_hi");
    bi.delta_tol = b.value("delta_tol", 0.01);
    if (!(bi.delta_tol > 0)) throw ConfigError("malformed field: bisection.delta_tol");
    cfg.bisection = bi;
  }
  cfg.out_dir = j.value("out", std::string());
  return cfg;
}

}  // namespace mbg
