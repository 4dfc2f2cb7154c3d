#include "sbmrate/json_io.hpp"

#include <cmath>
#include <stdexcept>

namespace sbmrate {

namespace {

// JSON has no NaN or infinity
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json to_json(const SymMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    Json r = Json::array();
    for (std::size_t j = 0; j < m.size(); ++j) r.push_back(m(i, j));
    rows.push_back(r);
  }
  return rows;
}

Json to_json(const Labelling& l) { return Json(l.assignment()); }

Json to_json(const ThetaEstimate& e) {
  return Json{{"theta_hat", e.theta}, {"raw", e.raw}, {"eigenvalue", e.eigenvalue}, {"flags", e.flags}};
}

Json to_json(const SpecThetaResult& r) {
  return Json{{"theta_hat", r.theta},
              {"cluster_sizes", r.cluster_sizes},
              {"densities", r.densities},
              {"selected", r.selected},
              {"margin", r.margin},
              {"cluster_objective", r.cluster_objective},
              {"refine_passes", r.refine_passes},
              {"eigen_residual", r.eigen_residual},
              {"labels", to_json(r.labels)},
              {"flags", r.flags}};
}

Json to_json(const FitResult& r) {
  Json j{{"theta_hat", r.theta_hat},
         {"objective", r.objective},
         {"mode", to_string(r.mode)},
         {"sigma_hat", to_json(r.sigma_hat)}};
  if (r.sigma_tilde.size() > 0) {
    j["S_I"] = r.S_I;
    j["sigma_tilde"] = to_json(r.sigma_tilde);
    j["theta_tilde"] = r.theta_tilde;
    j["stage1_loss"] = r.stage1_loss;
    j["stage1_mode"] = to_string(r.stage1_mode);
  }
  return j;
}

Json to_json(const FunctionalValue& v) {
  return Json{{"tau", v.tau}, {"method", to_string(v.method)}, {"flags", v.flags}};
}

Json to_json(const BoundReport& b) {
  Json c = Json::object();
  for (const auto& [k, v] : b.constants) c[k] = number(v);
  return Json{{"rate", b.rate}, {"regime", b.regime}, {"constants", c}, {"notes", b.notes}};
}

Json to_json(const ConditionsReport& c) {
  return Json{{"N", to_json(c.N)},
              {"gamma", c.gamma},
              {"lambda", c.lambda},
              {"kappa", c.kappa},
              {"A1", c.a1_ok},
              {"A2", c.a2_ok},
              {"A3", c.a3_ok},
              {"B0", c.b0_ok},
              {"B2", c.b2_ok},
              {"T_K", c.T_K},
              {"constants", {{"C", c.constants.C}, {"C_s", c.constants.C_s}, {"c", c.constants.c}}}};
}

Json to_json(const KappaReport& k) {
  return Json{{"kappa", k.kappa}, {"separation_ok", k.separation_ok}, {"lhs", k.lhs}, {"rhs", k.rhs}, {"size_ok", k.size_ok}};
}

Json to_json(const PlanModel& m) {
  if (m.kind == ModelKind::w_theta) return Json("w-theta");
  Json B = to_json(m.sub.B);
  return Json{{"name", m.name}, {"k", m.sub.k}, {"a", m.sub.a}, {"B", B}, {"base", m.sub.base}};
}

Json to_json(const ExperimentPlan& p) {
  return Json{{"model", to_json(p.model)},
              {"estimator", to_string(p.estimator)},
              {"n_grid", p.n_grid},
              {"theta_grid", p.theta_grid},
              {"alpha", p.alpha},
              {"trials", p.trials},
              {"master_seed", p.master_seed},
              {"design", to_string(p.design)},
              {"plugin_k", p.plugin_k}};
}

PlanModel plan_model_from_json(const Json& j) {
  if (j.is_string()) return named_model(j.get<std::string>());
  if (!j.is_object()) throw std::invalid_argument("plan: model must be a name or an object");
  try {
    PlanModel m;
    m.name = j.value("name", std::string("custom"));
    const int k = j.at("k").get<int>();
    std::vector<double> a = j.value("a", std::vector<double>{});
    auto rows = j.value("B", std::vector<std::vector<double>>{});
    SymMatrix B = rows.empty() ? SymMatrix(0) : SymMatrix::from_rows(rows);
    m.sub = SubmodelK(k, a, B, 0.0, j.value("base", 0.5));
    return m;
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("plan: bad model: ") + e.what());
  }
}

ExperimentPlan plan_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("plan: expected a JSON object");
  ExperimentPlan p;
  try {
    if (j.contains("model")) p.model = plan_model_from_json(j.at("model"));
    p.estimator = parse_estimator(j.at("estimator").get<std::string>());
    p.n_grid = j.at("n_grid").get<std::vector<std::size_t>>();
    p.theta_grid = j.at("theta_grid").get<std::vector<double>>();
    p.alpha = j.value("alpha", p.alpha);
    p.trials = j.value("trials", p.trials);
    p.master_seed = j.value("master_seed", p.master_seed);
    if (j.contains("design")) p.design = parse_design(j.at("design").get<std::string>());
    p.plugin_k = j.value("plugin_k", p.plugin_k);
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("plan: ") + e.what());
  }
  p.validate();
  return p;
}

}  // namespace sbmrate
