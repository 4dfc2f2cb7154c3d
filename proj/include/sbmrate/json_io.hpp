#pragma once

#include <json.hpp>

#include "sbmrate/bench.hpp"
#include "sbmrate/bounds.hpp"
#include "sbmrate/functionals.hpp"
#include "sbmrate/likelihood.hpp"
#include "sbmrate/spectral.hpp"

namespace sbmrate {

using Json = nlohmann::ordered_json;

Json to_json(const SymMatrix& m);
Json to_json(const Labelling& l);
Json to_json(const ThetaEstimate& e);
Json to_json(const SpecThetaResult& r);
Json to_json(const FitResult& r);
Json to_json(const FunctionalValue& v);
Json to_json(const BoundReport& b);
Json to_json(const ConditionsReport& c);
Json to_json(const KappaReport& k);
Json to_json(const PlanModel& m);
Json to_json(const ExperimentPlan& p);

// Model: a name accepted by named_model, or
// {"k": 4, "a": [...], "B": [[...], ...], "base": 0.5}.
PlanModel plan_model_from_json(const Json& j);

// Keys: model, estimator, n_grid, theta_grid, alpha, trials, master_seed,
// design, plugin_k. Missing optional keys keep their defaults. Throws
// std::invalid_argument on malformed plans.
ExperimentPlan plan_from_json(const Json& j);

}  // namespace sbmrate
