#include "doctest.h"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "sbmrate/json_io.hpp"

using namespace sbmrate;

namespace {

ExperimentPlan small_plan() {
  ExperimentPlan p;
  p.model = named_model("two-class");
  p.estimator = Estimator::spectral2;
  p.n_grid = {20, 40};
  p.theta_grid = {0.05, 0.3};
  p.trials = 12;
  p.master_seed = 99;
  return p;
}

std::string csv(const RiskCurve& r) {
  std::ostringstream os;
  write_csv(os, r);
  return os.str();
}

}  // namespace

TEST_CASE("run_plan is deterministic and schedule independent") {
  auto p = small_plan();
  const std::string a = csv(run_plan(p, 1));
  CHECK(a == csv(run_plan(p, 1)));
  CHECK(a == csv(run_plan(p, 3)));
  CHECK(a.rfind("n,k,theta,alpha,estimator,trials,emp_risk,std_err,seed,design,flags\n", 0) == 0);
  p.master_seed = 100;
  CHECK(a != csv(run_plan(p, 1)));
}

TEST_CASE("risk rows") {
  auto p = small_plan();
  auto rows = run_plan(p);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].n == 20);
  CHECK(rows[1].theta == 0.3);
  CHECK(rows[2].n == 40);
  for (const auto& r : rows) {
    CHECK(r.emp_risk >= 0.0);
    CHECK(r.emp_risk <= 1.0);
    CHECK(r.std_err >= 0.0);
    CHECK(r.k == 2);
    CHECK(r.design == "random");
  }
  p.trials = 1;
  p.n_grid = {30};
  p.theta_grid = {0.2};
  auto one = run_plan(p);
  REQUIRE(one.size() == 1);
  CHECK(one[0].std_err == 0.0);
  CHECK(csv(one) == csv(run_plan(p)));

  // the per-trial stream is the documented one
  Rng rng = Rng::derive({p.master_seed, 0, 0});
  Graph g = sample_cell(p.model, 0.2, 1.0, 30, Design::random, rng);
  Rng est = Rng::derive({p.master_seed, 0, 0}).split(1);
  const double e = run_estimator(p.model, Estimator::spectral2, g, 1.0, 0, est).estimate - 0.2;
  CHECK(one[0].emp_risk == e * e);
}

TEST_CASE("fixed design and other estimators") {
  ExperimentPlan p = small_plan();
  p.design = Design::fixed;
  p.trials = 3;
  for (auto e : {Estimator::spectral2_sparse, Estimator::mle2, Estimator::tau_plugin}) {
    p.estimator = e;
    for (const auto& r : run_plan(p)) {
      CHECK(r.flags.find("error") == std::string::npos);
      CHECK(r.emp_risk <= 1.0);
      CHECK(r.design == "fixed");
    }
  }
  ExperimentPlan k = p;
  k.model = named_model("three-class");
  k.n_grid = {60};
  for (auto e : {Estimator::spec_theta, Estimator::mle_k}) {
    k.estimator = e;
    for (const auto& r : run_plan(k)) CHECK(r.flags.find("error") == std::string::npos);
  }
  ExperimentPlan w = p;
  w.model = named_model("w-theta");
  w.estimator = Estimator::tau_plugin;
  w.theta_grid = {0.5};
  auto wr = run_plan(w);
  CHECK(wr[0].k == 0);
  CHECK(std::isfinite(wr[0].emp_risk));
}

TEST_CASE("incompatible cells are reported") {
  auto p = small_plan();
  p.estimator = Estimator::spec_theta;
  auto rows = run_plan(p);
  for (const auto& r : rows) {
    CHECK(r.flags.rfind("error:", 0) == 0);
    CHECK(std::isnan(r.emp_risk));
  }
}

TEST_CASE("plan validation") {
  auto p = small_plan();
  p.trials = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = small_plan();
  p.theta_grid = {0.7};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = small_plan();
  p.n_grid.clear();
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  CHECK_THROWS_AS(parse_estimator("nope"), std::invalid_argument);
  CHECK(parse_estimator("mle") == Estimator::mle2);
}

TEST_CASE("plan JSON") {
  auto p = small_plan();
  p.model = named_model("five-class");
  p.estimator = Estimator::spec_theta;
  Json j = to_json(p);
  auto q = plan_from_json(j);
  CHECK(to_json(q) == j);

  Json custom = Json::parse(R"({"model": {"k": 3, "a": [0.2], "B": [[0.8]]}, "estimator": "mle-k",
                               "n_grid": [8], "theta_grid": [0.1], "trials": 2, "design": "fixed"})");
  auto c = plan_from_json(custom);
  CHECK(c.model.k() == 3);
  CHECK(c.model.sub.a[0] == 0.2);
  CHECK(c.design == Design::fixed);
  CHECK(c.master_seed == 1);

  CHECK_THROWS_AS(plan_from_json(Json::parse(R"({"estimator": "spectral2"})")), std::invalid_argument);
  CHECK_THROWS_AS(plan_from_json(Json::parse(R"({"estimator": "spectral2", "n_grid": [10], "theta_grid": "x"})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(plan_from_json(Json::parse(R"([1, 2])")), std::invalid_argument);
}
