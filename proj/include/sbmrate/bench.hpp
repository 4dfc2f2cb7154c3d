#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sbmrate/graph.hpp"
#include "sbmrate/model.hpp"
#include "sbmrate/rng.hpp"

namespace sbmrate {

enum class Estimator { spectral2, spectral2_sparse, spec_theta, mle2, mle_k, tau_plugin };
enum class Design { fixed, random };
enum class ModelKind { submodel, w_theta };

std::string to_string(Estimator e);
std::string to_string(Design d);
Estimator parse_estimator(const std::string& s);  // std::invalid_argument on unknown names
Design parse_design(const std::string& s);

// Either the k-class submodel family (theta supplied per cell; k = 2 is the
// two-class Q^theta model) or the polynomial graphon family w_theta.
struct PlanModel {
  ModelKind kind = ModelKind::submodel;
  SubmodelK sub;  // theta ignored
  std::string name = "two-class";

  [[nodiscard]] int k() const { return kind == ModelKind::submodel ? sub.k : 0; }
};

// "two-class", "three-class", "five-class", "w-theta"
PlanModel named_model(const std::string& name);

struct ExperimentPlan {
  PlanModel model;
  Estimator estimator = Estimator::spectral2;
  std::vector<std::size_t> n_grid;
  std::vector<double> theta_grid;
  double alpha = 1.0;
  int trials = 1;
  std::uint64_t master_seed = 1;
  Design design = Design::random;
  int plugin_k = 0;  // 0: default_plugin_k(n)

  // Throws std::invalid_argument on empty grids, trials < 1, theta outside
  // the model's range or alpha outside (0,1].
  void validate() const;
};

struct RiskRow {
  std::size_t n = 0;
  int k = 0;
  double theta = 0.0;
  double alpha = 1.0;
  std::string estimator;
  int trials = 0;
  double emp_risk = 0.0;
  double std_err = 0.0;
  std::uint64_t seed = 0;
  std::string design;
  std::string flags;  // "name:count;..." or "error:<message>"
};

using RiskCurve = std::vector<RiskRow>;

// Graph drawn for one trial.
Graph sample_cell(const PlanModel& m, double theta, double alpha, std::size_t n, Design d, Rng& rng);

// Target value for the estimator: theta, or tau of the generating graphon.
double estimand(const PlanModel& m, Estimator e, double theta);

struct TrialOutcome {
  double estimate = 0.0;
  std::vector<std::string> flags;
};

TrialOutcome run_estimator(const PlanModel& m, Estimator e, const Graph& g, double alpha, int plugin_k, Rng& rng);

// Default worker count: SBMRATE_THREADS if set and positive, else 1.
unsigned default_threads();

// Cells in (n, theta) order; trial t of cell c uses Rng::derive({seed, c, t}).
// Results do not depend on the thread count.
RiskCurve run_plan(const ExperimentPlan& plan, unsigned threads = 0);

void write_csv(std::ostream& os, const RiskCurve& rows);

}  // namespace sbmrate
