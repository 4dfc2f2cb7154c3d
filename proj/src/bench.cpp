#include "sbmrate/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "sbmrate/functionals.hpp"
#include "sbmrate/likelihood.hpp"
#include "sbmrate/spectral.hpp"

namespace sbmrate {

std::string to_string(Estimator e) {
  switch (e) {
    case Estimator::spectral2: return "spectral2";
    case Estimator::spectral2_sparse: return "spectral2-sparse";
    case Estimator::spec_theta: return "spec-theta";
    case Estimator::mle2: return "mle2";
    case Estimator::mle_k: return "mle-k";
    case Estimator::tau_plugin: return "tau-plugin";
  }
  return "unknown";
}

std::string to_string(Design d) { return d == Design::fixed ? "fixed" : "random"; }

Estimator parse_estimator(const std::string& s) {
  for (auto e : {Estimator::spectral2, Estimator::spectral2_sparse, Estimator::spec_theta, Estimator::mle2,
                 Estimator::mle_k, Estimator::tau_plugin})
    if (to_string(e) == s) return e;
  if (s == "mle") return Estimator::mle2;
  throw std::invalid_argument("unknown estimator: " + s);
}

Design parse_design(const std::string& s) {
  if (s == "fixed") return Design::fixed;
  if (s == "random") return Design::random;
  throw std::invalid_argument("unknown design: " + s);
}

PlanModel named_model(const std::string& name) {
  PlanModel m;
  m.name = name;
  if (name == "two-class") {
    m.sub = SubmodelK(2, {}, SymMatrix(0), 0.0);
  } else if (name == "three-class") {
    m.sub = SubmodelK(3, {0.1}, SymMatrix(1, 0.9), 0.0);
  } else if (name == "five-class") {
    m.sub = five_class_study_model(0.0);
  } else if (name == "w-theta") {
    m.kind = ModelKind::w_theta;
  } else {
    throw std::invalid_argument("unknown model: " + name);
  }
  return m;
}

void ExperimentPlan::validate() const {
  if (n_grid.empty() || theta_grid.empty()) throw std::invalid_argument("plan: grids must be nonempty");
  if (trials < 1) throw std::invalid_argument("plan: trials must be >= 1");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("plan: alpha must lie in (0,1]");
  for (double t : theta_grid) {
    if (model.kind == ModelKind::w_theta) {
      if (t < 0.0 || t > 1.0) throw std::invalid_argument("plan: w-theta needs theta in [0,1]");
    } else {
      (void)model.sub.with_theta(t);
    }
  }
  for (std::size_t n : n_grid)
    if (n < 2) throw std::invalid_argument("plan: n must be >= 2");
  if (model.kind == ModelKind::w_theta && estimator != Estimator::tau_plugin)
    throw std::invalid_argument("plan: the w-theta model only supports tau-plugin");
  if (model.kind == ModelKind::w_theta && alpha != 1.0) throw std::invalid_argument("plan: w-theta requires alpha = 1");
}

Graph sample_cell(const PlanModel& m, double theta, double alpha, std::size_t n, Design d, Rng& rng) {
  if (m.kind == ModelKind::w_theta) return sample_graphon(Graphon::w_theta(theta), n, rng);
  SbmSpec spec(uniform_proportions(m.sub.k), m.sub.with_theta(theta).realize(), alpha);
  if (d == Design::fixed) return sample_fixed_design(spec.edge_probabilities(), round_robin_labelling(n, spec.k), rng);
  return sample_random_design(spec, n, rng).graph;
}

double estimand(const PlanModel& m, Estimator e, double theta) {
  if (e != Estimator::tau_plugin) return theta;
  if (m.kind == ModelKind::w_theta) return tau_exact(Graphon::w_theta(theta)).tau;
  return tau_exact(Graphon::block(uniform_proportions(m.sub.k), m.sub.with_theta(theta).realize())).tau;
}

TrialOutcome run_estimator(const PlanModel& m, Estimator e, const Graph& g, double alpha, int plugin_k, Rng& rng) {
  TrialOutcome out;
  switch (e) {
    case Estimator::spectral2: {
      auto r = spectral_two_class(g);
      out = {r.theta, r.flags};
      break;
    }
    case Estimator::spectral2_sparse: {
      auto r = spectral_two_class_sparse(g, alpha);
      out = {r.theta, r.flags};
      break;
    }
    case Estimator::spec_theta: {
      auto r = spec_theta(g, m.k(), alpha, rng);
      out = {r.theta, r.flags};
      break;
    }
    case Estimator::mle2: {
      auto r = mle_two_class(g, g.size() <= kExactTwoClassMaxN ? FitMode::exact : FitMode::heuristic);
      out.estimate = r.theta_hat;
      break;
    }
    case Estimator::mle_k: {
      if (m.kind != ModelKind::submodel || m.sub.k < 3) throw std::invalid_argument("mle-k needs a submodel with k >= 3");
      const bool exact = g.size() <= kExactKClassMaxN && m.sub.k <= kExactKClassMaxK;
      auto r = mle_k_class(g, m.sub, exact ? FitMode::exact : FitMode::heuristic, rng);
      out.estimate = r.theta_hat;
      break;
    }
    case Estimator::tau_plugin: {
      const int k = plugin_k > 0 ? plugin_k : default_plugin_k(g.size());
      auto r = tau_plugin(g, k, rng);
      out = {r.tau, r.flags};
      break;
    }
  }
  return out;
}

unsigned default_threads() {
  if (const char* v = std::getenv("SBMRATE_THREADS")) {
    const long t = std::strtol(v, nullptr, 10);
    if (t > 0) return static_cast<unsigned>(t);
  }
  return 1;
}

namespace {

struct Cell {
  std::size_t n;
  double theta;
};

struct TrialResult {
  double sq_err = 0.0;
  std::vector<std::string> flags;
  std::string error;
};

}  // namespace

RiskCurve run_plan(const ExperimentPlan& plan, unsigned threads) {
  plan.validate();
  if (threads == 0) threads = default_threads();
  std::vector<Cell> cells;
  for (std::size_t n : plan.n_grid)
    for (double t : plan.theta_grid) cells.push_back({n, t});

  const auto trials = static_cast<std::size_t>(plan.trials);
  std::vector<TrialResult> results(cells.size() * trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t job; (job = next.fetch_add(1)) < results.size();) {
      const std::size_t c = job / trials, t = job % trials;
      TrialResult& res = results[job];
      try {
        Rng rng = Rng::derive({plan.master_seed, c, t});
        Rng est_rng = rng.split(1);
        Graph g = sample_cell(plan.model, cells[c].theta, plan.alpha, cells[c].n, plan.design, rng);
        auto o = run_estimator(plan.model, plan.estimator, g, plan.alpha, plan.plugin_k, est_rng);
        const double e = o.estimate - estimand(plan.model, plan.estimator, cells[c].theta);
        res.sq_err = e * e;
        res.flags = std::move(o.flags);
      } catch (const std::exception& ex) {
        res.error = ex.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  RiskCurve rows;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    RiskRow row;
    row.n = cells[c].n;
    row.k = plan.model.k();
    row.theta = cells[c].theta;
    row.alpha = plan.alpha;
    row.estimator = to_string(plan.estimator);
    row.trials = plan.trials;
    row.seed = plan.master_seed;
    row.design = to_string(plan.design);

    std::string error;
    std::map<std::string, int> counts;
    double sum = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      const auto& r = results[c * trials + t];
      if (!r.error.empty() && error.empty()) error = r.error;
      sum += r.sq_err;
      for (const auto& f : r.flags) ++counts[f];
    }
    if (!error.empty()) {
      row.emp_risk = row.std_err = std::nan("");
      row.flags = "error:" + error;
      rows.push_back(row);
      continue;
    }
    const double mean = sum / static_cast<double>(trials);
    double ss = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      const double d = results[c * trials + t].sq_err - mean;
      ss += d * d;
    }
    row.emp_risk = mean;
    row.std_err = trials > 1 ? std::sqrt(ss / static_cast<double>(trials - 1)) / std::sqrt(static_cast<double>(trials)) : 0.0;
    for (const auto& [f, cnt] : counts) {
      if (!row.flags.empty()) row.flags += ';';
      row.flags += f + ":" + std::to_string(cnt);
    }
    rows.push_back(row);
  }
  return rows;
}

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

}  // namespace

void write_csv(std::ostream& os, const RiskCurve& rows) {
  os << "n,k,theta,alpha,estimator,trials,emp_risk,std_err,seed,design,flags\n";
  for (const auto& r : rows)
    os << r.n << ',' << r.k << ',' << num(r.theta) << ',' << num(r.alpha) << ',' << r.estimator << ',' << r.trials
       << ',' << num(r.emp_risk) << ',' << num(r.std_err) << ',' << r.seed << ',' << r.design << ','
       << csv_field(r.flags) << '\n';
}

}  // namespace sbmrate
