#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sbmrate/json_io.hpp"

using namespace sbmrate;

namespace {

// Malformed plans and flag values surface as this, and map to exit code 2.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

Graph load_graph(const std::string& path, std::size_t n_hint) {
  if (path == "-") return read_edge_list(std::cin, n_hint);
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_edge_list(in, n_hint);
}

void emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

PlanModel model_or_usage(const std::string& name) {
  try {
    return named_model(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

FitMode parse_mode(const std::string& s, bool exact_fits) {
  if (s == "exact") return FitMode::exact;
  if (s == "heuristic") return FitMode::heuristic;
  if (s == "auto") return exact_fits ? FitMode::exact : FitMode::heuristic;
  throw UsageError("mode must be exact, heuristic or auto");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Estimation and lower bounds for the two-class affiliation parameter of block models"};
  app.require_subcommand(1);

  // sample
  auto* sample = app.add_subcommand("sample", "draw a graph and write it as an edge list");
  std::string s_model = "two-class", s_design = "random", s_out = "-";
  std::size_t s_n = 100;
  double s_theta = 0.1, s_alpha = 1.0;
  std::uint64_t s_seed = 1;
  sample->add_option("--model", s_model, "two-class | three-class | five-class | w-theta");
  sample->add_option("--n", s_n, "number of vertices")->check(CLI::PositiveNumber);
  sample->add_option("--theta", s_theta, "model parameter");
  sample->add_option("--alpha", s_alpha, "sparsity scale");
  sample->add_option("--design", s_design, "fixed | random");
  sample->add_option("--seed", s_seed, "master seed");
  sample->add_option("--out", s_out, "output path, - for stdout");

  // estimate
  auto* estimate = app.add_subcommand("estimate", "estimate theta (or tau) from one graph");
  std::string e_method, e_in = "-", e_model, e_mode = "auto";
  std::size_t e_n = 0;
  double e_alpha = 1.0;
  int e_k = 0, e_plugin_k = 0;
  std::uint64_t e_seed = 1;
  estimate->add_option("--method", e_method, "spectral2 | spectral2-sparse | spec-theta | mle | mle-k | tau-plugin")
      ->required();
  estimate->add_option("--in", e_in, "edge list path, - for stdin");
  estimate->add_option("--n", e_n, "vertex count if the edge list has no header");
  estimate->add_option("--alpha", e_alpha, "sparsity scale");
  estimate->add_option("--model", e_model, "template for spec-theta / mle-k (default five-class)");
  estimate->add_option("--k", e_k, "classes for spec-theta, or plug-in blocks for tau-plugin");
  estimate->add_option("--mode", e_mode, "exact | heuristic | auto");
  estimate->add_option("--seed", e_seed, "seed for randomized steps");

  // bench
  auto* bench = app.add_subcommand("bench", "Monte Carlo risk sweep");
  std::string b_plan, b_out = "-", b_model = "two-class", b_estimator = "spectral2", b_design = "random";
  std::vector<std::size_t> b_n;
  std::vector<double> b_theta;
  double b_alpha = 1.0;
  int b_trials = 100;
  std::uint64_t b_seed = 1;
  unsigned b_threads = 0;
  bench->add_option("--plan", b_plan, "JSON plan file (overrides the grid flags)");
  bench->add_option("--out", b_out, "CSV path, - for stdout");
  bench->add_option("--model", b_model, "model name");
  bench->add_option("--estimator", b_estimator, "estimator name");
  bench->add_option("--n", b_n, "sample sizes");
  bench->add_option("--theta", b_theta, "parameter grid");
  bench->add_option("--alpha", b_alpha, "sparsity scale");
  bench->add_option("--trials", b_trials, "trials per cell");
  bench->add_option("--seed", b_seed, "master seed");
  bench->add_option("--design", b_design, "fixed | random");
  bench->add_option("--plugin-k", e_plugin_k, "blocks for tau-plugin (0: ceil(n^(1/3)))");
  bench->add_option("--threads", b_threads, "worker threads (default SBMRATE_THREADS or 1)");

  // bounds
  auto* bounds = app.add_subcommand("bounds", "minimax lower-bound reports");
  std::size_t l_n = 0;
  int l_k = 0;
  double l_alpha = 1.0;
  bounds->add_option("--n", l_n, "number of vertices")->required()->check(CLI::Range(std::size_t{2}, std::size_t{1} << 40));
  bounds->add_option("--k", l_k, "number of classes for the k-class rate");
  bounds->add_option("--alpha", l_alpha, "sparsity scale");

  // check
  auto* check = app.add_subcommand("check", "identifiability and separation conditions");
  std::string c_model = "five-class";
  std::size_t c_n = 1000;
  double c_alpha = 1.0, c_d = 1.0;
  ConditionConstants consts;
  check->add_option("--model", c_model, "model name");
  check->add_option("--n", c_n, "number of vertices");
  check->add_option("--alpha", c_alpha, "sparsity scale");
  check->add_option("--d", c_d, "constant in k^3 log k <= d kappa^4 n");
  check->add_option("--C", consts.C, "constant C");
  check->add_option("--Cs", consts.C_s, "constant C_s");
  check->add_option("--c", consts.c, "constant c in T_K");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n' << app.help();
    return 2;
  }

  try {
    if (*sample) {
      PlanModel m = model_or_usage(s_model);
      Design d = parse_design(s_design);
      Rng rng(s_seed);
      Graph g = sample_cell(m, s_theta, s_alpha, s_n, d, rng);
      if (s_out == "-") {
        write_edge_list(std::cout, g);
      } else {
        std::ofstream out(s_out);
        if (!out) throw std::runtime_error("cannot write " + s_out);
        write_edge_list(out, g);
      }
    } else if (*estimate) {
      Estimator est;
      try {
        est = parse_estimator(e_method);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      Graph g = load_graph(e_in, e_n);
      Rng rng(e_seed);
      Json j;
      switch (est) {
        case Estimator::spectral2: j = to_json(spectral_two_class(g)); break;
        case Estimator::spectral2_sparse: j = to_json(spectral_two_class_sparse(g, e_alpha)); break;
        case Estimator::spec_theta: {
          const int k = e_k > 0 ? e_k : model_or_usage(e_model.empty() ? "five-class" : e_model).k();
          j = to_json(spec_theta(g, k, e_alpha, rng));
          break;
        }
        case Estimator::mle2:
          j = to_json(mle_two_class(g, parse_mode(e_mode, g.size() <= kExactTwoClassMaxN)));
          break;
        case Estimator::mle_k: {
          PlanModel m = model_or_usage(e_model.empty() ? "five-class" : e_model);
          if (m.kind != ModelKind::submodel || m.sub.k < 3) throw UsageError("mle-k needs a model with k >= 3");
          const bool fits = g.size() <= kExactKClassMaxN && m.sub.k <= kExactKClassMaxK;
          j = to_json(mle_k_class(g, m.sub, parse_mode(e_mode, fits), rng));
          break;
        }
        case Estimator::tau_plugin:
          j = to_json(tau_plugin(g, e_k > 0 ? e_k : default_plugin_k(g.size()), rng));
          break;
      }
      j["method"] = to_string(est);
      j["n"] = g.size();
      emit(j);
    } else if (*bench) {
      ExperimentPlan plan;
      try {
        if (!b_plan.empty()) {
          std::ifstream in(b_plan);
          if (!in) throw std::runtime_error("cannot open " + b_plan);
          Json pj;
          try {
            pj = Json::parse(in);
          } catch (const Json::exception& e) {
            throw UsageError(std::string("plan: ") + e.what());
          }
          plan = plan_from_json(pj);
        } else {
          plan.model = named_model(b_model);
          plan.estimator = parse_estimator(b_estimator);
          plan.n_grid = b_n;
          plan.theta_grid = b_theta;
          plan.alpha = b_alpha;
          plan.trials = b_trials;
          plan.master_seed = b_seed;
          plan.design = parse_design(b_design);
          plan.plugin_k = e_plugin_k;
          plan.validate();
        }
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      RiskCurve rows = run_plan(plan, b_threads);
      if (b_out == "-") {
        write_csv(std::cout, rows);
      } else {
        std::ofstream out(b_out);
        if (!out) throw std::runtime_error("cannot write " + b_out);
        write_csv(out, rows);
      }
    } else if (*bounds) {
      BoundReport two = two_class_lower_bound(l_n);
      Json j{{"two_class", to_json(two)}};
      std::fprintf(stderr, "%-14s %.10g\n", "rate", two.rate);
      for (const auto& [k, v] : two.constants) std::fprintf(stderr, "%-14s %.10g\n", k.c_str(), v);
      if (l_k > 0) {
        BoundReport kr = k_class_lower_rate(l_n, l_k, l_alpha);
        j["k_class"] = to_json(kr);
        std::fprintf(stderr, "%-14s %.10g  (%s)\n", "k_class_rate", kr.rate, kr.regime.c_str());
        for (const auto& note : kr.notes) std::fprintf(stderr, "  note: %s\n", note.c_str());
      }
      emit(j);
    } else if (*check) {
      PlanModel m = model_or_usage(c_model);
      if (m.kind != ModelKind::submodel) throw UsageError("check needs a block model");
      emit(Json{{"model", m.name},
                {"n", c_n},
                {"alpha", c_alpha},
                {"conditions", to_json(check_conditions(m.sub, c_n, c_alpha, consts))},
                {"kappa", to_json(check_kappa_conditions(m.sub, c_n, c_d))}});
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
