#pragma once

#include <cstddef>
#include <limits>
#include <variant>
#include <vector>

#include "sbmrate/graph.hpp"
#include "sbmrate/linalg.hpp"
#include "sbmrate/rng.hpp"

namespace sbmrate {

// Stochastic block model parameters: class proportions, connectivity matrix
// and a global sparsity scale. Edge probabilities are alpha * M.
struct SbmSpec {
  int k = 1;
  std::vector<double> pi;
  SymMatrix M;
  double alpha = 1.0;

  SbmSpec() = default;
  // Validates: pi >= 0 summing to 1 (1e-12), M is k x k, alpha in (0,1],
  // alpha * M entries in [0,1]. Throws std::invalid_argument.
  SbmSpec(std::vector<double> pi, SymMatrix M, double alpha = 1.0);

  [[nodiscard]] SymMatrix edge_probabilities() const;
};

// Uniform proportions over k classes.
std::vector<double> uniform_proportions(int k);

// The k-class one-parameter submodel: upper-left 2x2 block is the affiliation
// block around `base`, classes 1 and 2 share the vector `a` towards the other
// classes, and B connects classes 3..k among themselves.
struct SubmodelK {
  int k = 2;
  std::vector<double> a;  // length k-2
  SymMatrix B;            // (k-2) x (k-2)
  double theta = 0.0;
  double base = 0.5;

  SubmodelK() = default;
  SubmodelK(int k, std::vector<double> a, SymMatrix B, double theta, double base = 0.5);

  [[nodiscard]] SymMatrix realize() const;
  [[nodiscard]] SubmodelK with_theta(double t) const;
};

// The five-class model used in the k > 2 simulation study:
// a = (1/12, 11/12, 1), B = [[1/12, 11/12, 1], [11/12, 11/12, 1], [1, 1, 1]].
SubmodelK five_class_study_model(double theta);

class Graphon {
 public:
  struct BlockConstant {
    std::vector<double> pi;
    SymMatrix M;
  };
  // w(x,y) = sum_{p,q} c[p][q] x^p y^q
  struct Polynomial {
    std::vector<std::vector<double>> c;
  };

  static Graphon block(std::vector<double> pi, SymMatrix M);
  // Throws unless |c_pq| <= coefficient_bound and the grid checks pass.
  static Graphon polynomial(std::vector<std::vector<double>> c,
                            double coefficient_bound = std::numeric_limits<double>::infinity());
  // w(x,y) = 1/2 - theta (x - 1/2)(y - 1/2), theta in [0,1].
  static Graphon w_theta(double theta);
  static Graphon constant(double p);

  [[nodiscard]] double operator()(double x, double y) const;
  [[nodiscard]] const std::variant<BlockConstant, Polynomial>& variant() const { return v_; }
  [[nodiscard]] bool is_block() const { return std::holds_alternative<BlockConstant>(v_); }

  static constexpr std::size_t kValidationGrid = 512;
  static constexpr double kValidationSlack = 1e-9;

 private:
  explicit Graphon(std::variant<BlockConstant, Polynomial> v);
  void validate() const;

  std::variant<BlockConstant, Polynomial> v_;
};

// Exact law of the adjacency over all 2^(n(n-1)/2) outcomes. Outcome index
// bit e is the presence of the e-th pair in row-major upper-triangle order
// (0,1), (0,2), ..., (n-2,n-1).
struct DiscreteLaw {
  std::size_t n = 0;
  std::vector<double> prob;

  [[nodiscard]] double total() const;
};

std::size_t pair_count(std::size_t n);
std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n);  // i < j
Graph outcome_graph(std::size_t n, std::size_t outcome);
std::size_t graph_outcome(const Graph& g);

// Law of independent edges with per-pair probabilities p (row-major pairs).
DiscreteLaw bernoulli_product_law(std::size_t n, const std::vector<double>& pair_probs);

SymMatrix build_qtheta(double theta, double alpha = 1.0, double b = 0.5);
SymMatrix build_mtheta(const SubmodelK& sub);
SymMatrix build_checkerboard(const SymMatrix& A, double theta);

Graph sample_fixed_design(const SymMatrix& M, const Labelling& phi, Rng& rng);

struct RandomDesignDraw {
  Graph graph;
  Labelling latent;  // diagnostics only
};
RandomDesignDraw sample_random_design(const SbmSpec& spec, std::size_t n, Rng& rng);

Graph sample_graphon(const Graphon& w, std::size_t n, Rng& rng);

inline constexpr std::size_t kEnumerateMaxN = 6;
inline constexpr int kEnumerateMaxK = 3;

// Mixture over all label maps with product-form weights pi_{phi(1)}...pi_{phi(n)}.
// Size guard n <= 6, k <= 3 (std::length_error).
DiscreteLaw enumerate_law(const SbmSpec& spec, std::size_t n);

// Law of a block-constant graphon obtained by integrating the latent uniforms
// over the histogram cells. Same guard as enumerate_law.
DiscreteLaw enumerate_graphon_law(const Graphon& w, std::size_t n);

struct BalanceConstants {
  double c1 = 0.5;
  double c2 = 2.0;
};

bool is_balanced(const Labelling& phi, int k, double c1 = 0.5, double c2 = 2.0);

}  // namespace sbmrate
