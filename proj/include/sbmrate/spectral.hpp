#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sbmrate/graph.hpp"
#include "sbmrate/linalg.hpp"
#include "sbmrate/model.hpp"
#include "sbmrate/rng.hpp"

namespace sbmrate {

// Diagnostic flag names shared by the estimators. Flags never suppress a
// result; they mark degraded confidence.
namespace flag {
inline constexpr const char* kEigenNotConverged = "eigen_not_converged";
inline constexpr const char* kSignTie = "eigen_sign_tie";
inline constexpr const char* kGapDegenerate = "eigen_gap_degenerate";
inline constexpr const char* kSparsityBelowB0 = "sparsity_below_b0";
inline constexpr const char* kEmptyCluster = "empty_cluster";
inline constexpr const char* kRefineOscillation = "refine_oscillation";
inline constexpr const char* kIndistinguishable = "indistinguishable_classes";
inline constexpr const char* kAmbiguousHalf = "ambiguous_half_cluster";
inline constexpr const char* kHalfTie = "half_cluster_tie";
inline constexpr const char* kTinyCluster = "selected_cluster_too_small";
}  // namespace flag

void add_flag(std::vector<std::string>& flags, const std::string& f);
void merge_flags(std::vector<std::string>& into, const std::vector<std::string>& from);

struct ThetaEstimate {
  double theta = 0.0;       // clamped to [-1/2, 1/2]
  double raw = 0.0;         // before clamping
  double eigenvalue = 0.0;  // signed largest-modulus eigenvalue of the centred matrix
  std::vector<std::string> flags;
};

// Centred adjacency X - (alpha/2) J with zero diagonal; off-diagonal entries of
// `x` are read, its diagonal ignored.
SymMatrix centred_adjacency(const SymMatrix& x, double alpha = 1.0);

// lambda_1^a(X - J/2) / (n-1), clamped. Accepts fractional entries in [0,1].
ThetaEstimate spectral_two_class(const SymMatrix& x, const EigenOptions& eig = {});
ThetaEstimate spectral_two_class(const Graph& g, const EigenOptions& eig = {});

inline constexpr double kDefaultCs = 5.0;

// lambda_1^a(X - alpha J/2) / ((n-1) alpha), clamped. Flags alpha below
// C_s log(n)/n.
ThetaEstimate spectral_two_class_sparse(const SymMatrix& x, double alpha, double c_s = kDefaultCs,
                                        const EigenOptions& eig = {});
ThetaEstimate spectral_two_class_sparse(const Graph& g, double alpha, double c_s = kDefaultCs,
                                        const EigenOptions& eig = {});

struct ClusterResult {
  Labelling labels;
  std::vector<std::vector<double>> centers;  // K rows in eigenvector-row space
  double objective = 0.0;                    // k-means within-cluster sum of squares
  // 4 * objective / (minimal squared centre separation): a Markov-type bound
  // on the number of rows closer to a foreign centre than to their own.
  double mismatch_bound = 0.0;
  std::vector<std::string> flags;
};

struct ClusterOptions {
  EigenOptions eigen{1e-6, 3000, EigenMethod::krylov, 0x5eedULL};
  int restarts = 10;
  int lloyd_iterations = 100;
};

// Top-K eigenvectors of the adjacency (zero diagonal) followed by k-means on
// the rows of the n x K eigenvector matrix (farthest-point seeding, best of
// `restarts` Lloyd runs).
ClusterResult spectral_cluster(const SymMatrix& x, int K, Rng& rng, const ClusterOptions& opt = {});
ClusterResult spectral_cluster(const Graph& g, int K, Rng& rng, const ClusterOptions& opt = {});

// k-means on explicit points (rows); exposed for testing.
ClusterResult kmeans(const std::vector<std::vector<double>>& points, int K, Rng& rng, int restarts = 10,
                     int max_iterations = 100);

struct RefineOptions {
  int max_passes = 20;
  double probability_floor = 1e-6;  // block means clipped to [floor, 1 - floor]
  double distinguish_z = 3.0;       // Wald threshold for the indistinguishable-classes flag
};

struct RefineResult {
  ClusterResult cluster;
  int passes = 0;
  int reassigned = 0;  // total reassignments over all passes
};

// Block-means matrix of a labelling: within-class pair density on the
// diagonal, between-class density off it.
SymMatrix block_means(const SymMatrix& x, const Labelling& labels);

// Likelihood-based local refinement: every pass reassigns each vertex to the
// class maximizing the Bernoulli log-likelihood of its edge counts against the
// current block means. Stops at a fixpoint, a repeated labelling, or the pass
// limit.
RefineResult refine_labels(const SymMatrix& x, const ClusterResult& initial, int K, const RefineOptions& opt = {});

// Bernoulli profile log-likelihood of a labelling with block means plugged in
// (clipped to [floor, 1 - floor]).
double profile_log_likelihood(const SymMatrix& x, const Labelling& labels, double floor = 1e-6);

// refine_labels followed by split-merge moves: a class is split by 2-means on
// the vertices' per-class edge densities, the cheapest pair of the K+1
// classes is merged, the result is refined again and kept only when the
// profile log-likelihood improves. Up to `rounds` sweeps over the classes.
RefineResult split_merge_refine(const SymMatrix& x, const ClusterResult& initial, int K, Rng& rng,
                                const RefineOptions& opt = {}, int rounds = 3);

struct HalfCluster {
  int index = 0;
  std::vector<double> densities;  // within-class pair density per class
  double distance = 0.0;          // |density - 1/2| of the selected class
  double margin = 0.0;            // second-smallest distance to 1/2
  std::vector<std::string> flags;
};

// Class whose within-class density is closest to 1/2. Throws
// std::invalid_argument when a class has fewer than 2 vertices.
HalfCluster identify_half_cluster(const SymMatrix& x, const Labelling& labels, double kappa);

struct SpecThetaOptions {
  ClusterOptions cluster;
  RefineOptions refine;
  EigenOptions final_eigen;   // for the two-class step
  double kappa = 0.1;         // margin diagnostic for the half-cluster step
  bool split_merge = true;    // split_merge_refine instead of plain refine_labels
  int split_merge_rounds = 3;
  double c_s = kDefaultCs;
};

struct SpecThetaResult {
  double theta = 0.0;
  std::vector<std::size_t> cluster_sizes;
  std::vector<double> densities;
  int selected = 0;
  double margin = 0.0;
  double cluster_objective = 0.0;
  int refine_passes = 0;
  double eigen_residual = 0.0;
  Labelling labels;  // aggregated labelling after refinement
  std::vector<std::string> flags;
};

// Three-step estimator for k >= 3: aggregated clustering into k-1 classes,
// half-cluster identification, two-class spectral estimate on the selected
// class (sparse variant with the given alpha).
SpecThetaResult spec_theta(const SymMatrix& x, int k, double alpha, Rng& rng, const SpecThetaOptions& opt = {});
SpecThetaResult spec_theta(const Graph& g, int k, double alpha, Rng& rng, const SpecThetaOptions& opt = {});

struct ConditionConstants {
  double C = 1.0;     // (A2)/(B2) and (A3)
  double C_s = 5.0;   // (B0)
  double c = 0.1;     // T_K
};

struct ConditionsReport {
  SymMatrix N;
  double gamma = 0.0;
  double lambda = 0.0;
  double kappa = 0.0;
  bool a1_ok = false, a2_ok = false, a3_ok = false, b0_ok = false, b2_ok = false;
  double T_K = 0.0;
  ConditionConstants constants;
};

// (k-1)x(k-1) matrix obtained by merging classes 1 and 2 of the theta = 0 model.
SymMatrix aggregated_matrix(const SubmodelK& sub);

ConditionsReport check_conditions(const SubmodelK& sub, std::size_t n, double alpha,
                                  const ConditionConstants& c = {});

}  // namespace sbmrate
