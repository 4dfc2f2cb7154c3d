#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sbmrate/graph.hpp"
#include "sbmrate/linalg.hpp"
#include "sbmrate/model.hpp"
#include "sbmrate/rng.hpp"

namespace sbmrate {

// The grid {i / (2 n^2) : i = -n^2, ..., n^2}, addressed by index without
// materializing it.
class GridTheta {
 public:
  explicit GridTheta(std::size_t n);

  [[nodiscard]] std::size_t size() const { return 2 * half_ + 1; }
  [[nodiscard]] double spacing() const { return 1.0 / (2.0 * static_cast<double>(half_)); }
  [[nodiscard]] double value(std::size_t idx) const;
  [[nodiscard]] std::vector<double> values() const;
  // Grid point closest to t (clamped to [-1/2, 1/2]); exact midpoints go to
  // the smaller value.
  [[nodiscard]] double nearest(double t) const;

 private:
  std::size_t half_;  // n^2
};

enum class FitMode { exact, heuristic };

std::string to_string(FitMode m);

struct FitResult {
  double theta_hat = 0.0;
  Labelling sigma_hat;       // 2-class labelling of S_I (of all vertices on the two-class path)
  double objective = 0.0;    // |Z_n(sigma_hat, S_I, X)|
  FitMode mode = FitMode::exact;
  std::vector<std::size_t> S_I;
  // k-class path only
  Labelling sigma_tilde;     // stage-1 labelling
  double theta_tilde = 0.0;  // stage-1 grid value
  double stage1_loss = 0.0;  // sum_{i<j} (X_ij - Z^theta_{sigma(i) sigma(j)})^2
  FitMode stage1_mode = FitMode::exact;
};

// 2 Z = - sum_{same class} (1 - 2 X_ij) + sum_{different class} (1 - 2 X_ij)
// over pairs i < j inside S.
double z_criterion(const SymMatrix& x, const Labelling& sigma, std::span<const std::size_t> S);
double z_criterion(const SymMatrix& x, const Labelling& sigma);
double z_criterion(const Graph& g, const Labelling& sigma);

inline constexpr std::size_t kExactTwoClassMaxN = 16;

// argmax_sigma |Z_n(sigma, X)|, theta_hat = Z_n(sigma_hat) / b_n. Exact mode
// enumerates all labellings (n <= 16, std::length_error otherwise) and keeps
// the lexicographically smallest maximizer; heuristic mode starts from the
// sign pattern of the leading eigenvector of X - J/2 and from the constant
// labelling and climbs with single-vertex flips.
FitResult mle_two_class(const SymMatrix& x, FitMode mode);
FitResult mle_two_class(const Graph& g, FitMode mode);

// sum_{i<j} (-1)^{1{sigma0(i) != sigma0(j)}} (-1)^{1{sigma(i) != sigma(j)}}
long long delta_sigma(const Labelling& sigma, const Labelling& sigma0);

inline constexpr std::size_t kExactKClassMaxN = 8;
inline constexpr int kExactKClassMaxK = 3;

struct MleKOptions {
  BalanceConstants balance;
  int rounds = 20;
  int restarts = 5;
};

// Two-stage estimator. Stage 1: least-squares fit of the template M^theta
// (a, B of `sub`; its theta is ignored) over balanced labellings and the grid.
// Stage 2: profile step on S_I = stage-1 classes {1,2}. Throws
// std::runtime_error when |S_I| < 2 and std::length_error when exact mode
// exceeds n <= 8, k <= 3.
FitResult mle_k_class(const SymMatrix& x, const SubmodelK& sub, FitMode mode, Rng& rng, const MleKOptions& opt = {});
FitResult mle_k_class(const Graph& g, const SubmodelK& sub, FitMode mode, Rng& rng, const MleKOptions& opt = {});

// Stage-1 loss of a given labelling and theta.
double template_loss(const SymMatrix& x, const SymMatrix& M, const Labelling& sigma);

struct KappaReport {
  double kappa = 0.0;        // min_{c in C} |c - a0| / 2
  bool separation_ok = false;  // min |c - a0| >= 2 kappa > 0
  double lhs = 0.0;          // k^3 log k
  double rhs = 0.0;          // d kappa^4 n
  bool size_ok = false;      // lhs <= rhs
};

KappaReport check_kappa_conditions(const SubmodelK& sub, std::size_t n, double d);

}  // namespace sbmrate
