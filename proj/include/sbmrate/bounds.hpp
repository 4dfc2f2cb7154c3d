#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "sbmrate/model.hpp"

namespace sbmrate {

struct BoundReport {
  double rate = 0.0;
  std::map<std::string, double> constants;
  std::string regime = "dense";
  std::vector<std::string> notes;
};

// r(d) = d + d^2/2 + 8 d^3/6 + (e d)^4 / (sqrt(8 pi) (1 - e d)), 0 <= d < 1/e.
double rademacher_r(double delta);

// (theta - tau)^2 / 4 * (1 - tv/2), floored at 0; tv in [0, 2].
double lecam_bound(double theta, double tau, double tv);

// Bernoulli product base law with parameters s (in (0,1)) against the uniform
// mixture of product laws q[k]:
// N^-2 sum_{k,l} prod_i {1 + (q_ki - s_i)(q_li - s_i) / (s_i (1 - s_i))} - 1.
double chi2_mixture_bound(const std::vector<double>& s, const std::vector<std::vector<double>>& q);

inline constexpr std::size_t kTvOracleMaxN = 5;

// sum over outcomes of |p1 - p2|; both laws on n <= 5 vertices.
double tv_oracle(const DiscreteLaw& a, const DiscreteLaw& b);

// 2 (1 - R/N), 1 <= R <= N.
double mixture_restriction_bound(std::size_t N, std::size_t R);

// The two-class construction on n vertices: the all-1/2 base and the 2^n
// label maps of Q^theta, each as per-pair Bernoulli parameters.
struct TwoClassConstruction {
  std::vector<double> base;
  std::vector<std::vector<double>> components;
};
TwoClassConstruction two_class_construction(std::size_t n, double theta);

// Uniform mixture of the product laws of the given components.
DiscreteLaw mixture_law(std::size_t n, const std::vector<std::vector<double>>& components);

// min over deterministic rules d: outcomes -> {tau, theta} of
// max(E_P (d - tau)^2, E_Q (d - theta)^2), by enumerating every rule.
// Size guard: at most 16 outcomes.
double two_point_minimax_risk(const DiscreteLaw& P, const DiscreteLaw& Q, double theta, double tau);

// Explicit constant chain for two classes. rate uses theta_n^2 = 1/(12 s_n),
// s_n^2 = n(n-1)/2; the c0 / sqrt(n) normalization is reported alongside.
BoundReport two_class_lower_bound(std::size_t n);

// min(1, k / (n alpha)); the constant in front is not numeric.
BoundReport k_class_lower_rate(std::size_t n, int k, double alpha);

}  // namespace sbmrate
