#include "sbmrate/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace sbmrate {

double rademacher_r(double delta) {
  const double ed = std::numbers::e * delta;
  if (!(delta >= 0.0) || ed >= 1.0) throw std::domain_error("rademacher_r: need 0 <= delta < 1/e");
  const double tail = std::pow(ed, 4) / ((1.0 - ed) * std::sqrt(8.0 * std::numbers::pi));
  return delta + delta * delta / 2.0 + 8.0 * delta * delta * delta / 6.0 + tail;
}

double lecam_bound(double theta, double tau, double tv) {
  if (!(tv >= 0.0 && tv <= 2.0)) throw std::invalid_argument("lecam_bound: tv must lie in [0,2]");
  const double d = theta - tau;
  return std::max(0.0, 0.25 * d * d * (1.0 - 0.5 * tv));
}

double chi2_mixture_bound(const std::vector<double>& s, const std::vector<std::vector<double>>& q) {
  if (q.empty()) throw std::invalid_argument("chi2_mixture_bound: empty mixture");
  for (double v : s)
    if (!(v > 0.0 && v < 1.0)) throw std::domain_error("chi2_mixture_bound: base parameters must lie in (0,1)");
  for (const auto& c : q)
    if (c.size() != s.size()) throw std::invalid_argument("chi2_mixture_bound: component length mismatch");
  const std::size_t N = q.size();
  double sum = 0.0;
  for (std::size_t k = 0; k < N; ++k)
    for (std::size_t l = 0; l < N; ++l) {
      double prod = 1.0;
      for (std::size_t i = 0; i < s.size(); ++i)
        prod *= 1.0 + (q[k][i] - s[i]) * (q[l][i] - s[i]) / (s[i] * (1.0 - s[i]));
      sum += prod;
    }
  return sum / (static_cast<double>(N) * static_cast<double>(N)) - 1.0;
}

double tv_oracle(const DiscreteLaw& a, const DiscreteLaw& b) {
  if (a.n != b.n || a.prob.size() != b.prob.size()) throw std::invalid_argument("tv_oracle: laws on different spaces");
  if (a.n > kTvOracleMaxN) throw std::length_error("tv_oracle: n <= 5 required");
  double s = 0.0;
  for (std::size_t o = 0; o < a.prob.size(); ++o) s += std::abs(a.prob[o] - b.prob[o]);
  return s;
}

double mixture_restriction_bound(std::size_t N, std::size_t R) {
  if (R < 1 || R > N) throw std::invalid_argument("mixture_restriction_bound: need 1 <= R <= N");
  return 2.0 * (1.0 - static_cast<double>(R) / static_cast<double>(N));
}

TwoClassConstruction two_class_construction(std::size_t n, double theta) {
  if (n < 2 || n > 20) throw std::invalid_argument("two_class_construction: need 2 <= n <= 20");
  const SymMatrix Q = build_qtheta(theta);
  TwoClassConstruction c;
  c.base.assign(pair_count(n), 0.5);
  for (std::size_t m = 0; m < (std::size_t{1} << n); ++m) {
    std::vector<double> p;
    p.reserve(pair_count(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) p.push_back(Q((m >> i) & 1U, (m >> j) & 1U));
    c.components.push_back(std::move(p));
  }
  return c;
}

DiscreteLaw mixture_law(std::size_t n, const std::vector<std::vector<double>>& components) {
  if (components.empty()) throw std::invalid_argument("mixture_law: empty mixture");
  DiscreteLaw law{n, std::vector<double>(std::size_t{1} << pair_count(n), 0.0)};
  const double w = 1.0 / static_cast<double>(components.size());
  for (const auto& c : components) {
    DiscreteLaw l = bernoulli_product_law(n, c);
    for (std::size_t o = 0; o < law.prob.size(); ++o) law.prob[o] += w * l.prob[o];
  }
  return law;
}

double two_point_minimax_risk(const DiscreteLaw& P, const DiscreteLaw& Q, double theta, double tau) {
  if (P.prob.size() != Q.prob.size()) throw std::invalid_argument("two_point_minimax_risk: laws on different spaces");
  const std::size_t m = P.prob.size();
  if (m > 16) throw std::length_error("two_point_minimax_risk: at most 16 outcomes");
  const double d2 = (theta - tau) * (theta - tau);
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t rule = 0; rule < (std::uint64_t{1} << m); ++rule) {
    // bit o set: the rule answers theta on outcome o
    double p_wrong = 0.0, q_wrong = 0.0;
    for (std::size_t o = 0; o < m; ++o) {
      if ((rule >> o) & 1U)
        p_wrong += P.prob[o];
      else
        q_wrong += Q.prob[o];
    }
    best = std::min(best, d2 * std::max(p_wrong, q_wrong));
  }
  return best;
}

BoundReport two_class_lower_bound(std::size_t n) {
  if (n < 2) throw std::invalid_argument("two_class_lower_bound: n >= 2 required");
  const double nd = static_cast<double>(n);
  const double s_n = std::sqrt(nd * (nd - 1.0) / 2.0);
  const double theta2 = 1.0 / (12.0 * s_n);
  const double delta = 4.0 * theta2 * s_n;
  const double r = rademacher_r(delta);
  const double rate = theta2 / 4.0 * (1.0 - 0.5 * std::sqrt(r));

  const double c0 = 1.0 / (3.0 * std::pow(2.0, 0.75));
  const double theta_c0 = c0 / std::sqrt(nd);
  const double delta_c0 = 4.0 * theta_c0 * theta_c0 * s_n;
  const double rate_c0 = theta_c0 * theta_c0 / 4.0 * (1.0 - 0.5 * std::sqrt(rademacher_r(delta_c0)));

  BoundReport b;
  b.rate = std::max(0.0, rate);
  b.regime = "dense";
  b.constants = {{"n", nd},
                 {"s_n", s_n},
                 {"theta_n", std::sqrt(theta2)},
                 {"theta_n_sq", theta2},
                 {"delta", delta},
                 {"r_delta", r},
                 {"r_one_third", rademacher_r(1.0 / 3.0)},
                 {"tv_bound", std::sqrt(r)},
                 {"rate_times_n", rate * nd},
                 {"c1", 1.0 / 107.0},
                 {"c0", c0},
                 {"theta_n_c0", theta_c0},
                 {"delta_c0", delta_c0},
                 {"rate_c0", std::max(0.0, rate_c0)}};
  return b;
}

BoundReport k_class_lower_rate(std::size_t n, int k, double alpha) {
  if (n < 1 || k < 2) throw std::invalid_argument("k_class_lower_rate: need n >= 1, k >= 2");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("k_class_lower_rate: alpha must lie in (0,1]");
  const double nd = static_cast<double>(n);
  BoundReport b;
  b.rate = std::min(1.0, k / (nd * alpha));
  b.regime = alpha == 1.0 ? "dense" : "sparse";
  b.constants = {{"n", nd}, {"k", static_cast<double>(k)}, {"alpha", alpha}, {"n_alpha", nd * alpha}};
  b.notes.push_back("rate shape only: the multiplicative constant c3 is not numeric");
  if (n < 12 * static_cast<std::size_t>(k)) b.notes.push_back("n < 12k: outside the hypothesis of the dense k-class bound");
  return b;
}

}  // namespace sbmrate
