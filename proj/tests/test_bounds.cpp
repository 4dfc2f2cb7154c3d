#include "doctest.h"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "sbmrate/bounds.hpp"

using namespace sbmrate;

namespace {

// tail summed term by term instead of in closed form
double r_by_series(double d) {
  const double ed = std::numbers::e * d;
  double tail = 0.0, p = std::pow(ed, 4);
  for (int k = 4; k < 2000 && p > 1e-300; ++k, p *= ed) tail += p;
  return d + d * d / 2 + 8 * std::pow(d, 3) / 6 + tail / std::sqrt(8 * std::numbers::pi);
}

DiscreteLaw half_law(std::size_t n) { return bernoulli_product_law(n, std::vector<double>(pair_count(n), 0.5)); }

}  // namespace

TEST_CASE("Rademacher chaos bound") {
  CHECK(rademacher_r(0.0) == 0.0);
  CHECK(std::abs(rademacher_r(1.0 / 3) - 1.87) <= 0.01);
  const double d = 0.1, ed = std::numbers::e * d;
  const double terms = 0.1 + 0.005 + 8 * 0.001 / 6 + std::pow(ed, 4) / (1 - ed) / std::sqrt(8 * std::numbers::pi);
  CHECK(rademacher_r(d) == doctest::Approx(terms).epsilon(1e-14));
  CHECK(rademacher_r(d) == doctest::Approx(r_by_series(d)).epsilon(1e-12));
  double prev = -1;
  for (int i = 0; i <= 350; ++i) {
    const double r = rademacher_r(i / 1000.0);
    CHECK(r > prev);
    prev = r;
  }
  CHECK_THROWS_AS(rademacher_r(0.4), std::domain_error);
  CHECK_THROWS_AS(rademacher_r(-0.1), std::domain_error);

  // the moment series it dominates: sum_k (k-1)^k / k! d^k, with k = 1 term d
  double m = d;
  double fact = 1;
  for (int k = 2; k < 60; ++k) {
    fact *= k;
    m += std::pow(k - 1.0, k) / fact * std::pow(d, k);
  }
  CHECK(m <= rademacher_r(d));
}

TEST_CASE("Le Cam bound") {
  CHECK(lecam_bound(0.3, 0.1, 0.0) == doctest::Approx(0.01));
  CHECK(lecam_bound(0.3, 0.1, 2.0) == 0.0);
  CHECK(lecam_bound(0.1, 0.0, 1.0) == doctest::Approx(0.00125).epsilon(1e-14));
  CHECK_THROWS_AS(lecam_bound(0.1, 0.0, 2.5), std::invalid_argument);
}

TEST_CASE("chi-square mixture bound") {
  std::vector<double> s{0.3, 0.6};
  CHECK(chi2_mixture_bound(s, {s, s}) == doctest::Approx(0.0).epsilon(1e-15));
  const double q = 0.7, b = 0.4;
  CHECK(chi2_mixture_bound({b}, {{q}}) == doctest::Approx((q - b) * (q - b) / (b * (1 - b))).epsilon(1e-14));
  CHECK_THROWS_AS(chi2_mixture_bound({0.0}, {{0.5}}), std::domain_error);

  // n = 3 two-class construction: chi2 from the product formula equals the
  // chi2 computed from the enumerated laws
  for (double theta : {0.1, 0.3}) {
    auto c = two_class_construction(3, theta);
    const double chi = chi2_mixture_bound(c.base, c.components);
    DiscreteLaw P = half_law(3), Q = mixture_law(3, c.components);
    double direct = 0;
    for (std::size_t o = 0; o < P.prob.size(); ++o) direct += (Q.prob[o] - P.prob[o]) * (Q.prob[o] - P.prob[o]) / P.prob[o];
    CHECK(chi == doctest::Approx(direct).epsilon(1e-12));
    const double tv = tv_oracle(P, Q);
    CHECK(tv * tv <= chi + 1e-10);
  }
}

TEST_CASE("TV oracle") {
  DiscreteLaw a = half_law(3);
  CHECK(tv_oracle(a, a) == 0.0);
  DiscreteLaw p{2, {1.0, 0.0}}, q{2, {0.0, 1.0}};
  CHECK(tv_oracle(p, q) == 2.0);
  CHECK_THROWS_AS(tv_oracle(half_law(6), half_law(6)), std::length_error);

  auto c = two_class_construction(4, 0.3);
  DiscreteLaw Q = mixture_law(4, c.components);
  CHECK(std::abs(Q.total() - 1.0) <= 1e-12);
  // the SBM enumeration gives the same mixture
  DiscreteLaw E = enumerate_law(SbmSpec(uniform_proportions(2), build_qtheta(0.3)), 4);
  CHECK(tv_oracle(Q, E) <= 1e-12);
  CHECK(tv_oracle(half_law(4), Q) <= std::sqrt(chi2_mixture_bound(c.base, c.components)) + 1e-10);
}

TEST_CASE("mixture restriction") {
  CHECK(mixture_restriction_bound(8, 8) == 0.0);
  CHECK(mixture_restriction_bound(8, 4) == 1.0);
  CHECK_THROWS_AS(mixture_restriction_bound(4, 5), std::invalid_argument);
  CHECK_THROWS_AS(mixture_restriction_bound(4, 0), std::invalid_argument);

  auto c = two_class_construction(3, 0.3);
  DiscreteLaw full = mixture_law(3, c.components);
  std::vector<std::vector<double>> half(c.components.begin(), c.components.begin() + 4);
  CHECK(tv_oracle(full, mixture_law(3, half)) <= mixture_restriction_bound(8, 4) + 1e-12);
  std::vector<std::vector<double>> one(c.components.begin() + 3, c.components.begin() + 4);
  CHECK(tv_oracle(full, mixture_law(3, one)) <= mixture_restriction_bound(8, 1) + 1e-12);
}

TEST_CASE("Le Cam bound never exceeds the two-point minimax risk") {
  for (double theta : {0.1, 0.3, 0.5}) {
    auto c = two_class_construction(3, theta);
    DiscreteLaw P = half_law(3), Q = mixture_law(3, c.components);
    const double lb = lecam_bound(theta, 0.0, tv_oracle(P, Q));
    const double risk = two_point_minimax_risk(P, Q, theta, 0.0);
    CHECK(lb <= risk + 1e-15);
    CHECK(risk <= theta * theta / 2 + 1e-15);
  }
  CHECK(two_point_minimax_risk(DiscreteLaw{2, {1, 0}}, DiscreteLaw{2, {0, 1}}, 0.3, 0.0) == 0.0);
}

TEST_CASE("two-class lower bound constants") {
  const double r3 = rademacher_r(1.0 / 3);
  const double lo = std::sqrt(2.0) / 48 * (1 - 0.5 * std::sqrt(r3));
  for (std::size_t n : {2, 3, 10, 57, 100, 1000, 10000}) {
    auto b = two_class_lower_bound(n);
    CHECK(b.constants.at("delta") == doctest::Approx(1.0 / 3).epsilon(1e-14));
    CHECK(b.constants.at("r_delta") == doctest::Approx(r3).epsilon(1e-14));
    CHECK(b.rate > 0);
    // s_n <= n / sqrt(2) brackets rate * n
    CHECK(b.rate * n >= lo * (1 - 1e-12));
    CHECK(b.rate * n <= std::sqrt(2.0) / 48);
    CHECK(b.constants.at("rate_c0") > 0);
  }
  CHECK(two_class_lower_bound(100).rate >= 1.0 / 10700);
  CHECK(two_class_lower_bound(2).constants.at("s_n") == 1.0);
  CHECK_THROWS_AS(two_class_lower_bound(1), std::invalid_argument);
}

TEST_CASE("k-class rate shape") {
  CHECK(k_class_lower_rate(1200, 5, 1.0).rate == doctest::Approx(1.0 / 240));
  CHECK(k_class_lower_rate(100, 2, 1.0).rate == doctest::Approx(1.0 / 50));
  auto s = k_class_lower_rate(100, 5, 0.01);
  CHECK(s.rate == 1.0);
  CHECK(s.regime == "sparse");
  CHECK(k_class_lower_rate(20, 5, 1.0).notes.size() == 2);
}
