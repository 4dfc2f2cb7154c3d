#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "sbmrate/likelihood.hpp"

using namespace sbmrate;

namespace {

SymMatrix expectation(const SymMatrix& M, const Labelling& phi) {
  SymMatrix x(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i)
    for (std::size_t j = i + 1; j < phi.size(); ++j)
      x.set(i, j, M(static_cast<std::size_t>(phi[i]), static_cast<std::size_t>(phi[j])));
  return x;
}

Labelling from_bits(std::size_t n, unsigned bits) {
  std::vector<int> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = (bits >> i) & 1U;
  return Labelling(a, 2);
}

// counts same/different pairs separately, then combines
double z_reference(const Graph& g, const Labelling& s) {
  double same_edges = 0, same_pairs = 0, diff_edges = 0, diff_pairs = 0;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j) {
      if (s[i] == s[j]) {
        same_pairs += 1;
        same_edges += g.edge(i, j);
      } else {
        diff_pairs += 1;
        diff_edges += g.edge(i, j);
      }
    }
  return 0.5 * (-(same_pairs - 2 * same_edges) + (diff_pairs - 2 * diff_edges));
}

Graph complete(std::size_t n) {
  Graph g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) g.set_edge(i, j);
  return g;
}

}  // namespace

TEST_CASE("theta grid") {
  GridTheta g(4);
  CHECK(g.size() == 33);
  CHECK(g.value(0) == -0.5);
  CHECK(g.value(32) == 0.5);
  CHECK(g.value(16) == 0.0);
  CHECK(g.spacing() == 1.0 / 32);
  auto v = g.values();
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == -v[v.size() - 1 - i]);
  CHECK(g.nearest(0.1) == 3.0 / 32);
  CHECK(g.nearest(1.5 / 32) == 1.0 / 32);
  CHECK(g.nearest(0.9) == 0.5);
  CHECK_THROWS_AS((void)g.value(33), std::out_of_range);
}

TEST_CASE("z criterion") {
  const std::size_t n = 6;
  const double b = 15;
  Labelling c = from_bits(n, 0);
  CHECK(z_criterion(complete(n), c) == b / 2);
  CHECK(z_criterion(Graph(n), c) == -b / 2);

  Graph one(3);
  one.set_edge(0, 1);
  Labelling s({0, 0, 1}, 2);
  CHECK(z_criterion(one, s) == z_reference(one, s));

  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    Graph g(9);
    for (std::size_t i = 0; i < 9; ++i)
      for (std::size_t j = i + 1; j < 9; ++j)
        if (rng.bernoulli(0.4)) g.set_edge(i, j);
    Labelling l = from_bits(9, static_cast<unsigned>(rng.below(512)));
    CHECK(z_criterion(g, l) == doctest::Approx(z_reference(g, l)).epsilon(1e-14));
    // subset form equals the criterion on the induced graph
    std::vector<std::size_t> S{1, 3, 4, 8};
    std::vector<int> sub;
    for (auto v : S) sub.push_back(l[v]);
    CHECK(z_criterion(g.to_matrix(), l, S) == doctest::Approx(z_criterion(g.induced(S), Labelling(sub, 2))));
    // global swap
    std::vector<int> sw = l.assignment();
    for (int& x : sw) x = 1 - x;
    CHECK(z_criterion(g, l) == z_criterion(g, Labelling(sw, 2)));
  }
}

TEST_CASE("two-class MLE on complete and empty graphs") {
  for (auto mode : {FitMode::exact, FitMode::heuristic}) {
    auto f = mle_two_class(complete(7), mode);
    CHECK(f.theta_hat == 0.5);
    CHECK(f.sigma_hat.class_size(0) == 7);
    auto e = mle_two_class(Graph(7), mode);
    CHECK(e.theta_hat == -0.5);
    CHECK(f.mode == mode);
  }
  CHECK_THROWS_AS(mle_two_class(Graph(17), FitMode::exact), std::length_error);
}

TEST_CASE("exact two-class MLE is the lexicographically first maximizer") {
  Rng rng(9);
  Graph g(8);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = i + 1; j < 8; ++j)
      if (rng.bernoulli(0.5)) g.set_edge(i, j);
  auto f = mle_two_class(g, FitMode::exact);
  double best = -1;
  std::vector<int> first;
  // brute force over all 2^8 labellings in lexicographic order
  for (unsigned m = 0; m < 256; ++m) {
    std::vector<int> a(8);
    for (int i = 0; i < 8; ++i) a[i] = (m >> (7 - i)) & 1U;
    const double z = std::abs(z_reference(g, Labelling(a, 2)));
    if (z > best) {
      best = z;
      first = a;
    }
  }
  CHECK(f.objective == best);
  CHECK(f.sigma_hat.assignment() == first);
  CHECK(std::abs(f.theta_hat) == doctest::Approx(best / 28));
}

TEST_CASE("heuristic two-class MLE agrees with exhaustive search") {
  const std::size_t n = 8;
  auto phi = round_robin_labelling(n, 2);
  int agree = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng = Rng::derive({77, seed});
    Graph g = sample_fixed_design(build_qtheta(0.4), phi, rng);
    auto ex = mle_two_class(g, FitMode::exact);
    auto he = mle_two_class(g, FitMode::heuristic);
    CHECK(he.objective <= ex.objective + 1e-12);
    CHECK(std::abs(he.theta_hat) <= 0.5);
    if (he.objective == ex.objective) ++agree;
  }
  CHECK(agree >= 95);
}

TEST_CASE("delta sigma") {
  for (std::size_t n : {5, 6, 7}) {
    const long long b = static_cast<long long>(n * (n - 1) / 2);
    long long lo = b;
    for (unsigned s0 = 0; s0 < (1U << n); ++s0) {
      Labelling l0 = from_bits(n, s0);
      CHECK(delta_sigma(l0, l0) == b);
      CHECK(delta_sigma(from_bits(n, ~s0 & ((1U << n) - 1)), l0) == b);
      for (unsigned s = 0; s < (1U << n); ++s) {
        const long long d = delta_sigma(from_bits(n, s), l0);
        lo = std::min(lo, d);
        CHECK(d <= b);
      }
    }
    CHECK(8 * lo >= -7 * b);
  }
}

TEST_CASE("squared loss is a parabola in theta with vertex Z/b") {
  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = 12;
    Graph g(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (rng.bernoulli(0.45)) g.set_edge(i, j);
    SymMatrix x = g.to_matrix();
    Labelling s = from_bits(n, static_cast<unsigned>(rng.below(4096)));
    const double b = 66, z = z_criterion(x, s);
    const double c = template_loss(x, build_qtheta(0.0), s);
    for (double th : {-0.4, -0.1, 0.0, 0.2, 0.5}) {
      const double lhs = template_loss(x, build_qtheta(th), s) - c;
      CHECK(lhs == doctest::Approx(b * th * th - 2 * z * th).epsilon(1e-12));
    }
  }
}

TEST_CASE("k-class MLE on noiseless input") {
  SubmodelK sub(3, {0.1}, SymMatrix(1, 0.9), 0.0);
  const std::size_t n = 8;
  Labelling truth({0, 1, 2, 0, 1, 2, 0, 1}, 3);
  for (double theta : {0.3, -0.2, 0.0}) {
    SymMatrix x = expectation(sub.with_theta(theta).realize(), truth);
    Rng rng(1);
    auto ex = mle_k_class(x, sub, FitMode::exact, rng);
    CHECK(std::abs(ex.theta_tilde - theta) <= 1.0 / (4 * n * n) + 1e-15);
    CHECK(ex.stage1_loss <= 28 * std::pow(1.0 / (4 * n * n), 2) + 1e-15);
    CHECK(std::abs(ex.theta_hat - theta) <= 1e-12);
    CHECK(ex.S_I.size() == 6);
    auto he = mle_k_class(x, sub, FitMode::heuristic, rng);
    CHECK(he.stage1_loss <= ex.stage1_loss + 1e-9);
    CHECK(std::abs(he.theta_hat - theta) <= 1e-12);
  }
  Rng rng(2);
  CHECK_THROWS_AS(mle_k_class(SymMatrix(9), sub, FitMode::exact, rng), std::length_error);
}

TEST_CASE("k-class MLE heuristic at moderate size") {
  SubmodelK sub(4, {0.1, 0.8}, SymMatrix::from_rows({{0.9, 0.2}, {0.2, 0.1}}), 0.0);
  const std::size_t n = 120;
  auto truth = round_robin_labelling(n, 4);
  Rng g(14), r(15);
  Graph x = sample_fixed_design(sub.with_theta(0.25).realize(), truth, g);
  auto f = mle_k_class(x, sub, FitMode::heuristic, r);
  CHECK(is_balanced(f.sigma_tilde, 4));
  CHECK(f.S_I.size() == 60);
  CHECK(std::abs(f.theta_hat - 0.25) < 0.1);
  CHECK(f.stage1_loss <= template_loss(x.to_matrix(), sub.with_theta(0.25).realize(), truth) + 1e-9);
}

TEST_CASE("k-class MLE on the all-ones graph is deterministic") {
  SubmodelK sub(3, {0.2}, SymMatrix(1, 0.7), 0.0);
  Graph g = complete(8);
  Rng a(4), b(4);
  auto f1 = mle_k_class(g, sub, FitMode::exact, a);
  auto f2 = mle_k_class(g, sub, FitMode::exact, b);
  CHECK(f1.sigma_tilde == f2.sigma_tilde);
  // 0/1 block of sizes (3,3): theta* = (6 - 9) / 30 = -0.1, nearest grid point -13/128
  CHECK(f1.sigma_tilde.assignment() == std::vector<int>{0, 0, 0, 1, 1, 1, 2, 2});
  CHECK(f1.theta_tilde == -13.0 / 128);
  CHECK(f1.stage1_loss == doctest::Approx(11.37).epsilon(1e-3));
  CHECK(f1.theta_hat == 0.5);
}

TEST_CASE("kappa conditions") {
  auto well = check_kappa_conditions(SubmodelK(4, {0.0, 1.0}, SymMatrix::from_rows({{1.0, 0.0}, {0.0, 1.0}}), 0.0), 1000000, 1.0);
  CHECK(well.kappa == 0.25);
  CHECK(well.separation_ok);
  CHECK(well.size_ok);

  auto flat = check_kappa_conditions(SubmodelK(3, {0.5}, SymMatrix(1, 0.5), 0.0), 1000000, 1.0);
  CHECK(flat.kappa == 0.0);
  CHECK_FALSE(flat.separation_ok);
  CHECK_FALSE(flat.size_ok);

  // uniform coefficients at k = 6: 14 values, 2 kappa ~ Beta(1, 14) / 1 scaled by 1/2
  Rng rng(6);
  const int k = 6, m = 1000;
  int hits = 0;
  const double thresh = 0.1 / (k * k);
  for (int t = 0; t < m; ++t) {
    std::vector<double> a(4);
    for (double& v : a) v = rng.uniform();
    SymMatrix B(4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i; j < 4; ++j) B.set(i, j, rng.uniform());
    if (check_kappa_conditions(SubmodelK(k, a, B, 0.0), 1000, 1.0).kappa >= thresh) ++hits;
  }
  const double p = std::pow(1 - 4 * thresh, 14);
  CHECK(std::abs(hits / double(m) - p) <= 4 * std::sqrt(p * (1 - p) / m));
  CHECK(hits >= 800);
}
