#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "sbmrate/functionals.hpp"

using namespace sbmrate;

namespace {

// symmetric 3x3 coefficients around 1/2 with |c| <= 0.05, so w stays in [0.1, 0.9]
Graphon random_polynomial(Rng& rng) {
  std::vector<std::vector<double>> c(3, std::vector<double>(3, 0.0));
  for (std::size_t p = 0; p < 3; ++p)
    for (std::size_t q = p; q < 3; ++q) c[p][q] = c[q][p] = 0.1 * rng.uniform() - 0.05;
  c[0][0] = 0.5;
  return Graphon::polynomial(c);
}

}  // namespace

TEST_CASE("closed form tau") {
  CHECK(tau_exact(Graphon::constant(0.3)).tau == 0.0);
  for (double theta : {0.0, 0.1, -0.3, 0.5}) {
    auto v = tau_exact(Graphon::block(uniform_proportions(2), build_qtheta(theta)));
    CHECK(v.tau == doctest::Approx(std::abs(theta)).epsilon(1e-14));
    CHECK(v.method == TauMethod::closed_form);
  }
  for (double theta : {0.0, 0.24, 1.0})
    CHECK(tau_exact(Graphon::w_theta(theta)).tau == doctest::Approx(theta / 12).epsilon(1e-12));
}

TEST_CASE("quadrature oracle") {
  CHECK(std::abs(tau_quadrature(Graphon::w_theta(0.24), 1024).tau - 0.02) <= 1e-6);
  CHECK(tau_quadrature(Graphon::constant(0.7), 64).tau <= 1e-12);
  CHECK(std::abs(tau_quadrature(Graphon::block(uniform_proportions(2), build_qtheta(0.3)), 1024).tau - 0.3) <= 1e-12);
  CHECK_THROWS_AS(tau_quadrature(Graphon::constant(0.5), 63), std::invalid_argument);

  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    Graphon w = random_polynomial(rng);
    const double exact = tau_exact(w).tau;
    CHECK(std::abs(tau_quadrature(w, 512).tau - exact) <= std::max(1e-6, 1.0 / (512.0 * 512.0)));
  }
}

TEST_CASE("relabeling invariance") {
  std::vector<double> pi{0.2, 0.5, 0.3};
  SymMatrix M = SymMatrix::from_rows({{0.9, 0.1, 0.4}, {0.1, 0.6, 0.2}, {0.4, 0.2, 0.05}});
  const double base = tau_exact(Graphon::block(pi, M)).tau;
  std::vector<std::size_t> perm{2, 0, 1};
  std::vector<double> pp(3);
  SymMatrix pm(3);
  for (std::size_t i = 0; i < 3; ++i) {
    pp[i] = pi[perm[i]];
    for (std::size_t j = 0; j < 3; ++j) pm.set(i, j, M(perm[i], perm[j]));
  }
  CHECK(tau_exact(Graphon::block(pp, pm)).tau == doctest::Approx(base).epsilon(1e-14));
}

TEST_CASE("tau is Lipschitz in L2") {
  Rng rng(8);
  for (int t = 0; t < 20; ++t) {
    Graphon a = random_polynomial(rng);
    Graphon b = t % 2 ? random_polynomial(rng)
                      : Graphon::block({0.4, 0.6}, SymMatrix::from_rows({{rng.uniform(), 0.3}, {0.3, rng.uniform()}}));
    const double d = l2_distance(a, b, 256);
    const double diff = tau_quadrature(a, 256).tau - tau_quadrature(b, 256).tau;
    CHECK(diff * diff <= 2 * d * d + 1e-15);
  }
}

TEST_CASE("plug-in k") {
  CHECK(default_plugin_k(1) == 1);
  CHECK(default_plugin_k(8) == 2);
  CHECK(default_plugin_k(9) == 3);
  CHECK(default_plugin_k(1000) == 10);
  CHECK(default_plugin_k(1001) == 11);
}

TEST_CASE("plug-in estimator") {
  Rng rng(3);
  Graph er = sample_graphon(Graphon::constant(0.5), 200, rng);
  auto v = tau_plugin(er, 1, rng);
  CHECK(v.tau == 0.0);
  CHECK(v.method == TauMethod::plugin);
  CHECK_THROWS_AS(tau_plugin(er, 101, rng), std::invalid_argument);

  Graphon sbm = Graphon::block(uniform_proportions(2), build_qtheta(0.1));
  std::vector<double> risk;
  for (std::size_t n : {100, 300, 800}) {
    double s = 0;
    const int trials = 40;
    for (int t = 0; t < trials; ++t) {
      Rng r = Rng::derive({91, n, static_cast<std::uint64_t>(t)});
      Graph g = sample_graphon(sbm, n, r);
      const double e = tau_plugin(g, 2, r).tau - 0.1;
      s += e * e;
    }
    risk.push_back(s / trials);
  }
  CHECK(risk[0] > risk[1]);
  CHECK(risk[1] > risk[2]);
}

TEST_CASE("plug-in on a smooth graphon") {
  Rng rng = Rng::derive({5, 800});
  Graph g = sample_graphon(Graphon::w_theta(0.3), 800, rng);
  auto v = tau_plugin(g, 8, rng);
  CHECK(std::abs(v.tau - 0.025) < 0.02);
  CHECK(v.tau == doctest::Approx(0.036253851843).epsilon(1e-9));
}
