#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "sbmrate/linalg.hpp"
#include "sbmrate/rng.hpp"

using namespace sbmrate;

namespace {

SymMatrix random_sym(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  SymMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a.set(i, j, 2.0 * rng.uniform() - 1.0);
  return a;
}

double residual(const SymMatrix& a, const EigenPair& p) {
  auto av = a.apply(p.vector);
  double s = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) s += (av[i] - p.value * p.vector[i]) * (av[i] - p.value * p.vector[i]);
  return std::sqrt(s);
}

SymMatrix theta_v_minus_i(std::size_t n, double theta) {
  SymMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double vi = i < n / 2 ? 1.0 : -1.0, vj = j < n / 2 ? 1.0 : -1.0;
      a.set(i, j, theta * vi * vj);
    }
  return a;
}

}  // namespace

TEST_CASE("frobenius norm") {
  CHECK(frobenius_norm(SymMatrix::identity(3)) == doctest::Approx(std::sqrt(3.0)));
  CHECK(frobenius_norm(SymMatrix::from_rows({{3, 4}, {4, 3}})) == doctest::Approx(std::sqrt(50.0)));
  CHECK(frobenius_norm(SymMatrix(4)) == 0.0);
}

TEST_CASE("symmetric storage is exact") {
  SymMatrix a(3);
  a.set(0, 2, 0.1 + 0.2);
  CHECK(a(0, 2) == a(2, 0));
  CHECK_THROWS_AS(SymMatrix::from_rows({{1, 2}, {2.0000001, 1}}), std::invalid_argument);
}

TEST_CASE("largest absolute eigenvalue") {
  std::vector<double> d{1.0, -3.0};
  auto r = largest_abs_eigenvalue(SymMatrix::diagonal(d));
  CHECK(r.converged);
  CHECK(r.pair.value == doctest::Approx(-3.0).epsilon(1e-12));

  for (EigenMethod m : {EigenMethod::krylov, EigenMethod::power}) {
    EigenOptions opt;
    opt.method = m;
    auto t = largest_abs_eigenvalue(theta_v_minus_i(40, 0.2), opt);
    CHECK(t.pair.value == doctest::Approx(39 * 0.2).epsilon(1e-10));
    SymMatrix half(4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i + 1; j < 4; ++j) half.set(i, j, 0.5);
    CHECK(largest_abs_eigenvalue(half, opt).pair.value == doctest::Approx(1.5).epsilon(1e-10));
  }

  CHECK_THROWS_AS(largest_abs_eigenvalue(SymMatrix(3)), std::invalid_argument);
}

TEST_CASE("sign tie returns the positive eigenvalue and flags it") {
  std::vector<double> d{2.0, -2.0, 0.5};
  for (EigenMethod m : {EigenMethod::krylov, EigenMethod::power}) {
    EigenOptions opt;
    opt.method = m;
    auto r = largest_abs_eigenvalue(SymMatrix::diagonal(d), opt);
    CHECK(r.sign_tie);
    CHECK(r.pair.value == doctest::Approx(2.0));
  }
}

TEST_CASE("top-k eigenpairs") {
  std::vector<double> d{5.0, -4.0, 1.0};
  auto t = top_k_eigenpairs(SymMatrix::diagonal(d), 2);
  REQUIRE(t.pairs.size() == 2);
  CHECK(t.pairs[0].value == doctest::Approx(5.0));
  CHECK(t.pairs[1].value == doctest::Approx(-4.0));

  std::vector<double> v{1.0, 2.0, -2.0};
  SymMatrix r1(3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i; j < 3; ++j) r1.set(i, j, v[i] * v[j]);
  auto o = top_k_eigenpairs(r1, 1);
  CHECK(o.pairs[0].value == doctest::Approx(9.0));
  // largest-modulus coordinates are 2 and -2; the first one is made positive
  CHECK(o.pairs[0].vector[1] == doctest::Approx(2.0 / 3.0));
  CHECK(o.pairs[0].vector[0] == doctest::Approx(1.0 / 3.0));

  CHECK_THROWS_AS(top_k_eigenpairs(SymMatrix::identity(2), 3), std::invalid_argument);
}

TEST_CASE("random 20x20 top-3 against Jacobi oracle") {
  for (EigenMethod m : {EigenMethod::krylov, EigenMethod::power}) {
    EigenOptions opt;
    opt.method = m;
    SymMatrix a = random_sym(20, 77);
    auto t = top_k_eigenpairs(a, 3, opt);
    CHECK(t.converged);
    auto full = jacobi_full_eigen(a);
    std::sort(full.begin(), full.end(), [](auto& x, auto& y) { return std::abs(x.value) > std::abs(y.value); });
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(t.pairs[i].value == doctest::Approx(full[i].value).epsilon(1e-8));
      CHECK(residual(a, t.pairs[i]) <= 1e-8);
      for (std::size_t j = 0; j < 3; ++j)
        CHECK(std::abs(dot(t.pairs[i].vector, t.pairs[j].vector) - (i == j ? 1.0 : 0.0)) <= 1e-8);
    }
  }
}

TEST_CASE("Jacobi oracle") {
  auto e = jacobi_full_eigen(SymMatrix::from_rows({{0.5, 0.1}, {0.1, 0.9}}));
  CHECK(e[0].value == doctest::Approx((1.4 + std::sqrt(0.2)) / 2).epsilon(1e-14));
  CHECK(e[1].value == doctest::Approx((1.4 - std::sqrt(0.2)) / 2).epsilon(1e-14));
  for (const auto& p : jacobi_full_eigen(SymMatrix::identity(5))) CHECK(p.value == doctest::Approx(1.0));
  std::vector<double> d{3.0, -1.0, 2.0};
  auto dd = jacobi_full_eigen(SymMatrix::diagonal(d));
  CHECK(dd[0].value == 3.0);
  CHECK(dd[1].value == 2.0);
  CHECK(dd[2].value == -1.0);
  CHECK_THROWS_AS(jacobi_full_eigen(SymMatrix(kJacobiMaxSize + 1)), std::length_error);
}

TEST_CASE("property: iterative solvers agree with Jacobi for n <= 64") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const std::size_t n = 2 + static_cast<std::size_t>(seed * 5 % 63);
    SymMatrix a = random_sym(n, seed);
    auto full = jacobi_full_eigen(a);
    std::sort(full.begin(), full.end(), [](auto& x, auto& y) { return std::abs(x.value) > std::abs(y.value); });
    const std::size_t k = std::min<std::size_t>(3, n);
    auto t = top_k_eigenpairs(a, k);
    for (std::size_t i = 0; i < k; ++i) CHECK(std::abs(t.pairs[i].value) == doctest::Approx(std::abs(full[i].value)).epsilon(1e-8));
    auto l = largest_abs_eigenvalue(a);
    CHECK(std::abs(l.pair.value) == doctest::Approx(std::abs(full[0].value)).epsilon(1e-8));
    if (l.converged) CHECK(l.pair.residual <= 1e-10 * frobenius_norm(a) * 10);
  }
}

TEST_CASE("Lanczos handles the noise-bulk edge that stalls power iteration") {
  // Rank-one signal barely above a Wigner-type bulk.
  const std::size_t n = 400;
  Rng rng(5);
  SymMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a.set(i, j, (rng.bernoulli(0.5) ? 0.5 : -0.5) + 0.06 * ((i < n / 2) == (j < n / 2) ? 1 : -1));
  auto k = largest_abs_eigenvalue(a);
  CHECK(k.converged);
  CHECK(k.pair.residual <= 1e-8 * frobenius_norm(a));
}
