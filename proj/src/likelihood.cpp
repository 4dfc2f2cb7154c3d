#include "sbmrate/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "sbmrate/spectral.hpp"

namespace sbmrate {

GridTheta::GridTheta(std::size_t n) : half_(n * n) {
  if (n == 0) throw std::invalid_argument("GridTheta: n must be positive");
}

double GridTheta::value(std::size_t idx) const {
  if (idx >= size()) throw std::out_of_range("GridTheta: index out of range");
  const double i = static_cast<double>(idx) - static_cast<double>(half_);
  return i / (2.0 * static_cast<double>(half_));
}

std::vector<double> GridTheta::values() const {
  std::vector<double> v(size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = value(i);
  return v;
}

double GridTheta::nearest(double t) const {
  t = std::clamp(t, -0.5, 0.5);
  const double h2 = 2.0 * static_cast<double>(half_);
  const double i = std::ceil(t * h2 - 0.5);
  return std::clamp(i, -static_cast<double>(half_), static_cast<double>(half_)) / h2;
}

std::string to_string(FitMode m) { return m == FitMode::exact ? "exact" : "heuristic"; }

double z_criterion(const SymMatrix& x, const Labelling& sigma, std::span<const std::size_t> S) {
  if (sigma.size() != x.size()) throw std::invalid_argument("z_criterion: labelling size mismatch");
  double z = 0.0;
  for (std::size_t a = 0; a < S.size(); ++a)
    for (std::size_t b = a + 1; b < S.size(); ++b) {
      const std::size_t i = S[a], j = S[b];
      const double y = 1.0 - 2.0 * x(i, j);
      z += sigma[i] == sigma[j] ? -y : y;
    }
  return 0.5 * z;
}

double z_criterion(const SymMatrix& x, const Labelling& sigma) {
  std::vector<std::size_t> all(x.size());
  std::iota(all.begin(), all.end(), 0);
  return z_criterion(x, sigma, all);
}

double z_criterion(const Graph& g, const Labelling& sigma) { return z_criterion(g.to_matrix(), sigma); }

namespace {

double pairs(std::size_t n) { return 0.5 * static_cast<double>(n) * static_cast<double>(n - 1); }

// Z as a function of spins eta in {-1,+1}: Z = -1/2 sum_{i<j} y_ij eta_i eta_j.
double z_of_spins(const SymMatrix& y, const std::vector<int>& eta) {
  const std::size_t n = eta.size();
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    auto r = y.row(i);
    double s = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) s += r[j] * eta[j];
    z -= 0.5 * s * eta[i];
  }
  return z;
}

SymMatrix spin_couplings(const SymMatrix& x) {
  const std::size_t n = x.size();
  SymMatrix y(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) y.set(i, j, 1.0 - 2.0 * x(i, j));
  return y;
}

Labelling spins_to_labelling(const std::vector<int>& eta) {
  std::vector<int> a(eta.size());
  const int ref = eta.empty() ? 1 : eta[0];
  for (std::size_t i = 0; i < eta.size(); ++i) a[i] = eta[i] == ref ? 0 : 1;
  return Labelling(a, 2);
}

// Steepest single flips increasing s * Z; returns the local optimum value of Z.
double climb(const SymMatrix& y, std::vector<int>& eta, double s) {
  const std::size_t n = eta.size();
  std::vector<double> h(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    auto r = y.row(v);
    double acc = 0.0;
    for (std::size_t u = 0; u < n; ++u)
      if (u != v) acc += r[u] * eta[u];
    h[v] = acc;
  }
  double z = z_of_spins(y, eta);
  const double tol = 1e-12 * std::max(1.0, pairs(n));
  for (std::size_t step = 0; step < 4 * n * n + 16; ++step) {
    std::size_t best = n;
    double gain = tol;
    for (std::size_t v = 0; v < n; ++v) {
      const double g = s * eta[v] * h[v];
      if (g > gain) {
        gain = g;
        best = v;
      }
    }
    if (best == n) break;
    z += eta[best] * h[best];
    const int old = eta[best];
    eta[best] = -old;
    auto r = y.row(best);
    for (std::size_t u = 0; u < n; ++u)
      if (u != best) h[u] -= 2.0 * r[u] * old;
  }
  return z;
}

FitResult two_class_exact(const SymMatrix& x) {
  const std::size_t n = x.size();
  if (n > kExactTwoClassMaxN) throw std::length_error("mle_two_class: exact mode requires n <= 16");
  const SymMatrix y = spin_couplings(x);
  const double tol = 1e-12 * std::max(1.0, pairs(n));
  // Vertex 0 is pinned to class 0 (|Z| is swap invariant); vertex i sits at
  // bit n-1-i so that increasing masks run in lexicographic order.
  std::vector<int> eta(n, 1), best_eta(n, 1);
  double best = -1.0, best_z = 0.0;
  const std::uint64_t count = n == 0 ? 1 : (std::uint64_t{1} << (n - 1));
  for (std::uint64_t m = 0; m < count; ++m) {
    for (std::size_t i = 1; i < n; ++i) eta[i] = ((m >> (n - 1 - i)) & 1U) ? -1 : 1;
    const double z = z_of_spins(y, eta);
    if (std::abs(z) > best + tol) {
      best = std::abs(z);
      best_z = z;
      best_eta = eta;
    }
  }
  FitResult r;
  r.mode = FitMode::exact;
  r.sigma_hat = spins_to_labelling(best_eta);
  r.objective = std::abs(best_z);
  r.theta_hat = n < 2 ? 0.0 : std::clamp(best_z / pairs(n), -0.5, 0.5);
  return r;
}

FitResult two_class_heuristic(const SymMatrix& x) {
  const std::size_t n = x.size();
  const SymMatrix y = spin_couplings(x);
  std::vector<std::vector<int>> starts;
  starts.emplace_back(n, 1);
  if (n >= 2) {
    SymMatrix d = centred_adjacency(x);
    if (!d.is_zero()) {
      auto e = largest_abs_eigenvalue(d);
      std::vector<int> s(n);
      for (std::size_t i = 0; i < n; ++i) s[i] = e.pair.vector[i] >= 0.0 ? 1 : -1;
      starts.push_back(std::move(s));
    }
  }
  Rng rng(0x2c1a55ULL ^ n);
  for (int r = 0; r < 8; ++r) {
    std::vector<int> s(n);
    for (auto& v : s) v = rng.bernoulli(0.5) ? 1 : -1;
    starts.push_back(std::move(s));
  }

  const double tol = 1e-12 * std::max(1.0, pairs(n));
  double best = -1.0, best_z = 0.0;
  std::vector<int> best_eta(n, 1);
  for (const auto& s0 : starts)
    for (double dir : {1.0, -1.0}) {
      std::vector<int> eta = s0;
      const double z = climb(y, eta, dir);
      if (std::abs(z) > best + tol) {
        best = std::abs(z);
        best_z = z;
        best_eta = eta;
      }
    }
  FitResult r;
  r.mode = FitMode::heuristic;
  r.sigma_hat = spins_to_labelling(best_eta);
  r.objective = std::abs(best_z);
  r.theta_hat = n < 2 ? 0.0 : std::clamp(best_z / pairs(n), -0.5, 0.5);
  return r;
}

}  // namespace

FitResult mle_two_class(const SymMatrix& x, FitMode mode) {
  if (x.size() < 2) throw std::invalid_argument("mle_two_class: need at least 2 vertices");
  return mode == FitMode::exact ? two_class_exact(x) : two_class_heuristic(x);
}

FitResult mle_two_class(const Graph& g, FitMode mode) { return mle_two_class(g.to_matrix(), mode); }

long long delta_sigma(const Labelling& sigma, const Labelling& sigma0) {
  if (sigma.size() != sigma0.size()) throw std::invalid_argument("delta_sigma: size mismatch");
  const std::size_t n = sigma.size();
  long long d = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool a = sigma0[i] != sigma0[j], b = sigma[i] != sigma[j];
      d += a == b ? 1 : -1;
    }
  return d;
}

double template_loss(const SymMatrix& x, const SymMatrix& M, const Labelling& sigma) {
  if (sigma.size() != x.size()) throw std::invalid_argument("template_loss: labelling size mismatch");
  double l = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double r = x(i, j) - M(static_cast<std::size_t>(sigma[i]), static_cast<std::size_t>(sigma[j]));
      l += r * r;
    }
  return l;
}

namespace {

// Range of theta keeping base +- theta inside [0,1] and |theta| <= 1/2.
std::pair<double, double> theta_range(const SubmodelK& sub) {
  const double lim = std::min({0.5, sub.base, 1.0 - sub.base});
  return {-lim, lim};
}

struct Stage1 {
  Labelling sigma;
  double theta = 0.0;
  double loss = std::numeric_limits<double>::infinity();
};

// Grid point nearest to t inside [lo, hi].
double fit_theta_value(const GridTheta& grid, double t, double lo, double hi) {
  double g = grid.nearest(std::clamp(t, lo, hi));
  if (g < lo) g += grid.spacing();
  if (g > hi) g -= grid.spacing();
  return g;
}

// Least-squares theta on the grid for a fixed labelling. Only the pairs inside
// classes {0,1} depend on theta.
double fit_theta(const SymMatrix& x, const Labelling& sigma, const SubmodelK& sub, const GridTheta& grid) {
  double num = 0.0, m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (sigma[i] > 1) continue;
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      if (sigma[j] > 1) continue;
      const double r = x(i, j) - sub.base;
      num += sigma[i] == sigma[j] ? r : -r;
      m += 1.0;
    }
  }
  const double t = m > 0 ? num / m : 0.0;
  auto [lo, hi] = theta_range(sub);
  return fit_theta_value(grid, t, lo, hi);
}

Stage1 stage1_exact(const SymMatrix& x, const SubmodelK& sub, const BalanceConstants& bal) {
  const std::size_t n = x.size();
  const int k = sub.k;
  if (n > kExactKClassMaxN || k > kExactKClassMaxK)
    throw std::length_error("mle_k_class: exact mode requires n <= 8 and k <= 3");
  const GridTheta grid(n);
  Stage1 best;
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= static_cast<std::size_t>(k);
  std::vector<int> a(n);
  const double tol = 1e-12 * std::max(1.0, pairs(n));
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (std::size_t i = n; i-- > 0;) {
      a[i] = static_cast<int>(c % static_cast<std::size_t>(k));
      c /= static_cast<std::size_t>(k);
    }
    Labelling sigma(a, k);
    if (!is_balanced(sigma, k, bal.c1, bal.c2)) continue;
    const double t = fit_theta(x, sigma, sub, grid);
    const double l = template_loss(x, sub.with_theta(t).realize(), sigma);
    if (l < best.loss - tol) best = {sigma, t, l};
  }
  if (!std::isfinite(best.loss)) throw std::runtime_error("mle_k_class: no balanced labelling exists");
  return best;
}

// Loss-optimal relabelling of a clustering onto the template classes.
Labelling align_to_template(const SymMatrix& x, const Labelling& lab, const SymMatrix& M) {
  const int k = static_cast<int>(M.size());
  if (k > 7) return lab;
  const SymMatrix means = block_means(x, lab);
  const auto sizes = lab.class_sizes();
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best_perm = perm;
  double best = std::numeric_limits<double>::infinity();
  do {
    double cost = 0.0;
    for (int c = 0; c < k; ++c)
      for (int d = c; d < k; ++d) {
        const double sc = static_cast<double>(sizes[c]), sd = static_cast<double>(sizes[d]);
        const double m = c == d ? sc * (sc - 1) / 2 : sc * sd;
        const double r = means(c, d) - M(static_cast<std::size_t>(perm[c]), static_cast<std::size_t>(perm[d]));
        cost += m * r * r;
      }
    if (cost < best) {
      best = cost;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::vector<int> a(lab.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = best_perm[static_cast<std::size_t>(lab[i])];
  return Labelling(a, k);
}

inline constexpr std::size_t kSwapMaxN = 400;

// Local search against the template at fixed theta, alternated with the theta
// refit. Moves: single-vertex reassignment (Gauss-Seidel, rejected when it
// leaves the balanced set), a global relabelling of the classes, and
// exchanges of two vertices in different classes (n <= 400).
// theta0: starting theta, NaN to fit it to `start`.
Stage1 alternate(const SymMatrix& x, const SubmodelK& sub, Labelling start, double theta0, const BalanceConstants& bal,
                 int rounds) {
  const std::size_t n = x.size();
  const int k = sub.k;
  const auto K = static_cast<std::size_t>(k);
  const GridTheta grid(n);
  const double lo = bal.c1 * static_cast<double>(n) / k, hi = bal.c2 * static_cast<double>(n) / k;
  const double tol = 1e-12 * std::max(1.0, pairs(n));

  std::vector<int> a = start.assignment();
  std::vector<double> size(K, 0.0);
  // mass[v*K + c] = sum_{u in c, u != v} x(v,u)
  std::vector<double> mass(n * K, 0.0);
  auto rebuild = [&] {
    std::fill(size.begin(), size.end(), 0.0);
    std::fill(mass.begin(), mass.end(), 0.0);
    for (int c : a) size[static_cast<std::size_t>(c)] += 1.0;
    for (std::size_t v = 0; v < n; ++v) {
      auto r = x.row(v);
      for (std::size_t u = 0; u < n; ++u)
        if (u != v) mass[v * K + static_cast<std::size_t>(a[u])] += r[u];
    }
  };
  rebuild();

  auto move = [&](std::size_t v, std::size_t to) {
    const auto from = static_cast<std::size_t>(a[v]);
    auto r = x.row(v);
    for (std::size_t u = 0; u < n; ++u)
      if (u != v) {
        mass[u * K + from] -= r[u];
        mass[u * K + to] += r[u];
      }
    size[from] -= 1.0;
    size[to] += 1.0;
    a[v] = static_cast<int>(to);
  };

  const auto [tlo, thi] = theta_range(sub);
  double theta = std::isnan(theta0) ? fit_theta(x, Labelling(a, k), sub, grid) : fit_theta_value(grid, theta0, tlo, thi);
  for (int round = 0; round < rounds; ++round) {
    const SymMatrix M = sub.with_theta(theta).realize();
    // loss of the pairs containing v when v sits in class c, up to a constant;
    // cnt and mass seen from v (v itself excluded)
    auto score = [&](std::size_t c, const double* cnt, const double* ms) {
      double s = 0.0;
      for (std::size_t d = 0; d < K; ++d) s += cnt[d] * M(c, d) * M(c, d) - 2.0 * M(c, d) * ms[d];
      return s;
    };
    std::vector<double> cnt(K), cnt2(K), ms2(K);
    int changes = 0;
    for (bool improved = true; improved;) {
      improved = false;
      for (std::size_t v = 0; v < n; ++v) {
        const auto cur = static_cast<std::size_t>(a[v]);
        if (size[cur] - 1.0 < lo) continue;
        cnt = size;
        cnt[cur] -= 1.0;
        std::size_t best = cur;
        double best_s = score(cur, cnt.data(), &mass[v * K]);
        for (std::size_t c = 0; c < K; ++c) {
          if (c == cur || size[c] + 1.0 > hi) continue;
          const double s = score(c, cnt.data(), &mass[v * K]);
          if (s < best_s - tol) {
            best_s = s;
            best = c;
          }
        }
        if (best == cur) continue;
        move(v, best);
        improved = true;
        ++changes;
      }
      if (improved) continue;

      Labelling now(a, k);
      Labelling aligned = align_to_template(x, now, M);
      if (template_loss(x, M, aligned) < template_loss(x, M, now) - tol) {
        a = aligned.assignment();
        rebuild();
        improved = true;
        ++changes;
        continue;
      }

      if (n > kSwapMaxN) break;
      // steepest exchange
      double best_d = -tol;
      std::size_t bv = n, bw = n;
      for (std::size_t v = 0; v < n; ++v) {
        const auto c = static_cast<std::size_t>(a[v]);
        cnt = size;
        cnt[c] -= 1.0;
        const double sv = score(c, cnt.data(), &mass[v * K]);
        for (std::size_t w = v + 1; w < n; ++w) {
          const auto d = static_cast<std::size_t>(a[w]);
          if (d == c) continue;
          const double d1 = score(d, cnt.data(), &mass[v * K]) - sv;
          // w's view after v has moved from c to d
          const double xvw = x(v, w);
          cnt2 = size;
          cnt2[d] -= 1.0;
          cnt2[c] -= 1.0;
          cnt2[d] += 1.0;
          for (std::size_t e = 0; e < K; ++e) ms2[e] = mass[w * K + e];
          ms2[c] -= xvw;
          ms2[d] += xvw;
          const double d2 = score(c, cnt2.data(), ms2.data()) - score(d, cnt2.data(), ms2.data());
          if (d1 + d2 < best_d) {
            best_d = d1 + d2;
            bv = v;
            bw = w;
          }
        }
      }
      if (bv < n) {
        const auto c = static_cast<std::size_t>(a[bv]), d = static_cast<std::size_t>(a[bw]);
        move(bv, d);
        move(bw, c);
        improved = true;
        ++changes;
      }
    }
    const double t = fit_theta(x, Labelling(a, k), sub, grid);
    const bool same = t == theta;
    theta = t;
    if (changes == 0 && same) break;
  }
  Labelling sigma(a, k);
  return {sigma, theta, template_loss(x, sub.with_theta(theta).realize(), sigma)};
}

Labelling random_balanced(std::size_t n, int k, Rng& rng) {
  std::vector<int> a = round_robin_labelling(n, k).assignment();
  for (std::size_t i = n; i > 1; --i) std::swap(a[i - 1], a[rng.below(i)]);
  return Labelling(a, k);
}

Stage1 stage1_heuristic(const SymMatrix& x, const SubmodelK& sub, Rng& rng, const MleKOptions& opt) {
  const std::size_t n = x.size();
  const int k = sub.k;
  Stage1 best;
  // small graphs get extra restarts, they are cheap there
  const int restarts = std::max({1, opt.restarts, static_cast<int>(160 / std::max<std::size_t>(n, 1))});
  for (int r = 0; r < restarts; ++r) {
    Labelling start;
    if (r == 0) {
      auto cl = spectral_cluster(x, k, rng);
      start = align_to_template(x, cl.labels, sub.with_theta(0.0).realize());
      if (!is_balanced(start, k, opt.balance.c1, opt.balance.c2)) start = random_balanced(n, k, rng);
    } else {
      start = random_balanced(n, k, rng);
    }
    // the fixed-theta search has theta-dependent basins, so each start is
    // also run from both sides of the range
    for (double t0 : {std::nan(""), -0.3, 0.0, 0.3}) {
      Stage1 s = alternate(x, sub, start, t0, opt.balance, opt.rounds);
      if (s.loss < best.loss) best = s;
    }
  }
  return best;
}

FitResult k_class(const SymMatrix& x, const SubmodelK& sub, FitMode mode, Rng& rng, const MleKOptions& opt) {
  if (x.size() < 2) throw std::invalid_argument("mle_k_class: need at least 2 vertices");
  Stage1 s = mode == FitMode::exact ? stage1_exact(x, sub, opt.balance) : stage1_heuristic(x, sub, rng, opt);

  std::vector<std::size_t> S;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (s.sigma[i] <= 1) S.push_back(i);
  if (S.size() < 2) throw std::runtime_error("mle_k_class: stage-1 classes {1,2} hold fewer than 2 vertices");

  const SymMatrix xs = x.submatrix(S);
  FitResult r = mle_two_class(xs, S.size() <= kExactTwoClassMaxN ? FitMode::exact : FitMode::heuristic);
  r.S_I = std::move(S);
  r.sigma_tilde = s.sigma;
  r.theta_tilde = s.theta;
  r.stage1_loss = s.loss;
  r.stage1_mode = mode;
  return r;
}

}  // namespace

FitResult mle_k_class(const SymMatrix& x, const SubmodelK& sub, FitMode mode, Rng& rng, const MleKOptions& opt) {
  return k_class(x, sub, mode, rng, opt);
}

FitResult mle_k_class(const Graph& g, const SubmodelK& sub, FitMode mode, Rng& rng, const MleKOptions& opt) {
  return k_class(g.to_matrix(), sub, mode, rng, opt);
}

KappaReport check_kappa_conditions(const SubmodelK& sub, std::size_t n, double d) {
  KappaReport r;
  double gap = std::numeric_limits<double>::infinity();
  for (double v : sub.a) gap = std::min(gap, std::abs(v - sub.base));
  for (std::size_t i = 0; i < sub.B.size(); ++i)
    for (std::size_t j = i; j < sub.B.size(); ++j) gap = std::min(gap, std::abs(sub.B(i, j) - sub.base));
  // k = 2: nothing to separate from
  if (!std::isfinite(gap)) gap = std::max(sub.base, 1.0 - sub.base);
  r.kappa = gap / 2.0;
  r.separation_ok = r.kappa > 0.0;
  const double k = sub.k;
  r.lhs = k * k * k * std::log(k);
  r.rhs = d * std::pow(r.kappa, 4) * static_cast<double>(n);
  r.size_ok = r.separation_ok && r.lhs <= r.rhs;
  return r;
}

}  // namespace sbmrate
