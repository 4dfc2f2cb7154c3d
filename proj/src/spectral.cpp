#include "sbmrate/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <utility>

namespace sbmrate {

void add_flag(std::vector<std::string>& flags, const std::string& f) {
  if (std::find(flags.begin(), flags.end(), f) == flags.end()) flags.push_back(f);
}

void merge_flags(std::vector<std::string>& into, const std::vector<std::string>& from) {
  for (const auto& f : from) add_flag(into, f);
}

SymMatrix centred_adjacency(const SymMatrix& x, double alpha) {
  const std::size_t n = x.size();
  SymMatrix d(n);
  const double shift = alpha / 2.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d.set(i, j, x(i, j) - shift);
  return d;
}

namespace {

double clamp_half(double t) { return std::clamp(t, -0.5, 0.5); }

struct CoreEstimate {
  ThetaEstimate est;
  double residual = 0.0;
};

CoreEstimate two_class_core(const SymMatrix& x, double alpha, const EigenOptions& eig) {
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("spectral_two_class: n >= 2 required");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("spectral_two_class: alpha must be in (0,1]");
  CoreEstimate out;
  SymMatrix delta = centred_adjacency(x, alpha);
  if (delta.is_zero()) return out;
  LargestEigen le = largest_abs_eigenvalue(delta, eig);
  out.est.eigenvalue = le.pair.value;
  out.est.raw = le.pair.value / (static_cast<double>(n - 1) * alpha);
  out.est.theta = clamp_half(out.est.raw);
  out.residual = le.pair.residual;
  if (!le.converged) add_flag(out.est.flags, flag::kEigenNotConverged);
  if (le.sign_tie) add_flag(out.est.flags, flag::kSignTie);
  return out;
}

bool b0_holds(std::size_t n, double alpha, double c_s) {
  if (n < 2) return true;
  const double nn = static_cast<double>(n);
  return alpha >= c_s * std::log(nn) / nn;
}

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

struct LloydRun {
  std::vector<int> assign;
  std::vector<std::vector<double>> centers;
  double objective = 0.0;
  bool reseeded = false;
};

LloydRun lloyd(const std::vector<std::vector<double>>& pts, int K, std::size_t first, int max_iter) {
  const std::size_t n = pts.size();
  const std::size_t d = pts.empty() ? 0 : pts[0].size();
  const auto k = static_cast<std::size_t>(K);
  LloydRun run;

  // farthest-point seeding
  run.centers.push_back(pts[first]);
  std::vector<double> mind(n);
  for (std::size_t v = 0; v < n; ++v) mind[v] = sq_dist(pts[v], run.centers[0]);
  while (run.centers.size() < k) {
    std::size_t best = 0;
    for (std::size_t v = 1; v < n; ++v)
      if (mind[v] > mind[best]) best = v;
    run.centers.push_back(pts[best]);
    for (std::size_t v = 0; v < n; ++v) mind[v] = std::min(mind[v], sq_dist(pts[v], run.centers.back()));
  }

  run.assign.assign(n, -1);
  std::vector<double> dist(n);
  for (int it = 0; it < max_iter; ++it) {
    bool changed = false;
    for (std::size_t v = 0; v < n; ++v) {
      int arg = 0;
      double bd = sq_dist(pts[v], run.centers[0]);
      for (std::size_t c = 1; c < k; ++c) {
        const double dd = sq_dist(pts[v], run.centers[c]);
        if (dd < bd) {
          bd = dd;
          arg = static_cast<int>(c);
        }
      }
      dist[v] = bd;
      if (run.assign[v] != arg) {
        run.assign[v] = arg;
        changed = true;
      }
    }
    std::vector<std::size_t> size(k, 0);
    for (int c : run.assign) ++size[static_cast<std::size_t>(c)];
    for (std::size_t c = 0; c < k; ++c) {
      if (size[c] > 0) continue;
      // steal the worst-fitting point from a cluster that can spare one
      std::size_t worst = n;
      for (std::size_t v = 0; v < n; ++v) {
        if (size[static_cast<std::size_t>(run.assign[v])] < 2) continue;
        if (worst == n || dist[v] > dist[worst]) worst = v;
      }
      if (worst == n) break;
      --size[static_cast<std::size_t>(run.assign[worst])];
      run.assign[worst] = static_cast<int>(c);
      dist[worst] = 0.0;
      size[c] = 1;
      changed = true;
      run.reseeded = true;
    }
    for (std::size_t c = 0; c < k; ++c) std::fill(run.centers[c].begin(), run.centers[c].end(), 0.0);
    for (std::size_t v = 0; v < n; ++v) {
      auto& cc = run.centers[static_cast<std::size_t>(run.assign[v])];
      for (std::size_t j = 0; j < d; ++j) cc[j] += pts[v][j];
    }
    for (std::size_t c = 0; c < k; ++c)
      if (size[c] > 0)
        for (double& x : run.centers[c]) x /= static_cast<double>(size[c]);
    if (!changed) break;
  }
  run.objective = 0.0;
  for (std::size_t v = 0; v < n; ++v)
    run.objective += sq_dist(pts[v], run.centers[static_cast<std::size_t>(run.assign[v])]);
  return run;
}

}  // namespace

ThetaEstimate spectral_two_class(const SymMatrix& x, const EigenOptions& eig) {
  return two_class_core(x, 1.0, eig).est;
}

ThetaEstimate spectral_two_class(const Graph& g, const EigenOptions& eig) {
  return spectral_two_class(g.to_matrix(), eig);
}

ThetaEstimate spectral_two_class_sparse(const SymMatrix& x, double alpha, double c_s, const EigenOptions& eig) {
  ThetaEstimate est = two_class_core(x, alpha, eig).est;
  if (!b0_holds(x.size(), alpha, c_s)) add_flag(est.flags, flag::kSparsityBelowB0);
  return est;
}

ThetaEstimate spectral_two_class_sparse(const Graph& g, double alpha, double c_s, const EigenOptions& eig) {
  return spectral_two_class_sparse(g.to_matrix(), alpha, c_s, eig);
}

ClusterResult kmeans(const std::vector<std::vector<double>>& points, int K, Rng& rng, int restarts,
                     int max_iterations) {
  const std::size_t n = points.size();
  if (K < 1) throw std::invalid_argument("kmeans: K >= 1 required");
  if (n < static_cast<std::size_t>(K)) throw std::invalid_argument("kmeans: n >= K required");
  if (restarts < 1) restarts = 1;

  LloydRun best;
  bool have = false;
  for (int r = 0; r < restarts; ++r) {
    LloydRun run = lloyd(points, K, static_cast<std::size_t>(rng.below(n)), max_iterations);
    if (!have || run.objective < best.objective) {
      best = std::move(run);
      have = true;
    }
  }

  ClusterResult res;
  res.labels = Labelling(best.assign, K);
  res.centers = best.centers;
  res.objective = best.objective;
  double sep = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < res.centers.size(); ++a)
    for (std::size_t b = a + 1; b < res.centers.size(); ++b) sep = std::min(sep, sq_dist(res.centers[a], res.centers[b]));
  if (K == 1) res.mismatch_bound = 0.0;
  else if (sep > 0.0) res.mismatch_bound = 4.0 * res.objective / sep;
  else res.mismatch_bound = static_cast<double>(n);
  if (best.reseeded) add_flag(res.flags, flag::kEmptyCluster);
  return res;
}

ClusterResult spectral_cluster(const SymMatrix& x, int K, Rng& rng, const ClusterOptions& opt) {
  const std::size_t n = x.size();
  if (K < 1) throw std::invalid_argument("spectral_cluster: K >= 1 required");
  if (n < static_cast<std::size_t>(K)) throw std::invalid_argument("spectral_cluster: n >= K required");
  SymMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a.set(i, j, x(i, j));
  const auto k = static_cast<std::size_t>(K);
  TopEigen top = top_k_eigenpairs(a, k, opt.eigen);
  std::vector<std::vector<double>> rows(n, std::vector<double>(k));
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t v = 0; v < n; ++v) rows[v][c] = top.pairs[c].vector[v];
  ClusterResult res = kmeans(rows, K, rng, opt.restarts, opt.lloyd_iterations);
  if (!top.converged) add_flag(res.flags, flag::kEigenNotConverged);
  if (top.gap_degenerate) add_flag(res.flags, flag::kGapDegenerate);
  return res;
}

ClusterResult spectral_cluster(const Graph& g, int K, Rng& rng, const ClusterOptions& opt) {
  return spectral_cluster(g.to_matrix(), K, rng, opt);
}

namespace {

struct BlockStats {
  std::vector<double> sum;    // K x K edge mass
  std::vector<double> pairs;  // K x K pair counts
  std::size_t K = 0;
  [[nodiscard]] double mean(std::size_t a, std::size_t b) const {
    const double p = pairs[a * K + b];
    return p > 0.0 ? sum[a * K + b] / p : 0.0;
  }
};

// Edge mass of every vertex towards every class (self excluded), n x K.
std::vector<double> class_mass(const SymMatrix& x, const std::vector<int>& lab, std::size_t K) {
  const std::size_t n = x.size();
  std::vector<double> S(n * K, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    auto r = x.row(v);
    double* sv = S.data() + v * K;
    for (std::size_t u = 0; u < n; ++u) sv[lab[u]] += r[u];
    sv[lab[v]] -= r[v];
  }
  return S;
}

BlockStats stats_from_mass(const std::vector<double>& S, const std::vector<int>& lab, std::size_t K) {
  BlockStats s;
  s.K = K;
  s.sum.assign(K * K, 0.0);
  s.pairs.assign(K * K, 0.0);
  std::vector<double> size(K, 0.0);
  for (std::size_t v = 0; v < lab.size(); ++v) {
    const auto a = static_cast<std::size_t>(lab[v]);
    size[a] += 1.0;
    for (std::size_t b = 0; b < K; ++b) s.sum[a * K + b] += S[v * K + b];
  }
  for (std::size_t a = 0; a < K; ++a) {
    s.sum[a * K + a] /= 2.0;
    for (std::size_t b = 0; b < K; ++b)
      s.pairs[a * K + b] = a == b ? size[a] * (size[a] - 1.0) / 2.0 : size[a] * size[b];
  }
  return s;
}

BlockStats block_stats(const SymMatrix& x, const std::vector<int>& lab, std::size_t K) {
  return stats_from_mass(class_mass(x, lab, K), lab, K);
}

double stats_log_likelihood(const BlockStats& s, double floor) {
  double ll = 0.0;
  for (std::size_t a = 0; a < s.K; ++a)
    for (std::size_t b = a; b < s.K; ++b) {
      const double m = s.pairs[a * s.K + b];
      if (m <= 0.0) continue;
      const double e = s.sum[a * s.K + b];
      const double p = std::clamp(e / m, floor, 1.0 - floor);
      ll += e * std::log(p) + (m - e) * std::log1p(-p);
    }
  return ll;
}

// Block statistics after merging classes a < b, classes above b shifted down.
BlockStats merge_stats(const BlockStats& s, std::size_t a, std::size_t b) {
  const std::size_t K = s.K - 1;
  auto map = [&](std::size_t c) { return c == b ? a : (c > b ? c - 1 : c); };
  BlockStats m;
  m.K = K;
  m.sum.assign(K * K, 0.0);
  m.pairs.assign(K * K, 0.0);
  for (std::size_t i = 0; i < s.K; ++i)
    for (std::size_t j = i; j < s.K; ++j) {
      std::size_t p = map(i), q = map(j);
      if (p > q) std::swap(p, q);
      m.sum[p * K + q] += s.sum[i * s.K + j];
      m.pairs[p * K + q] += s.pairs[i * s.K + j];
    }
  for (std::size_t p = 0; p < K; ++p)
    for (std::size_t q = p + 1; q < K; ++q) {
      m.sum[q * K + p] = m.sum[p * K + q];
      m.pairs[q * K + p] = m.pairs[p * K + q];
    }
  return m;
}

bool classes_indistinguishable(const BlockStats& s, std::size_t a, std::size_t b, double z) {
  auto close = [&](std::size_t r1, std::size_t c1, std::size_t r2, std::size_t c2) {
    const double m1 = s.pairs[r1 * s.K + c1], m2 = s.pairs[r2 * s.K + c2];
    if (m1 <= 0.0 || m2 <= 0.0) return true;
    const double p1 = s.mean(r1, c1), p2 = s.mean(r2, c2);
    double pbar = (s.sum[r1 * s.K + c1] + s.sum[r2 * s.K + c2]) / (m1 + m2);
    pbar = std::clamp(pbar, 1e-9, 1.0 - 1e-9);
    const double se = std::sqrt(pbar * (1.0 - pbar) * (1.0 / m1 + 1.0 / m2));
    return std::abs(p1 - p2) <= z * se;
  };
  for (std::size_t l = 0; l < s.K; ++l)
    if (l != a && l != b && !close(a, l, b, l)) return false;
  return close(a, a, a, b) && close(b, b, a, b);
}

}  // namespace

SymMatrix block_means(const SymMatrix& x, const Labelling& labels) {
  const auto K = static_cast<std::size_t>(labels.classes());
  BlockStats s = block_stats(x, labels.assignment(), K);
  SymMatrix m(K);
  for (std::size_t a = 0; a < K; ++a)
    for (std::size_t b = a; b < K; ++b) m.set(a, b, s.mean(a, b));
  return m;
}

RefineResult refine_labels(const SymMatrix& x, const ClusterResult& initial, int K, const RefineOptions& opt) {
  const std::size_t n = x.size();
  if (initial.labels.classes() != K) throw std::invalid_argument("refine_labels: initial must have K classes");
  if (initial.labels.size() != n) throw std::invalid_argument("refine_labels: label size mismatch");
  const auto k = static_cast<std::size_t>(K);
  const double lo = opt.probability_floor, hi = 1.0 - opt.probability_floor;

  RefineResult out;
  out.cluster = initial;
  std::vector<int> lab = initial.labels.assignment();
  std::set<std::vector<int>> seen{lab};
  std::vector<double> logp(k * k), log1mp(k * k), score(k);
  std::vector<double> size(k);

  for (int pass = 0; pass < opt.max_passes; ++pass) {
    const std::vector<double> S = class_mass(x, lab, k);
    BlockStats s = stats_from_mass(S, lab, k);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) {
        const double p = std::clamp(s.mean(a, b), lo, hi);
        logp[a * k + b] = std::log(p);
        log1mp[a * k + b] = std::log1p(-p);
      }
    std::fill(size.begin(), size.end(), 0.0);
    for (int c : lab) size[static_cast<std::size_t>(c)] += 1.0;

    std::vector<int> next(lab);
    int moved = 0;
    for (std::size_t v = 0; v < n; ++v) {
      const double* edge_mass = S.data() + v * k;
      const auto cur = static_cast<std::size_t>(lab[v]);
      for (std::size_t c = 0; c < k; ++c) {
        double sc = 0.0;
        for (std::size_t l = 0; l < k; ++l) {
          const double m = size[l] - (l == cur ? 1.0 : 0.0);
          sc += edge_mass[l] * logp[c * k + l] + (m - edge_mass[l]) * log1mp[c * k + l];
        }
        score[c] = sc;
      }
      std::size_t best = cur;
      for (std::size_t c = 0; c < k; ++c)
        if (score[c] > score[best]) best = c;
      if (best != cur) {
        next[v] = static_cast<int>(best);
        ++moved;
      }
    }
    out.passes = pass + 1;
    if (moved == 0) break;

    std::vector<std::size_t> nsize(k, 0);
    for (int c : next) ++nsize[static_cast<std::size_t>(c)];
    if (std::find(nsize.begin(), nsize.end(), std::size_t{0}) != nsize.end()) {
      add_flag(out.cluster.flags, flag::kEmptyCluster);
      break;
    }
    out.reassigned += moved;
    lab = std::move(next);
    if (!seen.insert(lab).second) {
      add_flag(out.cluster.flags, flag::kRefineOscillation);
      break;
    }
  }

  out.cluster.labels = Labelling(lab, K);
  BlockStats s = block_stats(x, lab, k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b)
      if (classes_indistinguishable(s, a, b, opt.distinguish_z)) add_flag(out.cluster.flags, flag::kIndistinguishable);
  return out;
}

double profile_log_likelihood(const SymMatrix& x, const Labelling& labels, double floor) {
  return stats_log_likelihood(block_stats(x, labels.assignment(), static_cast<std::size_t>(labels.classes())), floor);
}

namespace {

// Labelling with classes renumbered 0..K-1 after merging classes a and b of a
// (K+1)-class assignment.
std::vector<int> merged(std::vector<int> lab, int a, int b) {
  if (a > b) std::swap(a, b);
  for (int& c : lab) {
    if (c == b) c = a;
    else if (c > b) --c;
  }
  return lab;
}

std::vector<int> split_class(const SymMatrix& x, const std::vector<int>& lab, int K, int c, Rng& rng) {
  const std::size_t n = x.size();
  const auto k = static_cast<std::size_t>(K);
  std::vector<double> size(k, 0.0);
  for (int l : lab) size[static_cast<std::size_t>(l)] += 1.0;
  std::vector<std::size_t> members;
  std::vector<std::vector<double>> feats;
  for (std::size_t v = 0; v < n; ++v) {
    if (lab[v] != c) continue;
    std::vector<double> f(k, 0.0);
    auto r = x.row(v);
    for (std::size_t u = 0; u < n; ++u)
      if (u != v) f[static_cast<std::size_t>(lab[u])] += r[u];
    for (std::size_t l = 0; l < k; ++l) {
      const double m = size[l] - (static_cast<int>(l) == c ? 1.0 : 0.0);
      f[l] = m > 0.0 ? f[l] / m : 0.0;
    }
    members.push_back(v);
    feats.push_back(std::move(f));
  }
  ClusterResult two = kmeans(feats, 2, rng, 3, 50);
  std::vector<int> out(lab);
  for (std::size_t i = 0; i < members.size(); ++i)
    if (two.labels[i] == 1) out[members[i]] = K;
  return out;
}

}  // namespace

RefineResult split_merge_refine(const SymMatrix& x, const ClusterResult& initial, int K, Rng& rng,
                                const RefineOptions& opt, int rounds) {
  RefineResult best = refine_labels(x, initial, K, opt);
  if (K < 2) return best;
  double best_ll = profile_log_likelihood(x, best.cluster.labels, opt.probability_floor);
  const auto k1 = static_cast<std::size_t>(K) + 1;

  for (int round = 0; round < rounds; ++round) {
    bool improved = false;
    for (int c = 0; c < K; ++c) {
      const std::vector<int>& lab = best.cluster.labels.assignment();
      if (best.cluster.labels.class_size(c) < 4) continue;
      std::vector<int> split = split_class(x, lab, K, c, rng);

      // cheapest merge among the K+1 classes, from block sums alone
      std::vector<std::size_t> sizes(k1, 0);
      for (int l : split) ++sizes[static_cast<std::size_t>(l)];
      if (std::find(sizes.begin(), sizes.end(), std::size_t{0}) != sizes.end()) continue;
      BlockStats s = block_stats(x, split, k1);
      int ma = -1, mb = -1;
      double merge_ll = -std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < k1; ++a)
        for (std::size_t b = a + 1; b < k1; ++b) {
          if (a == static_cast<std::size_t>(c) && b == static_cast<std::size_t>(K)) continue;
          const double ll = stats_log_likelihood(merge_stats(s, a, b), opt.probability_floor);
          if (ll > merge_ll) {
            merge_ll = ll;
            ma = static_cast<int>(a);
            mb = static_cast<int>(b);
          }
        }
      if (ma < 0) continue;
      ClusterResult cand;
      cand.labels = Labelling(merged(split, ma, mb), K);
      RefineResult r = refine_labels(x, cand, K, opt);
      const double ll = profile_log_likelihood(x, r.cluster.labels, opt.probability_floor);
      if (ll > best_ll + 1e-9 * std::max(1.0, std::abs(best_ll))) {
        r.passes += best.passes;
        r.reassigned += best.reassigned;
        r.cluster.centers = best.cluster.centers;
        r.cluster.objective = best.cluster.objective;
        r.cluster.mismatch_bound = best.cluster.mismatch_bound;
        best = std::move(r);
        best_ll = ll;
        improved = true;
      }
    }
    if (!improved) break;
  }
  return best;
}

namespace {

HalfCluster half_cluster_impl(const SymMatrix& x, const Labelling& labels, double kappa, bool strict) {
  const auto K = static_cast<std::size_t>(labels.classes());
  const auto sizes = labels.class_sizes();
  BlockStats s = block_stats(x, labels.assignment(), K);
  HalfCluster h;
  h.densities.assign(K, std::numeric_limits<double>::quiet_NaN());
  std::vector<double> dist(K, std::numeric_limits<double>::infinity());
  for (std::size_t l = 0; l < K; ++l) {
    if (sizes[l] < 2) {
      if (strict) throw std::invalid_argument("identify_half_cluster: every class needs >= 2 vertices");
      continue;
    }
    h.densities[l] = s.mean(l, l);
    dist[l] = std::abs(h.densities[l] - 0.5);
  }
  const double dmin = *std::min_element(dist.begin(), dist.end());
  if (!std::isfinite(dmin)) throw std::invalid_argument("identify_half_cluster: no class with >= 2 vertices");
  constexpr double kTieTol = 1e-12;
  std::size_t best = 0;
  while (dist[best] > dmin + kTieTol) ++best;
  h.index = static_cast<int>(best);
  h.distance = dist[best];
  h.margin = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < K; ++l) {
    if (l == best) continue;
    if (dist[l] <= dmin + kTieTol) add_flag(h.flags, flag::kHalfTie);
    h.margin = std::min(h.margin, dist[l]);
  }
  if (h.margin < kappa / 2.0) add_flag(h.flags, flag::kAmbiguousHalf);
  return h;
}

}  // namespace

HalfCluster identify_half_cluster(const SymMatrix& x, const Labelling& labels, double kappa) {
  return half_cluster_impl(x, labels, kappa, true);
}

SpecThetaResult spec_theta(const SymMatrix& x, int k, double alpha, Rng& rng, const SpecThetaOptions& opt) {
  if (k < 3) throw std::invalid_argument("spec_theta: k >= 3 required; use spectral_two_class for k = 2");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("spec_theta: alpha must be in (0,1]");
  const int K = k - 1;
  SpecThetaResult res;

  ClusterResult init = spectral_cluster(x, K, rng, opt.cluster);
  merge_flags(res.flags, init.flags);
  res.cluster_objective = init.objective;
  RefineResult ref = opt.split_merge ? split_merge_refine(x, init, K, rng, opt.refine, opt.split_merge_rounds)
                                     : refine_labels(x, init, K, opt.refine);
  merge_flags(res.flags, ref.cluster.flags);
  res.refine_passes = ref.passes;
  res.labels = ref.cluster.labels;
  res.cluster_sizes = res.labels.class_sizes();

  HalfCluster half = half_cluster_impl(x, res.labels, opt.kappa, false);
  merge_flags(res.flags, half.flags);
  res.densities = half.densities;
  res.selected = half.index;
  res.margin = half.margin;

  const auto members = res.labels.members(half.index);
  if (members.size() < 2) {
    add_flag(res.flags, flag::kTinyCluster);
    return res;
  }
  CoreEstimate est = two_class_core(x.submatrix(members), alpha, opt.final_eigen);
  merge_flags(res.flags, est.est.flags);
  if (!b0_holds(x.size(), alpha, opt.c_s)) add_flag(res.flags, flag::kSparsityBelowB0);
  res.theta = est.est.theta;
  res.eigen_residual = est.residual;
  return res;
}

SpecThetaResult spec_theta(const Graph& g, int k, double alpha, Rng& rng, const SpecThetaOptions& opt) {
  return spec_theta(g.to_matrix(), k, alpha, rng, opt);
}

SymMatrix aggregated_matrix(const SubmodelK& sub) {
  const std::size_t K = static_cast<std::size_t>(sub.k) - 1;
  SymMatrix N(K);
  N.set(0, 0, sub.base);
  for (std::size_t i = 1; i < K; ++i) {
    N.set(0, i, sub.a[i - 1]);
    for (std::size_t j = i; j < K; ++j) N.set(i, j, sub.B(i - 1, j - 1));
  }
  return N;
}

ConditionsReport check_conditions(const SubmodelK& sub, std::size_t n, double alpha, const ConditionConstants& c) {
  ConditionsReport r;
  r.constants = c;
  r.N = aggregated_matrix(sub);
  const std::size_t K = r.N.size();
  const double nn = static_cast<double>(n), KK = static_cast<double>(K);
  const double logn = n > 1 ? std::log(nn) : 0.0;

  r.b0_ok = b0_holds(n, alpha, c.C_s);
  if (K == 1) {
    // k = 2: no clustering step, nothing to separate
    r.gamma = 0.0;
    r.lambda = std::abs(sub.base);
    r.kappa = 0.5;
    r.a1_ok = r.a2_ok = r.a3_ok = r.b2_ok = true;
    r.T_K = 0.5;
    return r;
  }

  r.gamma = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < K; ++i)
    for (std::size_t j = i + 1; j < K; ++j) {
      double s = 0.0;
      for (std::size_t l = 0; l < K; ++l) {
        const double d = r.N(i, l) - r.N(j, l);
        s += d * d;
      }
      r.gamma = std::min(r.gamma, std::sqrt(s));
    }
  r.lambda = std::numeric_limits<double>::infinity();
  for (const auto& p : jacobi_full_eigen(r.N)) r.lambda = std::min(r.lambda, std::abs(p.value));
  r.kappa = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 2 < static_cast<std::size_t>(sub.k); ++i)
    r.kappa = std::min(r.kappa, std::abs(sub.B(i, i) - 0.5));

  const double rank_tol = 1e-12 * std::max(1.0, frobenius_norm(r.N));
  r.a1_ok = r.lambda > rank_tol && r.gamma > 0.0;
  auto dense_like = [&](double scale) {
    return scale * nn * r.lambda * r.gamma >= c.C * std::pow(KK, 4.5) &&
           scale * nn * r.gamma * r.gamma >= c.C * std::pow(KK, 3.0) * logn && nn >= c.C * std::pow(KK, 3.0);
  };
  r.a2_ok = dense_like(1.0);
  r.b2_ok = dense_like(alpha);
  r.a3_ok = r.kappa > 0.0 && r.kappa >= c.C * std::sqrt(KK * logn / nn);
  r.T_K = std::max(0.0, std::min(c.c * r.lambda * std::sqrt(r.gamma) / std::pow(KK, 1.25), r.kappa / 4.0));
  return r;
}

}  // namespace sbmrate
