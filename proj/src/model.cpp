#include "sbmrate/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace sbmrate {

namespace {

void require_unit_interval(const SymMatrix& m, const char* what) {
  for (std::size_t i = 0; i < m.size(); ++i)
    for (double v : m.row(i))
      if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(what) + ": entry outside [0,1]");
}

// Index of the class whose cumulative-proportion cell contains u.
int cell_of(const std::vector<double>& cumulative, double u) {
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  const auto c = static_cast<int>(it - cumulative.begin());
  return std::min(c, static_cast<int>(cumulative.size()) - 1);
}

std::vector<double> cumulative_of(const std::vector<double>& pi) {
  std::vector<double> cum(pi.size());
  std::partial_sum(pi.begin(), pi.end(), cum.begin());
  return cum;
}

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

// Accumulates, into `law`, weight * product law of the given pair probabilities.
void add_product_law(std::vector<double>& law, const std::vector<double>& pair_probs, double weight) {
  std::vector<double> cur(std::size_t{1} << pair_probs.size(), 0.0);
  cur[0] = weight;
  std::size_t filled = 1;
  for (std::size_t e = 0; e < pair_probs.size(); ++e) {
    const double p = pair_probs[e];
    for (std::size_t idx = 0; idx < filled; ++idx) {
      cur[idx | filled] = cur[idx] * p;
      cur[idx] *= 1.0 - p;
    }
    filled <<= 1;
  }
  for (std::size_t i = 0; i < law.size(); ++i) law[i] += cur[i];
}

// Sums over all label maps [k]^n with weights prod_i w[phi(i)].
DiscreteLaw mixture_over_labels(const std::vector<double>& w, const SymMatrix& p, std::size_t n) {
  const auto k = static_cast<int>(w.size());
  if (n > kEnumerateMaxN || k > kEnumerateMaxK) throw std::length_error("enumerate_law: size guard n <= 6, k <= 3");
  DiscreteLaw law{n, std::vector<double>(std::size_t{1} << pair_count(n), 0.0)};
  std::vector<int> phi(n, 0);
  std::vector<double> probs(pair_count(n));
  while (true) {
    double weight = 1.0;
    for (int c : phi) weight *= w[static_cast<std::size_t>(c)];
    if (weight > 0.0) {
      std::size_t e = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) probs[e++] = p(static_cast<std::size_t>(phi[i]), static_cast<std::size_t>(phi[j]));
      add_product_law(law.prob, probs, weight);
    }
    std::size_t pos = 0;
    while (pos < n && ++phi[pos] == k) phi[pos++] = 0;
    if (pos == n) break;
  }
  return law;
}

}  // namespace

SbmSpec::SbmSpec(std::vector<double> pi_in, SymMatrix M_in, double alpha_in)
    : k(static_cast<int>(pi_in.size())), pi(std::move(pi_in)), M(std::move(M_in)), alpha(alpha_in) {
  if (k < 1) throw std::invalid_argument("SbmSpec: k must be >= 1");
  if (M.size() != pi.size()) throw std::invalid_argument("SbmSpec: M must be k x k");
  double s = 0.0;
  for (double p : pi) {
    if (!(p >= 0.0)) throw std::invalid_argument("SbmSpec: negative proportion");
    s += p;
  }
  if (std::abs(s - 1.0) > 1e-12) throw std::invalid_argument("SbmSpec: proportions must sum to 1");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("SbmSpec: alpha must lie in (0,1]");
  require_unit_interval(M, "SbmSpec");
}

SymMatrix SbmSpec::edge_probabilities() const {
  SymMatrix p(M.size());
  for (std::size_t i = 0; i < M.size(); ++i)
    for (std::size_t j = i; j < M.size(); ++j) p.set(i, j, alpha * M(i, j));
  return p;
}

std::vector<double> uniform_proportions(int k) {
  return std::vector<double>(static_cast<std::size_t>(k), 1.0 / k);
}

SubmodelK::SubmodelK(int k_in, std::vector<double> a_in, SymMatrix B_in, double theta_in, double base_in)
    : k(k_in), a(std::move(a_in)), B(std::move(B_in)), theta(theta_in), base(base_in) {
  if (k < 2) throw std::invalid_argument("SubmodelK: k must be >= 2");
  const auto rest = static_cast<std::size_t>(k - 2);
  if (a.size() != rest || B.size() != rest) throw std::invalid_argument("SubmodelK: a must have k-2 entries and B be (k-2)x(k-2)");
  if (std::abs(theta) > 0.5) throw std::invalid_argument("SubmodelK: |theta| must be <= 1/2");
  for (double v : a)
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("SubmodelK: a entries must lie in [0,1]");
  require_unit_interval(B, "SubmodelK B");
  require_unit_interval(realize(), "SubmodelK");
}

SymMatrix SubmodelK::realize() const { return build_mtheta(*this); }

SubmodelK SubmodelK::with_theta(double t) const { return SubmodelK(k, a, B, t, base); }

SubmodelK five_class_study_model(double theta) {
  const double lo = 1.0 / 12.0, hi = 11.0 / 12.0;
  return SubmodelK(5, {lo, hi, 1.0}, SymMatrix::from_rows({{lo, hi, 1.0}, {hi, hi, 1.0}, {1.0, 1.0, 1.0}}), theta);
}

Graphon::Graphon(std::variant<BlockConstant, Polynomial> v) : v_(std::move(v)) {}

Graphon Graphon::block(std::vector<double> pi, SymMatrix M) {
  SbmSpec check(pi, M);  // proportions and [0,1] entries
  Graphon g(BlockConstant{std::move(pi), std::move(M)});
  g.validate();
  return g;
}

Graphon Graphon::polynomial(std::vector<std::vector<double>> c, double coefficient_bound) {
  if (c.empty()) throw std::invalid_argument("Graphon: empty coefficient matrix");
  for (const auto& row : c)
    for (double v : row)
      if (!(std::abs(v) <= coefficient_bound)) throw std::invalid_argument("Graphon: coefficient exceeds bound");
  Graphon g(Polynomial{std::move(c)});
  g.validate();
  return g;
}

Graphon Graphon::w_theta(double theta) {
  if (theta < 0.0 || theta > 1.0) throw std::invalid_argument("w_theta: theta must lie in [0,1]");
  // 1/2 - theta (xy - x/2 - y/2 + 1/4)
  return polynomial({{0.5 - theta / 4.0, theta / 2.0}, {theta / 2.0, -theta}});
}

Graphon Graphon::constant(double p) { return polynomial({{p}}); }

double Graphon::operator()(double x, double y) const {
  if (const auto* b = std::get_if<BlockConstant>(&v_)) {
    const auto cum = cumulative_of(b->pi);
    return b->M(static_cast<std::size_t>(cell_of(cum, x)), static_cast<std::size_t>(cell_of(cum, y)));
  }
  const auto& c = std::get<Polynomial>(v_).c;
  // Horner in x over rows, in y within rows.
  double acc = 0.0;
  for (std::size_t p = c.size(); p-- > 0;) {
    double row = 0.0;
    for (std::size_t q = c[p].size(); q-- > 0;) row = row * y + c[p][q];
    acc = acc * x + row;
  }
  return acc;
}

void Graphon::validate() const {
  const std::size_t g = kValidationGrid;
  for (std::size_t i = 0; i < g; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(g - 1);
    for (std::size_t j = 0; j <= i; ++j) {
      const double y = static_cast<double>(j) / static_cast<double>(g - 1);
      const double wxy = (*this)(x, y), wyx = (*this)(y, x);
      if (wxy < -kValidationSlack || wxy > 1.0 + kValidationSlack)
        throw std::invalid_argument("Graphon: value outside [0,1] on validation grid");
      if (std::abs(wxy - wyx) > kValidationSlack) throw std::invalid_argument("Graphon: not symmetric on validation grid");
    }
  }
}

double DiscreteLaw::total() const { return std::accumulate(prob.begin(), prob.end(), 0.0); }

std::size_t pair_count(std::size_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n) {
  // Pairs before row i: sum_{r<i} (n-1-r).
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

Graph outcome_graph(std::size_t n, std::size_t outcome) {
  Graph g(n);
  std::size_t e = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j, ++e)
      if ((outcome >> e) & 1U) g.set_edge(i, j);
  return g;
}

std::size_t graph_outcome(const Graph& g) {
  std::size_t out = 0, e = 0;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j, ++e)
      if (g.edge(i, j)) out |= std::size_t{1} << e;
  return out;
}

DiscreteLaw bernoulli_product_law(std::size_t n, const std::vector<double>& pair_probs) {
  if (pair_probs.size() != pair_count(n)) throw std::invalid_argument("bernoulli_product_law: wrong number of pairs");
  if (pair_probs.size() > 24) throw std::length_error("bernoulli_product_law: too many pairs to enumerate");
  DiscreteLaw law{n, std::vector<double>(std::size_t{1} << pair_probs.size(), 0.0)};
  add_product_law(law.prob, pair_probs, 1.0);
  return law;
}

SymMatrix build_qtheta(double theta, double alpha, double b) {
  if (std::abs(theta) > 0.5) throw std::invalid_argument("build_qtheta: |theta| must be <= 1/2");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("build_qtheta: alpha must lie in (0,1]");
  if (!(b > 0.0 && b < 1.0)) throw std::invalid_argument("build_qtheta: b must lie in (0,1)");
  // Constants normalized so that b = 1/2 gives the symmetric affiliation block.
  const double cb = 2.0 * (1.0 - b), db = 2.0 * b;
  SymMatrix q(2);
  q.set(0, 0, alpha * (0.5 + cb * theta));
  q.set(1, 1, alpha * (0.5 + cb * theta));
  q.set(0, 1, alpha * (0.5 - db * theta));
  require_unit_interval(q, "build_qtheta");
  return q;
}

SymMatrix build_mtheta(const SubmodelK& sub) {
  const auto k = static_cast<std::size_t>(sub.k);
  SymMatrix m(k);
  m.set(0, 0, sub.base + sub.theta);
  m.set(1, 1, sub.base + sub.theta);
  m.set(0, 1, sub.base - sub.theta);
  for (std::size_t i = 2; i < k; ++i) {
    m.set(0, i, sub.a[i - 2]);
    m.set(1, i, sub.a[i - 2]);
    for (std::size_t j = i; j < k; ++j) m.set(i, j, sub.B(i - 2, j - 2));
  }
  return m;
}

SymMatrix build_checkerboard(const SymMatrix& A, double theta) {
  const std::size_t l = A.size();
  SymMatrix q(2 * l);
  for (std::size_t i = 0; i < 2 * l; ++i) {
    for (std::size_t j = i; j < 2 * l; ++j) {
      const double sign = ((i < l) == (j < l)) ? 1.0 : -1.0;
      q.set(i, j, 0.5 + theta * sign * A(i % l, j % l));
    }
  }
  require_unit_interval(q, "build_checkerboard");
  return q;
}

Graph sample_fixed_design(const SymMatrix& M, const Labelling& phi, Rng& rng) {
  const std::size_t n = phi.size();
  Graph g(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ci = static_cast<std::size_t>(phi[i]);
    const auto mrow = M.row(ci);
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.bernoulli(mrow[static_cast<std::size_t>(phi[j])])) g.set_edge(i, j);
  }
  return g;
}

RandomDesignDraw sample_random_design(const SbmSpec& spec, std::size_t n, Rng& rng) {
  const auto cum = cumulative_of(spec.pi);
  std::vector<int> labels(n);
  for (auto& c : labels) {
    c = cell_of(cum, rng.uniform());
    // Skip zero-mass classes that round-off might land on.
    while (spec.pi[static_cast<std::size_t>(c)] == 0.0 && c > 0) --c;
  }
  Labelling phi(std::move(labels), spec.k);
  auto g = sample_fixed_design(spec.edge_probabilities(), phi, rng);
  return {std::move(g), std::move(phi)};
}

Graph sample_graphon(const Graphon& w, std::size_t n, Rng& rng) {
  std::vector<double> u(n);
  for (auto& x : u) x = rng.uniform();
  Graph g(n);
  if (const auto* b = std::get_if<Graphon::BlockConstant>(&w.variant())) {
    const auto cum = cumulative_of(b->pi);
    std::vector<std::size_t> cell(n);
    for (std::size_t i = 0; i < n; ++i) cell[i] = static_cast<std::size_t>(cell_of(cum, u[i]));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (rng.bernoulli(b->M(cell[i], cell[j]))) g.set_edge(i, j);
    return g;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.bernoulli(clamp01(w(u[i], u[j])))) g.set_edge(i, j);
  return g;
}

DiscreteLaw enumerate_law(const SbmSpec& spec, std::size_t n) {
  if (spec.k > kEnumerateMaxK) throw std::length_error("enumerate_law: size guard n <= 6, k <= 3");
  return mixture_over_labels(spec.pi, spec.edge_probabilities(), n);
}

DiscreteLaw enumerate_graphon_law(const Graphon& w, std::size_t n) {
  const auto* b = std::get_if<Graphon::BlockConstant>(&w.variant());
  if (!b) throw std::invalid_argument("enumerate_graphon_law: block-constant graphon required");
  // Cell masses are the lengths of the histogram intervals [cum_{c-1}, cum_c).
  const auto cum = cumulative_of(b->pi);
  std::vector<double> mass(cum.size());
  double prev = 0.0;
  for (std::size_t c = 0; c < cum.size(); ++c) {
    const double hi = (c + 1 == cum.size()) ? 1.0 : std::min(cum[c], 1.0);
    mass[c] = std::max(0.0, hi - prev);
    prev = hi;
  }
  return mixture_over_labels(mass, b->M, n);
}

bool is_balanced(const Labelling& phi, int k, double c1, double c2) {
  const double n = static_cast<double>(phi.size());
  const double lo = c1 * n / k, hi = c2 * n / k;
  for (int c = 0; c < k; ++c) {
    const auto s = static_cast<double>(c < phi.classes() ? phi.class_size(c) : 0);
    if (s < lo || s > hi) return false;
  }
  return true;
}

}  // namespace sbmrate
