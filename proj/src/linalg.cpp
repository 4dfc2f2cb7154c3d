#include "sbmrate/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sbmrate/rng.hpp"

namespace sbmrate {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

std::vector<double> random_unit(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (auto& x : v) x = 2.0 * rng.uniform() - 1.0;
  const double nv = norm2(v);
  for (auto& x : v) x /= nv;
  return v;
}

// Orthogonalizes w against every vector of basis (two passes).
void reorthogonalize(const std::vector<std::vector<double>>& basis, std::span<double> w) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& q : basis) axpy(-dot(q, w), q, w);
  }
}

double residual_norm(const SymMatrix& a, std::span<const double> v, double lambda) {
  auto av = a.apply(v);
  axpy(-lambda, v, av);
  return norm2(av);
}

std::vector<std::size_t> order_by_modulus(std::span<const double> values) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  // Larger modulus first; on exact modulus ties the positive value first.
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
    const double ai = std::abs(values[i]), aj = std::abs(values[j]);
    if (ai != aj) return ai > aj;
    return values[i] > values[j];
  });
  return idx;
}

struct KrylovOutcome {
  TopEigen top;
  std::vector<double> ritz_values;  // all final Ritz values
};

KrylovOutcome lanczos(const SymMatrix& a, std::size_t k, const EigenOptions& opt, double fnorm) {
  const std::size_t n = a.size();
  const double thresh = opt.tol * fnorm;
  const double breakdown = 1e-13 * std::max(fnorm, 1e-300);
  const std::size_t max_dim = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(opt.max_iter, 1)));

  Rng rng(opt.seed);
  std::vector<std::vector<double>> basis;
  std::vector<double> alpha, beta;  // beta[j] couples basis j and j+1
  basis.push_back(random_unit(n, rng));

  KrylovOutcome out;
  std::vector<double> w(n);
  Eigen::VectorXd diag, sub;
  int matvecs = 0;
  std::size_t block_start = 0;  // first basis index of the current Krylov block

  auto ritz = [&](bool final_check) -> bool {
    const std::size_t m = alpha.size();
    diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), static_cast<Eigen::Index>(m));
    sub.resize(static_cast<Eigen::Index>(m > 0 ? m - 1 : 0));
    for (std::size_t j = 0; j + 1 < m; ++j) sub[static_cast<Eigen::Index>(j)] = beta[j];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const auto& evals = es.eigenvalues();
    const auto& evecs = es.eigenvectors();
    std::vector<double> vals(evals.data(), evals.data() + evals.size());
    const auto order = order_by_modulus(vals);
    const std::size_t want = std::min(k, m);
    const double tail_beta = beta.size() >= m ? beta[m - 1] : 0.0;

    bool all_small = want == k;
    for (std::size_t r = 0; r < want && all_small; ++r) {
      const double est = std::abs(tail_beta * evecs(static_cast<Eigen::Index>(m - 1), static_cast<Eigen::Index>(order[r])));
      if (est > thresh) all_small = false;
    }
    if (!all_small && !final_check) return false;

    TopEigen top;
    top.iterations = matvecs;
    top.converged = true;
    for (std::size_t r = 0; r < want; ++r) {
      EigenPair p;
      p.value = vals[order[r]];
      p.vector.assign(n, 0.0);
      for (std::size_t j = 0; j < m; ++j) {
        axpy(evecs(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(order[r])), basis[j], p.vector);
      }
      const double nv = norm2(p.vector);
      for (auto& x : p.vector) x /= nv;
      canonicalize_sign(p.vector);
      p.residual = residual_norm(a, p.vector, p.value);
      if (p.residual > thresh) top.converged = false;
      top.pairs.push_back(std::move(p));
    }
    if (want < k) top.converged = false;
    if (want < m) {
      const double gap = std::abs(vals[order[want - 1]]) - std::abs(vals[order[want]]);
      top.gap_degenerate = gap < thresh;
    }
    if (!top.converged && !final_check) return false;
    out.top = std::move(top);
    out.ritz_values = std::move(vals);
    return true;
  };

  while (true) {
    const std::size_t j = alpha.size();
    a.apply(basis[j], w);
    ++matvecs;
    const double aj = dot(basis[j], w);
    axpy(-aj, basis[j], w);
    if (j > 0) axpy(-beta[j - 1], basis[j - 1], w);
    reorthogonalize(basis, w);
    alpha.push_back(aj);
    double bj = norm2(w);
    const std::size_t dim = alpha.size();

    if (dim >= max_dim) {
      beta.push_back(dim == n ? 0.0 : bj);
      ritz(true);
      return out;
    }
    if (bj <= breakdown) {
      // Invariant subspace reached: continue from a fresh direction.
      std::vector<double> fresh;
      double nf = 0.0;
      for (int attempt = 0; attempt < 8 && nf <= 1e-8; ++attempt) {
        fresh = random_unit(n, rng);
        reorthogonalize(basis, fresh);
        nf = norm2(fresh);
      }
      for (auto& x : fresh) x /= nf;
      beta.push_back(0.0);
      // The found subspace may hold only one copy of a repeated eigenvalue,
      // so acceptance waits for a block that keeps growing.
      block_start = dim;
      basis.push_back(std::move(fresh));
      continue;
    }
    beta.push_back(bj);
    std::vector<double> next(w);
    for (auto& x : next) x /= bj;
    basis.push_back(std::move(next));
    if (dim - block_start >= k && (dim % 4 == 0 || dim - block_start == k) && ritz(false)) return out;
  }
}

TopEigen subspace_iteration(const SymMatrix& a, std::size_t k, const EigenOptions& opt, double fnorm) {
  const std::size_t n = a.size();
  const std::size_t p = std::min(n, k + 2);
  const double thresh = opt.tol * fnorm;
  Rng rng(opt.seed);

  std::vector<std::vector<double>> z(p);
  for (auto& v : z) v = random_unit(n, rng);

  TopEigen best;
  for (int it = 1; it <= opt.max_iter; ++it) {
    // Orthonormalize the block (modified Gram-Schmidt, twice).
    for (std::size_t i = 0; i < p; ++i) {
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t j = 0; j < i; ++j) axpy(-dot(z[j], z[i]), z[j], z[i]);
      double nz = norm2(z[i]);
      if (nz < 1e-300) {
        z[i] = random_unit(n, rng);
        for (std::size_t j = 0; j < i; ++j) axpy(-dot(z[j], z[i]), z[j], z[i]);
        nz = norm2(z[i]);
      }
      for (auto& x : z[i]) x /= nz;
    }
    std::vector<std::vector<double>> az(p);
    for (std::size_t i = 0; i < p; ++i) az[i] = a.apply(z[i]);
    SymMatrix h(p);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = i; j < p; ++j) h.set(i, j, 0.5 * (dot(z[i], az[j]) + dot(z[j], az[i])));
    auto small = jacobi_full_eigen(h);
    std::vector<double> vals;
    for (const auto& e : small) vals.push_back(e.value);
    const auto order = order_by_modulus(vals);

    std::vector<std::vector<double>> q(p, std::vector<double>(n, 0.0)), aq(p, std::vector<double>(n, 0.0));
    for (std::size_t r = 0; r < p; ++r) {
      const auto& s = small[order[r]].vector;
      for (std::size_t j = 0; j < p; ++j) {
        axpy(s[j], z[j], q[r]);
        axpy(s[j], az[j], aq[r]);
      }
    }
    TopEigen cur;
    cur.iterations = it;
    cur.converged = true;
    for (std::size_t r = 0; r < k; ++r) {
      EigenPair e;
      e.value = vals[order[r]];
      std::vector<double> res(aq[r]);
      axpy(-e.value, q[r], res);
      e.residual = norm2(res);
      if (e.residual > thresh) cur.converged = false;
      e.vector = q[r];
      cur.pairs.push_back(std::move(e));
    }
    if (p > k) cur.gap_degenerate = std::abs(vals[order[k - 1]]) - std::abs(vals[order[k]]) < thresh;
    best = std::move(cur);
    if (best.converged) break;
    z = std::move(aq);
  }
  for (auto& e : best.pairs) {
    canonicalize_sign(e.vector);
    e.residual = residual_norm(a, e.vector, e.value);
  }
  return best;
}

LargestEigen power_iteration(const SymMatrix& a, const EigenOptions& opt, double fnorm) {
  const std::size_t n = a.size();
  const double thresh = opt.tol * fnorm;
  Rng rng(opt.seed);
  auto x = random_unit(n, rng);
  std::vector<double> y(n);

  LargestEigen out;
  double best_res = INFINITY;
  int since_improvement = 0;
  for (int it = 1; it <= opt.max_iter; ++it) {
    a.apply(x, y);
    const double rq = dot(x, y);
    std::vector<double> r(y);
    axpy(-rq, x, r);
    const double res = norm2(r);
    out.iterations = it;
    if (res < best_res) {
      if (res < 0.99 * best_res) since_improvement = 0;
      best_res = res;
      out.pair.value = rq;
      out.pair.vector = x;
      out.pair.residual = res;
    }
    if (res <= thresh) {
      out.converged = true;
      break;
    }
    const double ny = norm2(y);
    if (ny == 0.0 || ++since_improvement > 500) {
      x = random_unit(n, rng);
      since_improvement = 0;
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / ny;
  }
  if (!out.converged) {
    // A +lambda/-lambda pair makes the iterate oscillate inside their span;
    // A^2 then has x as an eigenvector and (x + A x / mu) isolates +mu.
    a.apply(x, y);
    const double mu = norm2(y);
    if (mu > 0.0) {
      std::vector<double> yy = a.apply(y);
      axpy(-mu * mu, x, yy);
      if (norm2(yy) <= thresh * mu) {
        std::vector<double> plus(x);
        axpy(1.0 / mu, y, plus);
        if (norm2(plus) > 1e-8) {
          const double np = norm2(plus);
          for (auto& v : plus) v /= np;
          out.pair.value = mu;
          out.pair.vector = plus;
          out.sign_tie = true;
          out.converged = true;
        }
      }
    }
  }
  canonicalize_sign(out.pair.vector);
  out.pair.residual = residual_norm(a, out.pair.vector, out.pair.value);
  return out;
}

}  // namespace

SymMatrix::SymMatrix(std::size_t n, double fill) : n_(n), data_(n * n, fill) {}

SymMatrix SymMatrix::identity(std::size_t n) {
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1.0);
  return m;
}

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
  SymMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m.set(i, i, d[i]);
  return m;
}

SymMatrix SymMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw std::invalid_argument("matrix is not square");
    for (std::size_t j = 0; j < n; ++j) {
      if (rows[i][j] != rows[j][i]) throw std::invalid_argument("matrix is not symmetric");
      if (j >= i) m.set(i, j, rows[i][j]);
    }
  }
  return m;
}

void SymMatrix::apply(std::span<const double> x, std::span<double> y) const {
  const auto n = static_cast<Eigen::Index>(n_);
  Eigen::Map<const RowMajor> am(data_.data(), n, n);
  Eigen::Map<const Eigen::VectorXd> xm(x.data(), n);
  Eigen::Map<Eigen::VectorXd> ym(y.data(), n);
  ym.noalias() = am * xm;
}

std::vector<double> SymMatrix::apply(std::span<const double> x) const {
  std::vector<double> y(n_);
  apply(x, y);
  return y;
}

SymMatrix SymMatrix::submatrix(std::span<const std::size_t> idx) const {
  SymMatrix s(idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a; b < idx.size(); ++b) s.set(a, b, (*this)(idx[a], idx[b]));
  return s;
}

bool SymMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return v == 0.0; });
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void canonicalize_sign(std::span<double> v) {
  std::size_t arg = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    // Small slack so that round-off does not decide between equal-modulus entries.
    if (std::abs(v[i]) > best * (1.0 + 1e-9) + 1e-300) {
      best = std::abs(v[i]);
      arg = i;
    }
  }
  if (!v.empty() && v[arg] < 0.0)
    for (auto& x : v) x = -x;
}

double frobenius_norm(const SymMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (double x : a.row(i)) s += x * x;
  return std::sqrt(s);
}

LargestEigen largest_abs_eigenvalue(const SymMatrix& a, const EigenOptions& opt) {
  if (a.size() == 0 || a.is_zero()) throw std::invalid_argument("largest_abs_eigenvalue: zero matrix");
  const double fnorm = frobenius_norm(a);
  if (opt.method == EigenMethod::power) return power_iteration(a, opt, fnorm);

  auto run = lanczos(a, 1, opt, fnorm);
  LargestEigen out;
  out.pair = run.top.pairs.front();
  out.converged = run.top.converged;
  out.iterations = run.top.iterations;
  const double thresh = opt.tol * fnorm;
  double opposite = 0.0;
  for (double v : run.ritz_values)
    if ((v > 0) != (out.pair.value > 0) && std::abs(v) > std::abs(opposite)) opposite = v;
  if (opposite != 0.0 && std::abs(std::abs(opposite) - std::abs(out.pair.value)) <= thresh) {
    out.sign_tie = true;
    if (out.pair.value < 0.0) {
      auto both = lanczos(a, 2, opt, fnorm);
      for (auto& p : both.top.pairs) {
        if (p.value > 0.0) {
          out.pair = p;
          out.converged = both.top.converged;
          out.iterations += both.top.iterations;
          break;
        }
      }
    }
  }
  return out;
}

TopEigen top_k_eigenpairs(const SymMatrix& a, std::size_t k, const EigenOptions& opt) {
  if (k > a.size()) throw std::invalid_argument("top_k_eigenpairs: K exceeds dimension");
  if (k == 0) return TopEigen{{}, true, false, 0};
  const double fnorm = frobenius_norm(a);
  if (fnorm == 0.0) {
    // Every unit vector is an eigenvector of the zero matrix.
    TopEigen t;
    t.converged = true;
    t.gap_degenerate = k < a.size();
    for (std::size_t r = 0; r < k; ++r) {
      EigenPair p;
      p.vector.assign(a.size(), 0.0);
      p.vector[r] = 1.0;
      t.pairs.push_back(std::move(p));
    }
    return t;
  }
  if (opt.method == EigenMethod::power) return subspace_iteration(a, k, opt, fnorm);
  return lanczos(a, k, opt, fnorm).top;
}

std::vector<EigenPair> jacobi_full_eigen(const SymMatrix& a) {
  const std::size_t n = a.size();
  if (n > kJacobiMaxSize) throw std::length_error("jacobi_full_eigen: n exceeds 512");
  std::vector<double> m(n * n), v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i * n + j] = a(i, j);
    v[i * n + i] = 1.0;
  }
  const double fnorm = frobenius_norm(a);
  auto off = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += m[i * n + j] * m[i * n + j];
    return std::sqrt(s);
  };
  for (int sweep = 0; sweep < 100 && off() > 1e-13 * fnorm; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = m[p * n + q];
        if (apq == 0.0) continue;
        const double app = m[p * n + p], aqq = m[q * n + q];
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t), s = t * c;
        for (std::size_t r = 0; r < n; ++r) {
          const double mrp = m[r * n + p], mrq = m[r * n + q];
          m[r * n + p] = c * mrp - s * mrq;
          m[r * n + q] = s * mrp + c * mrq;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double mpr = m[p * n + r], mqr = m[q * n + r];
          m[p * n + r] = c * mpr - s * mqr;
          m[q * n + r] = s * mpr + c * mqr;
        }
        m[p * n + q] = m[q * n + p] = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          const double vrp = v[r * n + p], vrq = v[r * n + q];
          v[r * n + p] = c * vrp - s * vrq;
          v[r * n + q] = s * vrp + c * vrq;
        }
      }
    }
  }
  std::vector<EigenPair> out(n);
  for (std::size_t c = 0; c < n; ++c) {
    out[c].value = m[c * n + c];
    out[c].vector.resize(n);
    for (std::size_t r = 0; r < n; ++r) out[c].vector[r] = v[r * n + c];
    canonicalize_sign(out[c].vector);
  }
  std::stable_sort(out.begin(), out.end(), [](const EigenPair& x, const EigenPair& y) { return x.value > y.value; });
  for (auto& e : out) e.residual = residual_norm(a, e.vector, e.value);
  return out;
}

}  // namespace sbmrate
