#include "sbmrate/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sbmrate/spectral.hpp"

namespace sbmrate {

std::string to_string(TauMethod m) {
  switch (m) {
    case TauMethod::closed_form: return "closed_form";
    case TauMethod::quadrature: return "quadrature";
    case TauMethod::plugin: return "plugin";
  }
  return "unknown";
}

namespace {

double block_tau(const std::vector<double>& pi, const SymMatrix& M) {
  const std::size_t k = pi.size();
  double mean = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) mean += pi[i] * pi[j] * M(i, j);
  double var = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const double d = M(i, j) - mean;
      var += pi[i] * pi[j] * d * d;
    }
  return std::sqrt(std::max(0.0, var));
}

double polynomial_tau(const std::vector<std::vector<double>>& c) {
  double mean = 0.0, sq = 0.0;
  for (std::size_t p = 0; p < c.size(); ++p)
    for (std::size_t q = 0; q < c[p].size(); ++q) {
      mean += c[p][q] / static_cast<double>((p + 1) * (q + 1));
      for (std::size_t r = 0; r < c.size(); ++r)
        for (std::size_t s = 0; s < c[r].size(); ++s)
          sq += c[p][q] * c[r][s] / static_cast<double>((p + r + 1) * (q + s + 1));
    }
  return std::sqrt(std::max(0.0, sq - mean * mean));
}

void check_grid(std::size_t grid) {
  if (grid < kMinQuadratureGrid) throw std::invalid_argument("quadrature grid must be >= 64");
}

}  // namespace

FunctionalValue tau_exact(const Graphon& w) {
  FunctionalValue v;
  v.method = TauMethod::closed_form;
  if (const auto* b = std::get_if<Graphon::BlockConstant>(&w.variant()))
    v.tau = block_tau(b->pi, b->M);
  else
    v.tau = polynomial_tau(std::get<Graphon::Polynomial>(w.variant()).c);
  return v;
}

FunctionalValue tau_quadrature(const Graphon& w, std::size_t grid) {
  check_grid(grid);
  const double h = 1.0 / static_cast<double>(grid);
  std::vector<double> vals(grid * grid);
  // row sums first to keep rounding at the 1e-15 level
  double mean = 0.0;
  for (std::size_t i = 0; i < grid; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < grid; ++j) {
      const double v = w((i + 0.5) * h, (j + 0.5) * h);
      vals[i * grid + j] = v;
      row += v;
    }
    mean += row;
  }
  mean /= static_cast<double>(vals.size());
  double var = 0.0;
  for (std::size_t i = 0; i < grid; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < grid; ++j) {
      const double d = vals[i * grid + j] - mean;
      row += d * d;
    }
    var += row;
  }
  FunctionalValue out;
  out.method = TauMethod::quadrature;
  out.tau = std::sqrt(var / static_cast<double>(vals.size()));
  return out;
}

double l2_distance(const Graphon& a, const Graphon& b, std::size_t grid) {
  check_grid(grid);
  const double h = 1.0 / static_cast<double>(grid);
  double s = 0.0;
  for (std::size_t i = 0; i < grid; ++i)
    for (std::size_t j = 0; j < grid; ++j) {
      const double x = (i + 0.5) * h, y = (j + 0.5) * h;
      const double d = a(x, y) - b(x, y);
      s += d * d;
    }
  return std::sqrt(s * h * h);
}

int default_plugin_k(std::size_t n) {
  int k = static_cast<int>(std::ceil(std::cbrt(static_cast<double>(n))));
  // cbrt of a perfect cube can land a hair above the integer
  if (k > 1 && static_cast<std::size_t>(k - 1) * (k - 1) * (k - 1) >= n) --k;
  return std::max(1, k);
}

FunctionalValue tau_plugin(const Graph& x, int k, Rng& rng) {
  const std::size_t n = x.size();
  if (k < 1) throw std::invalid_argument("tau_plugin: k must be >= 1");
  if (n < 2 * static_cast<std::size_t>(k)) throw std::invalid_argument("tau_plugin: need n >= 2k");
  FunctionalValue out;
  out.method = TauMethod::plugin;
  if (k == 1) return out;

  const SymMatrix m = x.to_matrix();
  ClusterResult init = spectral_cluster(m, k, rng);
  RefineResult ref = refine_labels(m, init, k);
  out.flags = ref.cluster.flags;
  for (const auto& f : init.flags) add_flag(out.flags, f);

  const Labelling& lab = ref.cluster.labels;
  const auto sizes = lab.class_sizes();
  std::vector<double> pi(sizes.size());
  for (std::size_t c = 0; c < sizes.size(); ++c) pi[c] = static_cast<double>(sizes[c]) / static_cast<double>(n);
  out.tau = block_tau(pi, block_means(m, lab));
  return out;
}

}  // namespace sbmrate
