#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sbmrate/graph.hpp"
#include "sbmrate/model.hpp"
#include "sbmrate/rng.hpp"

namespace sbmrate {

enum class TauMethod { closed_form, quadrature, plugin };

std::string to_string(TauMethod m);

struct FunctionalValue {
  double tau = 0.0;
  TauMethod method = TauMethod::closed_form;
  std::vector<std::string> flags;
};

// tau(w) = ( int (w - int w)^2 )^{1/2}
FunctionalValue tau_exact(const Graphon& w);

inline constexpr std::size_t kMinQuadratureGrid = 64;

// Midpoint rule on a grid x grid lattice; grid >= 64.
FunctionalValue tau_quadrature(const Graphon& w, std::size_t grid = 1024);

// Grid L2 distance (int (w1 - w2)^2)^{1/2} under the same midpoint rule.
double l2_distance(const Graphon& a, const Graphon& b, std::size_t grid = 1024);

// ceil(n^{1/3})
int default_plugin_k(std::size_t n);

// Block-model plug-in: spectral clustering into k classes, likelihood
// refinement, then tau of the fitted block graphon.
FunctionalValue tau_plugin(const Graph& x, int k, Rng& rng);

}  // namespace sbmrate
