#include "sbmrate/graph.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace sbmrate {

void Graph::set_edge(std::size_t i, std::size_t j, bool present) {
  if (i == j) throw std::invalid_argument("Graph: self-loops are not allowed");
  if (i >= n_ || j >= n_) throw std::out_of_range("Graph: vertex index out of range");
  adj_[i * n_ + j] = adj_[j * n_ + i] = present ? 1 : 0;
}

std::size_t Graph::edge_count() const {
  std::size_t m = 0;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j) m += adj_[i * n_ + j];
  return m;
}

SymMatrix Graph::to_matrix() const {
  SymMatrix x(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if (adj_[i * n_ + j]) x.set(i, j, 1.0);
  return x;
}

Graph Graph::induced(std::span<const std::size_t> vertices) const {
  Graph g(vertices.size());
  for (std::size_t a = 0; a < vertices.size(); ++a)
    for (std::size_t b = a + 1; b < vertices.size(); ++b)
      if (edge(vertices[a], vertices[b])) g.set_edge(a, b);
  return g;
}

Labelling::Labelling(std::vector<int> assignment, int k) : assignment_(std::move(assignment)), k_(k) {
  if (k < 1) throw std::invalid_argument("Labelling: k must be >= 1");
  for (int c : assignment_)
    if (c < 0 || c >= k) throw std::invalid_argument("Labelling: class out of range");
}

std::vector<std::size_t> Labelling::class_sizes() const {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(k_), 0);
  for (int c : assignment_) ++sizes[static_cast<std::size_t>(c)];
  return sizes;
}

std::size_t Labelling::class_size(int c) const {
  return static_cast<std::size_t>(std::count(assignment_.begin(), assignment_.end(), c));
}

std::vector<std::size_t> Labelling::members(int c) const {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < assignment_.size(); ++v)
    if (assignment_[v] == c) out.push_back(v);
  return out;
}

Labelling round_robin_labelling(std::size_t n, int k) {
  std::vector<int> a(n);
  for (std::size_t v = 0; v < n; ++v) a[v] = static_cast<int>(v % static_cast<std::size_t>(k));
  return Labelling(std::move(a), k);
}

bool same_partition(const Labelling& a, const Labelling& b) {
  if (a.size() != b.size()) return false;
  std::map<int, int> fwd, bwd;
  for (std::size_t v = 0; v < a.size(); ++v) {
    auto [it1, new1] = fwd.emplace(a[v], b[v]);
    auto [it2, new2] = bwd.emplace(b[v], a[v]);
    if (it1->second != b[v] || it2->second != a[v]) return false;
  }
  return true;
}

void write_edge_list(std::ostream& os, const Graph& g) {
  os << "# n " << g.size() << '\n';
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j)
      if (g.edge(i, j)) os << i << ' ' << j << '\n';
}

Graph read_edge_list(std::istream& is, std::size_t n_hint) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::size_t header_n = 0, max_index = 0;
  bool any = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string key;
      std::size_t value = 0;
      if (hs >> key >> value && key == "n") header_n = value;
      continue;
    }
    std::istringstream ls(line);
    long long i = -1, j = -1;
    if (!(ls >> i >> j) || i < 0 || j < 0 || i == j)
      throw std::invalid_argument("edge list: malformed line " + std::to_string(lineno));
    auto a = static_cast<std::size_t>(std::min(i, j)), b = static_cast<std::size_t>(std::max(i, j));
    edges.emplace_back(a, b);
    max_index = std::max(max_index, b);
    any = true;
  }
  std::size_t n = n_hint ? n_hint : (header_n ? header_n : (any ? max_index + 1 : 0));
  if (any && max_index >= n) throw std::invalid_argument("edge list: vertex index exceeds n");
  Graph g(n);
  for (auto [a, b] : edges) g.set_edge(a, b);
  return g;
}

}  // namespace sbmrate
