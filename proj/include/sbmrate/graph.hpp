#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "sbmrate/linalg.hpp"

namespace sbmrate {

// Undirected simple graph on vertices 0..n-1. Stored as a dense symmetric 0/1
// incidence with an all-zero diagonal; consumers that need a diagonal
// convention apply it themselves.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n) : n_(n), adj_(n * n, 0) {}

  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] bool edge(std::size_t i, std::size_t j) const { return adj_[i * n_ + j] != 0; }
  // i != j required; self-loops are rejected with std::invalid_argument.
  void set_edge(std::size_t i, std::size_t j, bool present = true);

  [[nodiscard]] std::size_t edge_count() const;
  [[nodiscard]] std::span<const std::uint8_t> row(std::size_t i) const { return {adj_.data() + i * n_, n_}; }

  // Adjacency as a real symmetric matrix with zero diagonal.
  [[nodiscard]] SymMatrix to_matrix() const;
  [[nodiscard]] Graph induced(std::span<const std::size_t> vertices) const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> adj_;
};

// Vertex -> class map with classes 0..k-1.
class Labelling {
 public:
  Labelling() = default;
  Labelling(std::vector<int> assignment, int k);

  [[nodiscard]] std::size_t size() const { return assignment_.size(); }
  [[nodiscard]] int classes() const { return k_; }
  [[nodiscard]] int operator[](std::size_t v) const { return assignment_[v]; }
  [[nodiscard]] const std::vector<int>& assignment() const { return assignment_; }
  [[nodiscard]] std::vector<std::size_t> class_sizes() const;
  [[nodiscard]] std::size_t class_size(int c) const;
  [[nodiscard]] std::vector<std::size_t> members(int c) const;

  friend bool operator==(const Labelling&, const Labelling&) = default;

 private:
  std::vector<int> assignment_;
  int k_ = 0;
};

// Vertex v gets class v mod k.
Labelling round_robin_labelling(std::size_t n, int k);

// True when the two labellings induce the same partition (labels may be
// permuted).
bool same_partition(const Labelling& a, const Labelling& b);

// Edge list: optional "# n <count>" header, then one "i j" line per edge,
// 0-based, i < j. Lines starting with '#' are otherwise ignored.
void write_edge_list(std::ostream& os, const Graph& g);
// n_hint == 0 means: use the header if present, else max index + 1.
Graph read_edge_list(std::istream& is, std::size_t n_hint = 0);

}  // namespace sbmrate
