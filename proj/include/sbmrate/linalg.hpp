#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sbmrate {

// Dense symmetric matrix. Entries are only ever written through set(), which
// writes both (i,j) and (j,i), so A(i,j) == A(j,i) holds bit-for-bit. The full
// square is stored to keep matrix-vector products contiguous.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n, double fill = 0.0);

  static SymMatrix identity(std::size_t n);
  static SymMatrix diagonal(std::span<const double> d);
  // Throws std::invalid_argument unless rows form an exactly symmetric square.
  static SymMatrix from_rows(const std::vector<std::vector<double>>& rows);

  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    data_[i * n_ + j] = v;
    data_[j * n_ + i] = v;
  }
  [[nodiscard]] std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * n_, n_};
  }

  // y = A x
  void apply(std::span<const double> x, std::span<double> y) const;
  [[nodiscard]] std::vector<double> apply(std::span<const double> x) const;

  // Principal submatrix on the given (sorted or unsorted) index set.
  [[nodiscard]] SymMatrix submatrix(std::span<const std::size_t> idx) const;

  [[nodiscard]] bool is_zero() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

struct EigenPair {
  double value = 0.0;
  std::vector<double> vector;  // unit norm, largest-modulus coordinate positive
  double residual = 0.0;       // ||A v - value v||_2
};

enum class EigenMethod {
  krylov,  // Lanczos with full reorthogonalization (default)
  power,   // power iteration / orthogonal (subspace) iteration
};

struct EigenOptions {
  double tol = 1e-10;  // relative to ||A||_F
  int max_iter = 10000;
  EigenMethod method = EigenMethod::krylov;
  std::uint64_t seed = 0x5eedULL;
};

struct LargestEigen {
  EigenPair pair;
  bool converged = false;
  bool sign_tie = false;  // |lambda_1| == |lambda_n| within tolerance; positive one returned
  int iterations = 0;
};

struct TopEigen {
  std::vector<EigenPair> pairs;  // by |value| descending
  bool converged = false;
  bool gap_degenerate = false;  // |lambda_K| - |lambda_{K+1}| < tol * ||A||_F
  int iterations = 0;
};

double frobenius_norm(const SymMatrix& a);

// Signed eigenvalue of maximal modulus. Throws std::invalid_argument on the
// zero matrix. Non-convergence is reported through `converged`, never thrown.
LargestEigen largest_abs_eigenvalue(const SymMatrix& a, const EigenOptions& opt = {});

// The K eigenpairs of largest modulus, pairwise orthonormal.
TopEigen top_k_eigenpairs(const SymMatrix& a, std::size_t k, const EigenOptions& opt = {});

// Full decomposition by cyclic Jacobi rotations, sorted by value descending.
// Size guard: n <= 512 (std::length_error otherwise).
std::vector<EigenPair> jacobi_full_eigen(const SymMatrix& a);

inline constexpr std::size_t kJacobiMaxSize = 512;

// Normalizes v in place and flips its sign so that the first coordinate of
// maximal modulus is positive.
void canonicalize_sign(std::span<double> v);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace sbmrate
