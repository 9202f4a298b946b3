#pragma once

#include <Eigen/Dense>
#include <vector>

#include "altspec/common.hpp"

namespace altspec {

/// Dense real symmetric matrix. Symmetry is structural: all mutation goes
/// through set(i, j, v), which writes both triangles, so M(i,j) == M(j,i)
/// holds by construction.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int n) : mat_(Eigen::MatrixXd::Zero(n, n)) {
    if (n < 0) throw std::invalid_argument("SymMatrix: negative dimension");
  }

  static SymMatrix Zero(int n) { return SymMatrix(n); }
  static SymMatrix Identity(int n);
  static SymMatrix FromDiagonal(const Eigen::VectorXd& d);
  /// Builds from a dense matrix; rejects asymmetry beyond symTol.
  static SymMatrix FromDense(const Eigen::MatrixXd& m, double symTol = 1e-12);

  int dim() const { return static_cast<int>(mat_.rows()); }
  double operator()(int i, int j) const { return mat_(i, j); }
  void set(int i, int j, double v) {
    mat_(i, j) = v;
    mat_(j, i) = v;
  }
  const Eigen::MatrixXd& dense() const { return mat_; }
  bool allFinite() const { return mat_.allFinite(); }
  double maxAbs() const { return dim() == 0 ? 0.0 : mat_.cwiseAbs().maxCoeff(); }

  SymMatrix operator+(const SymMatrix& o) const { return wrap(mat_ + o.mat_); }
  SymMatrix operator-(const SymMatrix& o) const { return wrap(mat_ - o.mat_); }
  SymMatrix operator-() const { return wrap(-mat_); }
  SymMatrix scaled(double s) const { return wrap(s * mat_); }

 private:
  static SymMatrix wrap(Eigen::MatrixXd m) {
    SymMatrix r;
    r.mat_ = std::move(m);
    return r;
  }
  Eigen::MatrixXd mat_;
};

inline SymMatrix operator*(double s, const SymMatrix& a) { return a.scaled(s); }

struct EigenDecomposition {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // orthonormal columns
};

/// Ordered partition of {0, ..., n-1} into k non-empty disjoint blocks.
/// Each block is kept as a sorted index list; blocks need not be contiguous
/// (the pencil module canonicalizes layout on ingestion).
class BlockPartition {
 public:
  BlockPartition(int n, std::vector<std::vector<int>> blocks);

  static BlockPartition singletons(int n);
  /// Consecutive blocks of the given sizes covering {0,...,sum-1}.
  static BlockPartition contiguous(const std::vector<int>& sizes);

  int n() const { return n_; }
  int k() const { return static_cast<int>(blocks_.size()); }
  const std::vector<int>& block(int i) const { return blocks_.at(i); }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }

  bool isContiguous() const;
  /// Permutation p with p[newIndex] = oldIndex that lays the blocks out
  /// contiguously in declared order.
  std::vector<int> canonicalPermutation() const;

  bool operator==(const BlockPartition& o) const {
    return n_ == o.n_ && blocks_ == o.blocks_;
  }

 private:
  int n_ = 0;
  std::vector<std::vector<int>> blocks_;
};

/// <A,B> = tr(A^T B), the full double sum over both triangles.
double inner_product(const SymMatrix& a, const SymMatrix& b);

/// Spectral decomposition A = Q diag(values) Q^T, values ascending.
EigenDecomposition eigen_sym(const SymMatrix& a);

/// max_j |lambda_j(A)|
double operator_norm(const SymMatrix& a);

double min_eigenvalue(const SymMatrix& a);

/// True iff lambda_min(A) >= -tol * (1 + ||A||_2).
bool psd_check(const SymMatrix& a, double tol = kDefaultTol);

/// Principal submatrix on the indices of block blockIndex.
SymMatrix extract_block(const SymMatrix& a, const BlockPartition& part, int blockIndex);

/// BS(X): blocks whose submatrix has an entry with magnitude > tol.
std::vector<int> block_support(const SymMatrix& x, const BlockPartition& part,
                               double tol = kDefaultTol);

/// True iff every entry outside the declared blocks has magnitude <= tol.
bool is_block_diagonal(const SymMatrix& a, const BlockPartition& part, double tol = 0.0);

}  // namespace altspec
