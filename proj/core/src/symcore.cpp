#include "altspec/symcore.hpp"

#include <algorithm>
#include <cmath>

namespace altspec {

SymMatrix SymMatrix::Identity(int n) {
  SymMatrix r(n);
  for (int i = 0; i < n; ++i) r.set(i, i, 1.0);
  return r;
}

SymMatrix SymMatrix::FromDiagonal(const Eigen::VectorXd& d) {
  SymMatrix r(static_cast<int>(d.size()));
  for (int i = 0; i < d.size(); ++i) r.set(i, i, d[i]);
  return r;
}

SymMatrix SymMatrix::FromDense(const Eigen::MatrixXd& m, double symTol) {
  if (m.rows() != m.cols()) throw std::invalid_argument("FromDense: not square");
  if (m.size() > 0 && (m - m.transpose()).cwiseAbs().maxCoeff() > symTol)
    throw std::invalid_argument("FromDense: matrix is not symmetric");
  SymMatrix r(static_cast<int>(m.rows()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = i; j < m.cols(); ++j) r.set(i, j, 0.5 * (m(i, j) + m(j, i)));
  return r;
}

BlockPartition::BlockPartition(int n, std::vector<std::vector<int>> blocks)
    : n_(n), blocks_(std::move(blocks)) {
  if (n < 1) throw std::invalid_argument("BlockPartition: n must be >= 1");
  if (blocks_.empty()) throw std::invalid_argument("BlockPartition: k must be >= 1");
  std::vector<char> seen(static_cast<size_t>(n), 0);
  int covered = 0;
  for (auto& b : blocks_) {
    if (b.empty()) throw std::invalid_argument("BlockPartition: empty block");
    if (!std::is_sorted(b.begin(), b.end()))
      throw std::invalid_argument("BlockPartition: block indices must be ascending");
    for (int idx : b) {
      if (idx < 0 || idx >= n) throw std::invalid_argument("BlockPartition: index out of range");
      if (seen[static_cast<size_t>(idx)])
        throw std::invalid_argument("BlockPartition: blocks are not disjoint");
      seen[static_cast<size_t>(idx)] = 1;
      ++covered;
    }
  }
  if (covered != n) throw std::invalid_argument("BlockPartition: blocks do not cover [n]");
}

BlockPartition BlockPartition::singletons(int n) {
  std::vector<std::vector<int>> b;
  b.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) b.push_back({i});
  return BlockPartition(n, std::move(b));
}

BlockPartition BlockPartition::contiguous(const std::vector<int>& sizes) {
  std::vector<std::vector<int>> b;
  int at = 0;
  for (int s : sizes) {
    std::vector<int> blk;
    for (int j = 0; j < s; ++j) blk.push_back(at++);
    b.push_back(std::move(blk));
  }
  return BlockPartition(at, std::move(b));
}

bool BlockPartition::isContiguous() const {
  int at = 0;
  for (const auto& b : blocks_)
    for (int idx : b)
      if (idx != at++) return false;
  return true;
}

std::vector<int> BlockPartition::canonicalPermutation() const {
  std::vector<int> perm;
  perm.reserve(static_cast<size_t>(n_));
  for (const auto& b : blocks_) perm.insert(perm.end(), b.begin(), b.end());
  return perm;
}

double inner_product(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("inner_product: dimension mismatch");
  return a.dense().cwiseProduct(b.dense()).sum();
}

EigenDecomposition eigen_sym(const SymMatrix& a) {
  if (!a.allFinite()) throw std::invalid_argument("eigen_sym: non-finite entries");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.dense());
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigen_sym: eigensolver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

double operator_norm(const SymMatrix& a) {
  if (a.dim() == 0) return 0.0;
  auto ed = eigen_sym(a);
  return ed.values.cwiseAbs().maxCoeff();
}

double min_eigenvalue(const SymMatrix& a) {
  if (a.dim() == 0) return 0.0;
  return eigen_sym(a).values[0];
}

bool psd_check(const SymMatrix& a, double tol) {
  if (a.dim() == 0) return true;
  auto ed = eigen_sym(a);
  double norm = ed.values.cwiseAbs().maxCoeff();
  return ed.values[0] >= -tol * (1.0 + norm);
}

SymMatrix extract_block(const SymMatrix& a, const BlockPartition& part, int blockIndex) {
  if (a.dim() != part.n()) throw std::invalid_argument("extract_block: dimension mismatch");
  if (blockIndex < 0 || blockIndex >= part.k())
    throw std::invalid_argument("extract_block: block index out of range");
  const auto& idx = part.block(blockIndex);
  SymMatrix r(static_cast<int>(idx.size()));
  for (size_t i = 0; i < idx.size(); ++i)
    for (size_t j = i; j < idx.size(); ++j)
      r.set(static_cast<int>(i), static_cast<int>(j), a(idx[i], idx[j]));
  return r;
}

std::vector<int> block_support(const SymMatrix& x, const BlockPartition& part, double tol) {
  if (x.dim() != part.n()) throw std::invalid_argument("block_support: dimension mismatch");
  std::vector<int> support;
  for (int b = 0; b < part.k(); ++b)
    if (extract_block(x, part, b).maxAbs() > tol) support.push_back(b);
  return support;
}

bool is_block_diagonal(const SymMatrix& a, const BlockPartition& part, double tol) {
  if (a.dim() != part.n()) throw std::invalid_argument("is_block_diagonal: dimension mismatch");
  std::vector<int> blockOf(static_cast<size_t>(part.n()));
  for (int b = 0; b < part.k(); ++b)
    for (int idx : part.block(b)) blockOf[static_cast<size_t>(idx)] = b;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = i + 1; j < a.dim(); ++j)
      if (blockOf[static_cast<size_t>(i)] != blockOf[static_cast<size_t>(j)] &&
          std::abs(a(i, j)) > tol)
        return false;
  return true;
}

}  // namespace altspec
