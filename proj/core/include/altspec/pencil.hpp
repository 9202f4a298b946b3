#pragma once

#include <optional>
#include <vector>

#include "altspec/symcore.hpp"

namespace altspec {

/// Linear matrix pencil A(y) = A0 - sum_i y_i A_i with a declared block
/// partition. Every matrix must be exactly block-diagonal with respect to
/// the declared partition; construction rejects (never projects) off-block
/// entries. On ingestion the indices are permuted so each block is
/// contiguous; originalIndex() maps the internal layout back.
class Pencil {
 public:
  Pencil(SymMatrix a0, std::vector<SymMatrix> a, BlockPartition part);

  /// The distinguished 0-dimensional pencil of the empty block subsystem,
  /// defined weakly feasible. m is kept so that evaluate() stays total.
  static Pencil empty(int m);

  int n() const { return n_; }
  int m() const { return static_cast<int>(a_.size()); }
  int k() const { return part_ ? part_->k() : 0; }
  bool isEmpty() const { return n_ == 0; }

  const SymMatrix& a0() const { return a0_; }
  const SymMatrix& ai(int i) const { return a_.at(static_cast<size_t>(i)); }
  const std::vector<SymMatrix>& a() const { return a_; }
  const BlockPartition& part() const;

  /// internal (canonical, contiguous) index -> index in the ingested layout
  const std::vector<int>& originalIndex() const { return origIndex_; }
  /// Undo the canonicalization permutation on a matrix in internal layout.
  SymMatrix toOriginal(const SymMatrix& x) const;

 private:
  Pencil() = default;
  int n_ = 0;
  SymMatrix a0_;
  std::vector<SymMatrix> a_;
  std::optional<BlockPartition> part_;
  std::vector<int> origIndex_;
};

/// A0 - sum_i y_i A_i
SymMatrix evaluate(const Pencil& p, const Eigen::VectorXd& y);

/// Restriction of the pencil to the blocks in I (sorted, 0-based).
/// I = {} yields the empty pencil.
Pencil subsystem(const Pencil& p, const std::vector<int>& blockSet);

/// 1x1 pencil encoding the halfplane alpha*y1 + beta*y2 + gamma >= 0 over
/// y in R^2.
Pencil build_halfplane(double alpha, double beta, double gamma);

/// 2x2 pencil for the disc ||y - c||_2 <= r, smallest LMI representation:
/// [[r + c1 - y1, y2 - c2], [y2 - c2, r - c1 + y1]].
Pencil build_disc(double r, const Eigen::Vector2d& c);

/// Block-diagonal concatenation over a common y-space.
Pencil concat_blocks(const std::vector<Pencil>& parts);

}  // namespace altspec
