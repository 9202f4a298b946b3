#include "altspec/pencil.hpp"

#include <algorithm>
#include <numeric>

namespace altspec {

namespace {

SymMatrix permute(const SymMatrix& a, const std::vector<int>& perm) {
  // perm[newIndex] = oldIndex
  const int n = a.dim();
  SymMatrix r(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) r.set(i, j, a(perm[static_cast<size_t>(i)],
                                               perm[static_cast<size_t>(j)]));
  return r;
}

}  // namespace

Pencil::Pencil(SymMatrix a0, std::vector<SymMatrix> a, BlockPartition part) {
  n_ = part.n();
  if (a0.dim() != n_) throw std::invalid_argument("Pencil: A0 dimension mismatch");
  for (const auto& ai : a)
    if (ai.dim() != n_) throw std::invalid_argument("Pencil: A_i dimension mismatch");
  if (!a0.allFinite()) throw std::invalid_argument("Pencil: non-finite entries in A0");
  if (!is_block_diagonal(a0, part, 0.0))
    throw std::invalid_argument("Pencil: A0 has entries outside the declared blocks");
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i].allFinite()) throw std::invalid_argument("Pencil: non-finite entries in A_i");
    if (!is_block_diagonal(a[i], part, 0.0))
      throw std::invalid_argument("Pencil: A_i has entries outside the declared blocks");
  }

  if (part.isContiguous()) {
    origIndex_.resize(static_cast<size_t>(n_));
    std::iota(origIndex_.begin(), origIndex_.end(), 0);
    a0_ = std::move(a0);
    a_ = std::move(a);
    part_ = std::move(part);
    return;
  }

  origIndex_ = part.canonicalPermutation();
  a0_ = permute(a0, origIndex_);
  a_.reserve(a.size());
  for (const auto& ai : a) a_.push_back(permute(ai, origIndex_));
  std::vector<int> sizes;
  sizes.reserve(static_cast<size_t>(part.k()));
  for (int b = 0; b < part.k(); ++b)
    sizes.push_back(static_cast<int>(part.block(b).size()));
  part_ = BlockPartition::contiguous(sizes);
}

Pencil Pencil::empty(int m) {
  Pencil p;
  p.n_ = 0;
  p.a0_ = SymMatrix(0);
  p.a_.assign(static_cast<size_t>(m), SymMatrix(0));
  return p;
}

const BlockPartition& Pencil::part() const {
  if (!part_) throw std::logic_error("Pencil: empty pencil has no partition");
  return *part_;
}

SymMatrix Pencil::toOriginal(const SymMatrix& x) const {
  if (x.dim() != n_) throw std::invalid_argument("toOriginal: dimension mismatch");
  SymMatrix r(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j)
      r.set(origIndex_[static_cast<size_t>(i)], origIndex_[static_cast<size_t>(j)], x(i, j));
  return r;
}

SymMatrix evaluate(const Pencil& p, const Eigen::VectorXd& y) {
  if (y.size() != p.m()) throw std::invalid_argument("evaluate: y length mismatch");
  SymMatrix r = p.a0();
  for (int i = 0; i < p.m(); ++i) r = r - y[i] * p.ai(i);
  return r;
}

Pencil subsystem(const Pencil& p, const std::vector<int>& blockSet) {
  if (p.isEmpty()) {
    if (!blockSet.empty()) throw std::invalid_argument("subsystem: block index out of range");
    return Pencil::empty(p.m());
  }
  for (int b : blockSet)
    if (b < 0 || b >= p.k()) throw std::invalid_argument("subsystem: block index out of range");
  if (blockSet.empty()) return Pencil::empty(p.m());

  std::vector<int> sorted = blockSet;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  std::vector<int> indices;
  std::vector<int> sizes;
  for (int b : sorted) {
    const auto& blk = p.part().block(b);
    indices.insert(indices.end(), blk.begin(), blk.end());
    sizes.push_back(static_cast<int>(blk.size()));
  }

  auto restrict = [&](const SymMatrix& a) {
    SymMatrix r(static_cast<int>(indices.size()));
    for (size_t i = 0; i < indices.size(); ++i)
      for (size_t j = i; j < indices.size(); ++j)
        r.set(static_cast<int>(i), static_cast<int>(j), a(indices[i], indices[j]));
    return r;
  };

  std::vector<SymMatrix> as;
  as.reserve(static_cast<size_t>(p.m()));
  for (int i = 0; i < p.m(); ++i) as.push_back(restrict(p.ai(i)));
  return Pencil(restrict(p.a0()), std::move(as), BlockPartition::contiguous(sizes));
}

Pencil build_halfplane(double alpha, double beta, double gamma) {
  SymMatrix a0(1), a1(1), a2(1);
  a0.set(0, 0, gamma);
  a1.set(0, 0, -alpha);
  a2.set(0, 0, -beta);
  return Pencil(a0, {a1, a2}, BlockPartition::contiguous({1}));
}

Pencil build_disc(double r, const Eigen::Vector2d& c) {
  if (!(r > 0)) throw std::invalid_argument("build_disc: radius must be positive");
  // K(r,c;y) = [[r + c1 - y1, y2 - c2], [y2 - c2, r - c1 + y1]]
  SymMatrix a0(2), a1(2), a2(2);
  a0.set(0, 0, r + c[0]);
  a0.set(0, 1, -c[1]);
  a0.set(1, 1, r - c[0]);
  a1.set(0, 0, 1.0);
  a1.set(1, 1, -1.0);
  a2.set(0, 1, -1.0);
  return Pencil(a0, {a1, a2}, BlockPartition::contiguous({2}));
}

Pencil concat_blocks(const std::vector<Pencil>& parts) {
  if (parts.empty()) throw std::invalid_argument("concat_blocks: no pencils given");
  const int m = parts.front().m();
  int n = 0;
  std::vector<int> sizes;
  for (const auto& p : parts) {
    if (p.m() != m) throw std::invalid_argument("concat_blocks: mismatched variable counts");
    n += p.n();
    for (int b = 0; b < p.k(); ++b)
      sizes.push_back(static_cast<int>(p.part().block(b).size()));
  }

  auto assemble = [&](auto&& pick) {
    SymMatrix r(n);
    int at = 0;
    for (const auto& p : parts) {
      const SymMatrix& blk = pick(p);
      for (int i = 0; i < blk.dim(); ++i)
        for (int j = i; j < blk.dim(); ++j) r.set(at + i, at + j, blk(i, j));
      at += p.n();
    }
    return r;
  };

  SymMatrix a0 = assemble([](const Pencil& p) -> const SymMatrix& { return p.a0(); });
  std::vector<SymMatrix> as;
  as.reserve(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i)
    as.push_back(assemble([i](const Pencil& p) -> const SymMatrix& { return p.ai(i); }));
  return Pencil(a0, std::move(as), BlockPartition::contiguous(sizes));
}

}  // namespace altspec
