#pragma once

// Shared fixtures and independent oracles used across the test binaries.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "altspec/recovery.hpp"

namespace testutil {

using altspec::BlockPartition;
using altspec::Pencil;
using altspec::SymMatrix;

// Decomposable linear fixture: three polyhedra y1 <= 0, y1 + y2 >= 1,
// {-y1 + y2 <= -1, y1 >= 2} with blocks {0},{1},{2,3}.
inline Pencil dl_fixture() { return altspec::gen_blocklinear(); }

// Its deformation with the off-diagonal eps entry in the constant matrix.
inline Pencil deformed_fixture(double eps) { return altspec::gen_blocksdp(eps); }

inline SymMatrix diag_matrix(const std::vector<double>& d) {
  SymMatrix a(static_cast<int>(d.size()));
  for (size_t i = 0; i < d.size(); ++i) a.set(static_cast<int>(i), static_cast<int>(i), d[i]);
  return a;
}

// Members of the deformed fixture's alternative set in the
// (X44, X34) parametrization; valid for every eps with X34 = 0.
inline SymMatrix member_left() { return diag_matrix({1.0, 0.5, 0.5, 0.0}); }
inline SymMatrix member_right() { return diag_matrix({0.5, 0.0, 0.0, 0.5}); }

inline SymMatrix random_sym(int n, std::mt19937& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  SymMatrix a(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) a.set(i, j, gauss(rng));
  return a;
}

inline SymMatrix random_block_diag(const BlockPartition& part, std::mt19937& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  SymMatrix a(part.n());
  for (int b = 0; b < part.k(); ++b) {
    const auto& idx = part.block(b);
    for (size_t i = 0; i < idx.size(); ++i)
      for (size_t j = i; j < idx.size(); ++j) a.set(idx[i], idx[j], gauss(rng));
  }
  return a;
}

inline SymMatrix random_psd_block_diag(const BlockPartition& part, std::mt19937& rng) {
  SymMatrix g = random_block_diag(part, rng);
  SymMatrix a(part.n());
  for (int b = 0; b < part.k(); ++b) {
    const auto& idx = part.block(b);
    Eigen::MatrixXd gb(idx.size(), idx.size());
    for (size_t i = 0; i < idx.size(); ++i)
      for (size_t j = 0; j < idx.size(); ++j) gb(i, j) = g(idx[i], idx[j]);
    Eigen::MatrixXd psd = gb * gb.transpose();
    for (size_t i = 0; i < idx.size(); ++i)
      for (size_t j = i; j < idx.size(); ++j) a.set(idx[i], idx[j], psd(i, j));
  }
  return a;
}

// ---------------------------------------------------------------------------
// LP oracles over P = { x >= 0 : M x = q }, used for diagonal specializations.

// All basic feasible solutions (vertices): supports with linearly
// independent columns solving the equations.
inline std::vector<Eigen::VectorXd> lp_vertices(const Eigen::MatrixXd& M,
                                                const Eigen::VectorXd& q, double tol = 1e-9) {
  const int n = static_cast<int>(M.cols());
  std::vector<Eigen::VectorXd> verts;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> J;
    for (int j = 0; j < n; ++j)
      if (mask & (1u << j)) J.push_back(j);
    if (static_cast<int>(J.size()) > static_cast<int>(M.rows())) continue;
    if (J.empty()) {
      if (q.lpNorm<Eigen::Infinity>() <= tol) verts.push_back(Eigen::VectorXd::Zero(n));
      continue;
    }
    Eigen::MatrixXd MJ(M.rows(), J.size());
    for (size_t c = 0; c < J.size(); ++c) MJ.col(c) = M.col(J[c]);
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(MJ);
    if (cod.rank() != static_cast<Eigen::Index>(J.size())) continue;
    Eigen::VectorXd xJ = cod.solve(q);
    if ((MJ * xJ - q).lpNorm<Eigen::Infinity>() > tol) continue;
    if (J.size() > 0 && xJ.minCoeff() < -tol) continue;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (size_t c = 0; c < J.size(); ++c) x[J[c]] = std::max(xJ[c], 0.0);
    bool dup = false;
    for (const auto& v : verts)
      if ((v - x).lpNorm<Eigen::Infinity>() < 1e-7) dup = true;
    if (!dup) verts.push_back(std::move(x));
  }
  return verts;
}

// Optimal value of min c'x over P, assuming the optimum is attained at a
// vertex (pointed feasible region, bounded objective).
inline double lp_min_value(const Eigen::MatrixXd& M, const Eigen::VectorXd& q,
                           const Eigen::VectorXd& c) {
  auto verts = lp_vertices(M, q);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : verts) best = std::min(best, c.dot(v));
  return best;
}

// Alternative polyhedron of a diagonal pencil with singleton blocks:
// { x >= 0 : <A_i,X> = 0, <A_0,X> = -1 } with X = diag(x).
inline void alt_polyhedron(const Pencil& p, Eigen::MatrixXd* M, Eigen::VectorXd* q) {
  const int n = p.n();
  M->resize(p.m() + 1, n);
  q->resize(p.m() + 1);
  for (int i = 0; i < p.m(); ++i) {
    for (int j = 0; j < n; ++j) (*M)(i, j) = p.ai(i)(j, j);
    (*q)[i] = 0.0;
  }
  for (int j = 0; j < n; ++j) (*M)(p.m(), j) = p.a0()(j, j);
  (*q)[p.m()] = -1.0;
}

inline std::vector<int> diag_support(const SymMatrix& x, double tol = 1e-6) {
  std::vector<int> s;
  for (int i = 0; i < x.dim(); ++i)
    if (std::abs(x(i, i)) > tol) s.push_back(i);
  return s;
}

inline std::vector<int> vec_support(const Eigen::VectorXd& v, double tol = 1e-6) {
  std::vector<int> s;
  for (int i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > tol) s.push_back(i);
  return s;
}

}  // namespace testutil
