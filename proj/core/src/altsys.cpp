#include "altspec/altsys.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace altspec {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// Orthonormal range bases per block, with an explicit ambiguity band between
// the kernel and rank thresholds.
std::vector<Eigen::MatrixXd> block_range_bases(const SymMatrix& x, const BlockPartition& part,
                                               const Settings& st) {
  const double norm = 1.0 + operator_norm(x);
  const double rankThresh = st.tolRank * norm;
  const double zeroThresh = kKernelTol * norm;
  std::vector<Eigen::MatrixXd> bases;
  bases.reserve(static_cast<size_t>(part.k()));
  for (int b = 0; b < part.k(); ++b) {
    auto ed = eigen_sym(extract_block(x, part, b));
    int r = 0;
    for (int i = 0; i < ed.values.size(); ++i) {
      if (ed.values[i] >= rankThresh) {
        ++r;
      } else if (ed.values[i] >= zeroThresh) {
        throw IndeterminateError("rank ambiguity: block eigenvalue inside threshold band");
      }
    }
    bases.push_back(ed.vectors.rightCols(r));
  }
  return bases;
}

// svec of Q' A_b Q over the reduced coordinates of all blocks.
Eigen::VectorXd reduced_svec(const SymMatrix& a, const BlockPartition& part,
                             const std::vector<Eigen::MatrixXd>& bases, int dimS) {
  Eigen::VectorXd row(dimS);
  int at = 0;
  for (int b = 0; b < part.k(); ++b) {
    const Eigen::MatrixXd& q = bases[static_cast<size_t>(b)];
    const int r = static_cast<int>(q.cols());
    if (r == 0) continue;
    Eigen::MatrixXd g = q.transpose() * extract_block(a, part, b).dense() * q;
    for (int i = 0; i < r; ++i)
      for (int j = i; j < r; ++j)
        row[at++] = (i == j) ? g(i, i) : kSqrt2 * 0.5 * (g(i, j) + g(j, i));
  }
  return row;
}

// Least-squares projection of a block-diagonal X onto the affine equations
// <A_i,X> = 0 (i in [m]) and <A0,X> = -1.
SymMatrix project_onto_equalities(const Pencil& p, const SymMatrix& x) {
  Vectorizer vec(p.part());
  Eigen::MatrixXd m(p.m() + 1, vec.dim());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(p.m() + 1);
  for (int i = 0; i < p.m(); ++i) m.row(i) = vec.toVec(p.ai(i)).transpose();
  m.row(p.m()) = vec.toVec(p.a0()).transpose();
  rhs[p.m()] = -1.0;
  Eigen::VectorXd v = vec.toVec(x);
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(m);
  v -= cod.solve(m * v - rhs);
  return vec.toMat(v);
}

// Gauss-Newton refinement of a nearly feasible low-rank point onto the
// equations <A_i,X> = 0, <A0,X> = -1 exactly, staying psd by writing
// X = Y Y' with block-structured Y. Returns nothing when the seed's rank
// guess cannot be driven to feasibility.
std::optional<SymMatrix> refine_member(const Pencil& p, const SymMatrix& seed) {
  const BlockPartition& part = p.part();
  const double norm = operator_norm(seed);
  if (!(norm > 0.0) || !std::isfinite(norm)) return std::nullopt;

  std::vector<Eigen::MatrixXd> ys(static_cast<size_t>(part.k()));
  int nUnk = 0;
  for (int b = 0; b < part.k(); ++b) {
    auto ed = eigen_sym(extract_block(seed, part, b));
    int r = 0;
    for (int i = 0; i < ed.values.size(); ++i)
      if (ed.values[i] > 1e-3 * norm) ++r;
    Eigen::MatrixXd y(ed.values.size(), r);
    for (int c = 0; c < r; ++c) {
      const int src = static_cast<int>(ed.values.size()) - r + c;
      y.col(c) = ed.vectors.col(src) * std::sqrt(std::max(ed.values[src], 1e-12));
    }
    ys[static_cast<size_t>(b)] = std::move(y);
    nUnk += static_cast<int>(ys[static_cast<size_t>(b)].size());
  }
  if (nUnk == 0) return std::nullopt;

  auto assemble = [&]() {
    SymMatrix x(p.n());
    for (int b = 0; b < part.k(); ++b) {
      const Eigen::MatrixXd& y = ys[static_cast<size_t>(b)];
      if (y.cols() == 0) continue;
      Eigen::MatrixXd rec = y * y.transpose();
      const auto& idx = part.block(b);
      for (size_t i = 0; i < idx.size(); ++i)
        for (size_t j = i; j < idx.size(); ++j)
          x.set(idx[i], idx[j], rec(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
    return x;
  };

  const int me = p.m() + 1;
  auto residual = [&](const SymMatrix& x) {
    Eigen::VectorXd r(me);
    for (int i = 0; i < p.m(); ++i) r[i] = inner_product(p.ai(i), x);
    r[p.m()] = inner_product(p.a0(), x) + 1.0;
    return r;
  };

  for (int it = 0; it < 80; ++it) {
    SymMatrix x = assemble();
    Eigen::VectorXd r = residual(x);
    if (r.lpNorm<Eigen::Infinity>() <= 1e-13) return x;

    Eigen::MatrixXd jac(me, nUnk);
    for (int i = 0; i < me; ++i) {
      const SymMatrix& a = (i < p.m()) ? p.ai(i) : p.a0();
      int at = 0;
      for (int b = 0; b < part.k(); ++b) {
        const Eigen::MatrixXd& y = ys[static_cast<size_t>(b)];
        if (y.cols() == 0) continue;
        Eigen::MatrixXd g = 2.0 * extract_block(a, part, b).dense() * y;
        for (Eigen::Index c = 0; c < g.cols(); ++c)
          for (Eigen::Index rw = 0; rw < g.rows(); ++rw) jac(i, at++) = g(rw, c);
      }
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(jac);
    Eigen::VectorXd step = cod.solve(-r);
    int at = 0;
    for (int b = 0; b < part.k(); ++b) {
      Eigen::MatrixXd& y = ys[static_cast<size_t>(b)];
      for (Eigen::Index c = 0; c < y.cols(); ++c)
        for (Eigen::Index rw = 0; rw < y.rows(); ++rw) y(rw, c) += step[at++];
    }
  }
  SymMatrix x = assemble();
  if (residual(x).lpNorm<Eigen::Infinity>() <= 1e-10) return x;
  return std::nullopt;
}

}  // namespace

MembershipResiduals membership_residual(const Pencil& p, const SymMatrix& x) {
  if (x.dim() != p.n()) throw std::invalid_argument("membership_residual: dimension mismatch");
  MembershipResiduals r;
  for (int i = 0; i < p.m(); ++i)
    r.maxEq = std::max(r.maxEq, std::abs(inner_product(p.ai(i), x)));
  r.affine = std::abs(inner_product(p.a0(), x) + 1.0);
  r.minEig = min_eigenvalue(x);
  return r;
}

AltPoint make_alt_point(const Pencil& p, const SymMatrix& x, double supportTol) {
  AltPoint pt;
  pt.X = x;
  auto res = membership_residual(p, x);
  pt.maxEqResidual = res.maxEq;
  pt.affineResidual = res.affine;
  pt.minEigenvalue = res.minEig;
  pt.support = block_support(x, p.part(), supportTol * (1.0 + x.maxAbs()));
  return pt;
}

FeasibilityStatus classify(const Pencil& p, const Settings& settings) {
  FeasibilityStatus st;
  if (p.isEmpty()) {
    st.verdict = Verdict::WeaklyFeasible;
    st.etaOpt = 0.0;
    st.epsilonWitnesses = {{1e-2, Eigen::VectorXd::Zero(p.m())},
                           {1e-4, Eigen::VectorXd::Zero(p.m())}};
    return st;
  }

  AltPairResult pair;
  try {
    pair = solve_alt_pair(p, settings);
  } catch (const SolverFailure& f) {
    // Tangentially degenerate instances leave the splitting method with a
    // slow tail; rescue the verdict when the best iterate rounds to an
    // exact alternative member.
    const double scale = -inner_product(p.a0(), f.best.X);
    if (scale > settings.infeasThreshold) {
      auto exact = refine_member(p, f.best.X.scaled(1.0 / scale));
      if (exact) {
        st.verdict = Verdict::WeaklyInfeasible;
        st.etaOpt = -f.best.objective;
        st.certificate = make_alt_point(p, *exact, settings.tolFeas);
        return st;
      }
    }
    throw IndeterminateError(std::string("classify: ") + f.what());
  }
  st.etaOpt = pair.etaOpt;

  if (pair.etaOpt > settings.infeasThreshold) {
    st.verdict = Verdict::WeaklyInfeasible;
    double scale = -inner_product(p.a0(), pair.X);
    if (scale <= 0.0) throw IndeterminateError("classify: degenerate certificate scaling");
    SymMatrix x = pair.X.scaled(1.0 / scale);
    x = project_onto_equalities(p, x);
    st.certificate = make_alt_point(p, x, settings.tolFeas);
    return st;
  }
  if (pair.etaOpt >= settings.feasBandLow)
    throw IndeterminateError("classify: optimal alternative value inside the dead band");

  st.verdict = Verdict::WeaklyFeasible;
  const Eigen::VectorXd& y = pair.yWitness;
  const double lamMin = min_eigenvalue(evaluate(p, y));
  for (double eps : {1e-2, 1e-4})
    if (lamMin >= -eps) st.epsilonWitnesses.emplace_back(eps, y);
  if (st.epsilonWitnesses.empty())
    throw IndeterminateError("classify: weakly feasible but no epsilon witness extracted");
  return st;
}

ExtremeTest is_extreme(const Pencil& p, const AltPoint& x, const Settings& settings) {
  auto res = membership_residual(p, x.X);
  const double scale = 1.0 + x.X.maxAbs();
  if (res.maxEq > 1e-5 * scale || res.affine > 1e-5 * scale ||
      res.minEig < -1e-6 * scale)
    throw std::invalid_argument("is_extreme: point fails S(Sigma) membership");

  auto bases = block_range_bases(x.X, p.part(), settings);
  int dimS = 0;
  for (const auto& q : bases) {
    const int r = static_cast<int>(q.cols());
    dimS += r * (r + 1) / 2;
  }
  if (dimS == 0) return {true, std::nullopt};

  Eigen::MatrixXd t(p.m() + 1, dimS);
  t.row(0) = reduced_svec(p.a0(), p.part(), bases, dimS).transpose();
  for (int i = 0; i < p.m(); ++i)
    t.row(i + 1) = reduced_svec(p.ai(i), p.part(), bases, dimS).transpose();

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(t, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv[0] : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv[i] >= 1e-8 * smax) {
      ++rank;
    } else if (sv[i] >= kKernelTol * smax) {
      throw IndeterminateError("is_extreme: singular value inside the kernel threshold band");
    }
  }
  if (rank == dimS) return {true, std::nullopt};

  // Any kernel element is a feasible direction within the face of X.
  Eigen::VectorXd s = svd.matrixV().col(dimS - 1);
  SymMatrix w(p.n());
  int at = 0;
  for (int b = 0; b < p.part().k(); ++b) {
    const Eigen::MatrixXd& q = bases[static_cast<size_t>(b)];
    const int r = static_cast<int>(q.cols());
    if (r == 0) continue;
    Eigen::MatrixXd sb(r, r);
    for (int i = 0; i < r; ++i)
      for (int j = i; j < r; ++j) {
        const double v = s[at++];
        sb(i, j) = sb(j, i) = (i == j) ? v : v / kSqrt2;
      }
    Eigen::MatrixXd rec = q * sb * q.transpose();
    const auto& idx = p.part().block(b);
    for (size_t i = 0; i < idx.size(); ++i)
      for (size_t j = i; j < idx.size(); ++j)
        w.set(idx[i], idx[j], 0.5 * (rec(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +
                                     rec(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i))));
  }
  return {false, w};
}

AltPoint purify(const Pencil& p, const AltPoint& start, const Settings& settings) {
  AltPoint cur = make_alt_point(p, start.X, settings.tolFeas);
  const int maxSteps = p.n() + 1;
  for (int step = 0; step < maxSteps; ++step) {
    ExtremeTest test = is_extreme(p, cur, settings);
    if (test.extreme) return cur;
    const SymMatrix& w = *test.direction;

    // Line search in the range coordinates of the current point:
    // X + t W >= 0  <=>  I + t M >= 0 on the face, M = L^{-1/2} Q'WQ L^{-1/2}.
    auto bases = block_range_bases(cur.X, p.part(), settings);
    double mMin = 0.0, mMax = 0.0;
    std::vector<Eigen::MatrixXd> faceX, faceM;
    for (int b = 0; b < p.part().k(); ++b) {
      const Eigen::MatrixXd& q = bases[static_cast<size_t>(b)];
      const int r = static_cast<int>(q.cols());
      faceX.emplace_back();
      faceM.emplace_back();
      if (r == 0) continue;
      Eigen::MatrixXd xb = q.transpose() * extract_block(cur.X, p.part(), b).dense() * q;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esx(xb);
      Eigen::VectorXd lam = esx.eigenvalues().cwiseMax(1e-300);
      Eigen::MatrixXd isqrt =
          esx.eigenvectors() * lam.cwiseSqrt().cwiseInverse().asDiagonal() * esx.eigenvectors().transpose();
      Eigen::MatrixXd sqrtx =
          esx.eigenvectors() * lam.cwiseSqrt().asDiagonal() * esx.eigenvectors().transpose();
      Eigen::MatrixXd wb = q.transpose() * extract_block(w, p.part(), b).dense() * q;
      Eigen::MatrixXd mb = isqrt * wb * isqrt;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esm(0.5 * (mb + mb.transpose()));
      mMin = std::min(mMin, esm.eigenvalues().minCoeff());
      mMax = std::max(mMax, esm.eigenvalues().maxCoeff());
      faceX.back() = sqrtx;
      faceM.back() = 0.5 * (mb + mb.transpose());
    }
    const double inf = std::numeric_limits<double>::infinity();
    const double tPlus = mMin < -1e-12 ? -1.0 / mMin : inf;
    const double tMinus = mMax > 1e-12 ? 1.0 / mMax : inf;
    if (std::isinf(tPlus) && std::isinf(tMinus))
      throw IndeterminateError("purify: line search stalled (vanishing direction)");
    double t;
    if (std::isinf(tPlus)) {
      t = -tMinus;
    } else if (std::isinf(tMinus)) {
      t = tPlus;
    } else {
      t = tPlus >= tMinus ? tPlus : -tMinus;
    }

    SymMatrix next(p.n());
    for (int b = 0; b < p.part().k(); ++b) {
      const Eigen::MatrixXd& q = bases[static_cast<size_t>(b)];
      const int r = static_cast<int>(q.cols());
      if (r == 0) continue;
      Eigen::MatrixXd inner =
          faceX[static_cast<size_t>(b)] *
          (Eigen::MatrixXd::Identity(r, r) + t * faceM[static_cast<size_t>(b)]) *
          faceX[static_cast<size_t>(b)];
      Eigen::MatrixXd rec = q * inner * q.transpose();
      const auto& idx = p.part().block(b);
      for (size_t i = 0; i < idx.size(); ++i)
        for (size_t j = i; j < idx.size(); ++j)
          next.set(idx[i], idx[j], 0.5 * (rec(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +
                                          rec(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i))));
    }
    cur = make_alt_point(p, next, settings.tolFeas);
  }
  throw IndeterminateError("purify: did not reach an extreme point within the rank bound");
}

FeasibilityStatus restricted_alt(const Pencil& p, const std::vector<int>& blockSet,
                                 const Settings& settings) {
  Pencil sub = subsystem(p, blockSet);
  FeasibilityStatus st = classify(sub, settings);
  if (st.certificate) {
    std::vector<int> sorted = blockSet;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<int> indices;
    for (int b : sorted) {
      const auto& blk = p.part().block(b);
      indices.insert(indices.end(), blk.begin(), blk.end());
    }
    const SymMatrix& xs = st.certificate->X;
    SymMatrix x(p.n());
    for (size_t i = 0; i < indices.size(); ++i)
      for (size_t j = i; j < indices.size(); ++j)
        x.set(indices[i], indices[j], xs(static_cast<int>(i), static_cast<int>(j)));
    st.certificate = make_alt_point(p, x, settings.tolFeas);
  }
  return st;
}

std::optional<SymMatrix> strict_kernel_point(const Pencil& p, const Settings& settings) {
  if (p.isEmpty()) return std::nullopt;
  // max lambda s.t. <A_i, X' + lambda I> = 0, tr(X') + n*lambda = 1, X' >= 0,
  // with lambda free (split into lambda+ - lambda-). Xbar = X' + lambda I.
  ConicProblem prob{p.part(), SymMatrix(p.n()), Eigen::VectorXd::Zero(2), {}};
  prob.c << -1.0, 1.0;  // minimize -lambda
  const int n = p.n();
  for (int i = 0; i < p.m(); ++i) {
    Eigen::VectorXd g(2);
    const double tr = p.ai(i).dense().trace();
    g << tr, -tr;
    prob.constraints.push_back({p.ai(i), g, 0.0});
  }
  {
    Eigen::VectorXd g(2);
    g << static_cast<double>(n), -static_cast<double>(n);
    prob.constraints.push_back({SymMatrix::Identity(n), g, 1.0});
  }
  ConicSolution sol = solve(prob, settings);
  // trace vanishing on the whole constraint kernel makes the normalized
  // problem infeasible, so no strictly positive kernel point exists
  if (sol.status == SolveStatus::PrimalInfeasible) return std::nullopt;
  if (sol.status != SolveStatus::Optimal)
    throw SolverFailure("strict_kernel_point: solver stalled", std::move(sol));
  const double lambda = sol.u[0] - sol.u[1];
  if (lambda <= 1e-6) return std::nullopt;
  SymMatrix xbar = sol.X;
  for (int i = 0; i < n; ++i) xbar.set(i, i, xbar(i, i) + lambda);
  return xbar;
}

std::vector<FeasibilityStatus> check_assumption_nontrivial(const Pencil& p,
                                                           const Settings& settings) {
  std::vector<FeasibilityStatus> out;
  out.reserve(static_cast<size_t>(p.k()));
  for (int b = 0; b < p.k(); ++b) out.push_back(classify(subsystem(p, {b}), settings));
  return out;
}

}  // namespace altspec
