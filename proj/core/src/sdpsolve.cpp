#include "altspec/sdpsolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace altspec {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
}

Vectorizer::Vectorizer(const BlockPartition& part) : part_(part), dim_(0) {
  for (int b = 0; b < part.k(); ++b) {
    const int nb = static_cast<int>(part.block(b).size());
    dim_ += nb * (nb + 1) / 2;
  }
}

Eigen::VectorXd Vectorizer::toVec(const SymMatrix& a) const {
  if (a.dim() != part_.n()) throw std::invalid_argument("Vectorizer: dimension mismatch");
  Eigen::VectorXd v(dim_);
  int at = 0;
  for (int b = 0; b < part_.k(); ++b) {
    const auto& idx = part_.block(b);
    for (size_t i = 0; i < idx.size(); ++i)
      for (size_t j = i; j < idx.size(); ++j)
        v[at++] = (i == j) ? a(idx[i], idx[j]) : kSqrt2 * a(idx[i], idx[j]);
  }
  return v;
}

SymMatrix Vectorizer::toMat(const Eigen::VectorXd& v) const {
  if (v.size() != dim_) throw std::invalid_argument("Vectorizer: vector length mismatch");
  SymMatrix a(part_.n());
  int at = 0;
  for (int b = 0; b < part_.k(); ++b) {
    const auto& idx = part_.block(b);
    for (size_t i = 0; i < idx.size(); ++i)
      for (size_t j = i; j < idx.size(); ++j) {
        const double val = v[at++];
        a.set(idx[i], idx[j], (i == j) ? val : val / kSqrt2);
      }
  }
  return a;
}

namespace {

// Internal workspace for the splitting method. x = [svec(X); u].
class AdmmSolver {
 public:
  AdmmSolver(const ConicProblem& prob, const Settings& st)
      : prob_(prob), st_(st), vec_(prob.psdPart), D_(vec_.dim()), q_(prob.q()),
        N_(D_ + q_), mc_(static_cast<int>(prob.constraints.size())) {
    cvec_ = Eigen::VectorXd::Zero(N_);
    cvec_.head(D_) = vec_.toVec(prob.C);
    cvec_.tail(q_) = prob.c;
    A_ = Eigen::MatrixXd::Zero(mc_, N_);
    b_ = Eigen::VectorXd::Zero(mc_);
    for (int i = 0; i < mc_; ++i) {
      const auto& con = prob.constraints[static_cast<size_t>(i)];
      if (con.A.dim() != prob.psdPart.n() || con.g.size() != q_)
        throw std::invalid_argument("solve: constraint dimension mismatch");
      A_.row(i).head(D_) = vec_.toVec(con.A).transpose();
      A_.row(i).tail(q_) = con.g.transpose();
      b_[i] = con.b;
    }
    if (mc_ > 0) {
      AAt_ = A_ * A_.transpose();
      aatSolver_.compute(AAt_);
      codA_.compute(A_);
    }
    bScale_ = 1.0 + b_.norm();
    cScale_ = 1.0 + cvec_.norm();
  }

  ConicSolution run();

 private:
  Eigen::VectorXd projectAffine(const Eigen::VectorXd& v, Eigen::VectorXd* multiplier) {
    if (mc_ == 0) {
      if (multiplier) multiplier->resize(0);
      return v;
    }
    Eigen::VectorXd lambda = aatSolver_.solve(A_ * v - b_);
    if (multiplier) *multiplier = lambda;
    return v - A_.transpose() * lambda;
  }

  Eigen::VectorXd projectCone(const Eigen::VectorXd& v) const {
    Eigen::VectorXd r = v;
    SymMatrix m = vec_.toMat(v.head(D_));
    SymMatrix clipped(m.dim());
    for (int b = 0; b < prob_.psdPart.k(); ++b) {
      SymMatrix blk = extract_block(m, prob_.psdPart, b);
      auto ed = eigen_sym(blk);
      Eigen::VectorXd pos = ed.values.cwiseMax(0.0);
      Eigen::MatrixXd rec = ed.vectors * pos.asDiagonal() * ed.vectors.transpose();
      const auto& idx = prob_.psdPart.block(b);
      for (size_t i = 0; i < idx.size(); ++i)
        for (size_t j = i; j < idx.size(); ++j)
          clipped.set(idx[i], idx[j],
                      0.5 * (rec(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +
                             rec(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i))));
    }
    r.head(D_) = vec_.toVec(clipped);
    r.tail(q_) = v.tail(q_).cwiseMax(0.0);
    return r;
  }

  ConicSolution packOptimal(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                            const Eigen::VectorXd& s, double rp, double rd, double gap,
                            int iter) const {
    ConicSolution sol;
    sol.status = SolveStatus::Optimal;
    sol.X = vec_.toMat(x.head(D_));
    sol.u = x.tail(q_);
    sol.y = y;
    sol.Z = vec_.toMat(s.head(D_));
    sol.zu = s.tail(q_);
    sol.objective = cvec_.dot(x);
    sol.primalResidual = rp;
    sol.dualResidual = rd;
    sol.gap = gap;
    sol.iterations = iter;
    return sol;
  }

  // Attempted closed-form finish: identify the active cone face from the
  // current iterate and solve the reduced KKT equations by least squares.
  std::optional<ConicSolution> tryPolish(const Eigen::VectorXd& z, int iter) const;

  std::optional<ConicSolution> tryPrimalInfeasCert(Eigen::VectorXd y, int iter) const;
  std::optional<ConicSolution> tryDualInfeasCert(Eigen::VectorXd d, int iter) const;

  const ConicProblem& prob_;
  const Settings& st_;
  Vectorizer vec_;
  int D_, q_, N_, mc_;
  Eigen::VectorXd cvec_, b_;
  Eigen::MatrixXd A_, AAt_;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> aatSolver_;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> codA_;
  double bScale_ = 1.0, cScale_ = 1.0;
};

std::optional<ConicSolution> AdmmSolver::tryPolish(const Eigen::VectorXd& z, int iter) const {
  SymMatrix X = vec_.toMat(z.head(D_));
  const double scale = 1.0 + z.cwiseAbs().maxCoeff();
  const double tau = 1e-6 * scale;

  // Range bases per block.
  std::vector<Eigen::MatrixXd> bases(static_cast<size_t>(prob_.psdPart.k()));
  int nUnk = 0;
  for (int b = 0; b < prob_.psdPart.k(); ++b) {
    SymMatrix blk = extract_block(X, prob_.psdPart, b);
    auto ed = eigen_sym(blk);
    int r = 0;
    for (int i = 0; i < ed.values.size(); ++i)
      if (ed.values[i] > tau) ++r;
    bases[static_cast<size_t>(b)] = ed.vectors.rightCols(r);
    nUnk += r * (r + 1) / 2;
  }
  std::vector<int> activeU;
  for (int j = 0; j < q_; ++j)
    if (z[D_ + j] > tau) activeU.push_back(j);
  nUnk += static_cast<int>(activeU.size());

  // Reduced constraint map: unknowns are svec(S_b) per block plus active u.
  Eigen::MatrixXd M(mc_, nUnk);
  auto fillRow = [&](const SymMatrix& Ai, const Eigen::VectorXd& g, Eigen::Index row) {
    int at = 0;
    for (int b = 0; b < prob_.psdPart.k(); ++b) {
      const Eigen::MatrixXd& Q = bases[static_cast<size_t>(b)];
      const int r = static_cast<int>(Q.cols());
      if (r == 0) continue;
      Eigen::MatrixXd G = Q.transpose() * extract_block(Ai, prob_.psdPart, b).dense() * Q;
      for (int i = 0; i < r; ++i)
        for (int j = i; j < r; ++j)
          M(row, at++) = (i == j) ? G(i, i) : kSqrt2 * 0.5 * (G(i, j) + G(j, i));
    }
    for (int j : activeU) M(row, at++) = g[j];
  };
  for (int i = 0; i < mc_; ++i)
    fillRow(prob_.constraints[static_cast<size_t>(i)].A,
            prob_.constraints[static_cast<size_t>(i)].g, i);

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> codM(M);
  Eigen::VectorXd xi = codM.solve(b_);
  const double rp = (M * xi - b_).norm();
  if (rp > 1e-10 * bScale_) return std::nullopt;

  // Rebuild the primal point and verify cone feasibility of the face solve.
  Eigen::VectorXd xp = Eigen::VectorXd::Zero(N_);
  {
    SymMatrix Xp(prob_.psdPart.n());
    int at = 0;
    for (int b = 0; b < prob_.psdPart.k(); ++b) {
      const Eigen::MatrixXd& Q = bases[static_cast<size_t>(b)];
      const int r = static_cast<int>(Q.cols());
      if (r == 0) continue;
      Eigen::MatrixXd S(r, r);
      for (int i = 0; i < r; ++i)
        for (int j = i; j < r; ++j) {
          const double val = xi[at++];
          S(i, j) = S(j, i) = (i == j) ? val : val / kSqrt2;
        }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
      if (es.eigenvalues().minCoeff() < -1e-10 * scale) return std::nullopt;
      Eigen::MatrixXd rec = Q * S * Q.transpose();
      const auto& idx = prob_.psdPart.block(b);
      for (size_t i = 0; i < idx.size(); ++i)
        for (size_t j = i; j < idx.size(); ++j)
          Xp.set(idx[i], idx[j], 0.5 * (rec(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +
                                        rec(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i))));
    }
    xp.head(D_) = vec_.toVec(Xp);
    for (int j : activeU) {
      const double val = xi[at++];
      if (val < -1e-10 * scale) return std::nullopt;
      xp[D_ + j] = std::max(val, 0.0);
    }
  }

  // Dual polish: force the slack to vanish on the identified face.
  Eigen::VectorXd cred(nUnk);
  {
    int at = 0;
    for (int b = 0; b < prob_.psdPart.k(); ++b) {
      const Eigen::MatrixXd& Q = bases[static_cast<size_t>(b)];
      const int r = static_cast<int>(Q.cols());
      if (r == 0) continue;
      Eigen::MatrixXd G = Q.transpose() * extract_block(prob_.C, prob_.psdPart, b).dense() * Q;
      for (int i = 0; i < r; ++i)
        for (int j = i; j < r; ++j)
          cred[at++] = (i == j) ? G(i, i) : kSqrt2 * 0.5 * (G(i, j) + G(j, i));
    }
    for (int j : activeU) cred[at++] = prob_.c[j];
  }
  Eigen::VectorXd yp;
  if (mc_ > 0) {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> codMt(M.transpose());
    yp = codMt.solve(cred);
  } else {
    yp.resize(0);
  }
  Eigen::VectorXd sp = cvec_ - (mc_ > 0 ? Eigen::VectorXd(A_.transpose() * yp)
                                        : Eigen::VectorXd(Eigen::VectorXd::Zero(N_)));
  Eigen::VectorXd sproj = projectCone(sp);
  const double rd = (sp - sproj).norm();
  if (rd > 1e-9 * cScale_) return std::nullopt;
  const double obj = cvec_.dot(xp);
  const double gap = std::abs(obj - b_.dot(yp));
  if (gap > 1e-9 * (1.0 + std::abs(obj))) return std::nullopt;

  const double rpFull = mc_ > 0 ? (A_ * xp - b_).norm() : 0.0;
  if (rpFull > 1e-9 * bScale_) return std::nullopt;
  return packOptimal(xp, yp, sproj, rpFull, rd, gap, iter);
}

std::optional<ConicSolution> AdmmSolver::tryPrimalInfeasCert(Eigen::VectorXd y, int iter) const {
  if (mc_ == 0) return std::nullopt;
  if (y.norm() < 1e-14) return std::nullopt;
  // Farkas certificate: -A'y in the dual cone, b'y = 1.
  Eigen::MatrixXd lhs(N_ + 1, mc_);
  lhs.topRows(N_) = A_.transpose();
  const double kappa = 1e3;
  lhs.row(N_) = kappa * b_.transpose();
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(lhs);
  double res = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 25; ++it) {
    const double beta = b_.dot(y);
    if (beta < 1e-12 * (1.0 + y.norm())) return std::nullopt;
    y /= beta;
    Eigen::VectorXd s = -(A_.transpose() * y);
    Eigen::VectorXd t = projectCone(s);
    res = (s - t).norm() / (1.0 + t.norm());
    if (res <= 1e-9) break;
    Eigen::VectorXd rhs(N_ + 1);
    rhs.head(N_) = -t;
    rhs[N_] = kappa;
    y = cod.solve(rhs);
  }
  if (res > st_.certResidualTol) return std::nullopt;
  ConicSolution sol;
  sol.status = SolveStatus::PrimalInfeasible;
  sol.certificateY = y;
  sol.certificateResidual = res;
  sol.iterations = iter;
  sol.X = SymMatrix(prob_.psdPart.n());
  sol.Z = SymMatrix(prob_.psdPart.n());
  sol.u = Eigen::VectorXd::Zero(q_);
  sol.zu = Eigen::VectorXd::Zero(q_);
  sol.y = y;
  return sol;
}

std::optional<ConicSolution> AdmmSolver::tryDualInfeasCert(Eigen::VectorXd d, int iter) const {
  if (d.norm() < 1e-14) return std::nullopt;
  // Improving ray: d in the cone, A d = 0, c'd < 0.
  for (int it = 0; it < 40; ++it) {
    d = projectCone(d);
    if (mc_ > 0) d -= A_.transpose() * aatSolver_.solve(A_ * d);
    const double nrm = d.norm();
    if (nrm < 1e-14) return std::nullopt;
    d /= nrm;
  }
  d = projectCone(d);
  const double lin = mc_ > 0 ? (A_ * d).norm() : 0.0;
  const double slope = cvec_.dot(d);
  if (d.norm() < 1e-10 || slope >= -1e-10) return std::nullopt;
  const double res = lin / d.norm();
  if (res > st_.certResidualTol) return std::nullopt;
  d /= -slope;  // objective -1 along the ray
  ConicSolution sol;
  sol.status = SolveStatus::DualInfeasible;
  sol.rayX = vec_.toMat(d.head(D_));
  sol.rayU = d.tail(q_);
  sol.certificateResidual = res;
  sol.iterations = iter;
  sol.X = SymMatrix(prob_.psdPart.n());
  sol.Z = SymMatrix(prob_.psdPart.n());
  sol.u = Eigen::VectorXd::Zero(q_);
  sol.zu = Eigen::VectorXd::Zero(q_);
  return sol;
}

ConicSolution AdmmSolver::run() {
  // No constraints: the problem separates; optimum exists iff c is in the
  // dual cone, in which case x = 0 is optimal.
  if (mc_ == 0) {
    Eigen::VectorXd cproj = projectCone(cvec_);
    Eigen::VectorXd neg = cvec_ - cproj;  // the part of c outside the dual cone
    if (neg.norm() > 1e-12 * cScale_) {
      auto cert = tryDualInfeasCert(-neg, 0);
      if (cert) return *cert;
    }
    return packOptimal(Eigen::VectorXd::Zero(N_), Eigen::VectorXd(), projectCone(cvec_),
                       0.0, (cvec_ - projectCone(cvec_)).norm(), 0.0, 0);
  }

  double rho = st_.rho;
  Eigen::VectorXd z = Eigen::VectorXd::Zero(N_);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(N_);
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(mc_);

  ConicSolution best;
  double bestComb = std::numeric_limits<double>::infinity();
  double lastStallComb = std::numeric_limits<double>::infinity();
  Eigen::VectorXd muAtStall = mu, zAtStall = z;

  int iter = 0;
  while (iter < st_.maxIter) {
    ++iter;
    Eigen::VectorXd v = z - w - cvec_ / rho;
    Eigen::VectorXd x = projectAffine(v, &mu);
    mu *= rho;
    Eigen::VectorXd xh = st_.alpha * x + (1.0 - st_.alpha) * z;
    Eigen::VectorXd znew = projectCone(xh + w);
    w += xh - znew;
    Eigen::VectorXd zold = std::move(z);
    z = std::move(znew);

    if (iter % st_.checkInterval == 0 || iter == st_.maxIter) {
      Eigen::VectorXd y = -mu;
      Eigen::VectorXd s = -rho * w;  // in the dual cone by construction
      const double rp = (A_ * z - b_).norm();
      const double rd = (cvec_ - A_.transpose() * y - s).norm();
      const double obj = cvec_.dot(z);
      const double gap = std::abs(obj - b_.dot(y));
      const double comb = std::max({rp / bScale_, rd / cScale_, gap / (1.0 + std::abs(obj))});
      if (comb < bestComb) {
        bestComb = comb;
        best = packOptimal(z, y, s, rp, rd, gap, iter);
        best.status = SolveStatus::SlowProgress;
      }
      if (rp <= st_.epsAbs * bScale_ && rd <= st_.epsAbs * cScale_ &&
          gap <= st_.gapTol * (1.0 + std::abs(obj))) {
        auto sol = packOptimal(z, y, s, rp, rd, gap, iter);
        return sol;
      }
      // polish finishes degenerate problems whose first-order tail is slow;
      // a wrong face guess is rejected by the feasibility checks inside
      const bool stallTick = iter % st_.stallCheckInterval == 0;
      if (comb < 1e-4 || (stallTick && comb < 3e-2)) {
        auto polished = tryPolish(z, iter);
        if (polished) return *polished;
      }
      // residual balancing
      if (iter % (st_.checkInterval * 8) == 0) {
        const double rpRel = rp / bScale_, rdRel = rd / cScale_;
        if (rpRel > 10.0 * rdRel && rho < 1e6) {
          rho *= 2.0;
          w *= 0.5;
        } else if (rdRel > 10.0 * rpRel && rho > 1e-6) {
          rho *= 0.5;
          w *= 2.0;
        }
      }
      if (iter % st_.stallCheckInterval == 0) {
        if (comb > 0.2 * lastStallComb && comb > 1e-7) {
          // progress has stalled: probe for infeasibility certificates;
          // the divergence direction carries an undetermined sign
          auto pc = tryPrimalInfeasCert(-(mu - muAtStall), iter);
          if (!pc) pc = tryPrimalInfeasCert(mu - muAtStall, iter);
          if (!pc) pc = tryPrimalInfeasCert(-mu, iter);
          if (!pc) pc = tryPrimalInfeasCert(mu, iter);
          if (!pc) pc = tryPrimalInfeasCert(b_, iter);
          if (pc) return *pc;
          auto dc = tryDualInfeasCert(z - zAtStall, iter);
          if (!dc) dc = tryDualInfeasCert(zAtStall - z, iter);
          if (!dc) dc = tryDualInfeasCert(z, iter);
          if (dc) return *dc;
        }
        lastStallComb = comb;
        muAtStall = mu;
        zAtStall = z;
      }
    }
  }
  best.status = SolveStatus::SlowProgress;
  best.iterations = iter;
  return best;
}

}  // namespace

ConicSolution solve(const ConicProblem& prob, const Settings& settings) {
  AdmmSolver solver(prob, settings);
  return solver.run();
}

AltPairResult solve_alt_pair(const Pencil& p, const Settings& settings) {
  if (p.isEmpty()) {
    AltPairResult r;
    r.etaOpt = 0.0;
    r.eta = 0.0;
    r.X = SymMatrix(0);
    r.yWitness = Eigen::VectorXd::Zero(p.m());
    r.raw.status = SolveStatus::Optimal;
    return r;
  }
  ConicProblem prob{p.part(), p.a0(), Eigen::VectorXd::Zero(1), {}};
  for (int i = 0; i < p.m(); ++i)
    prob.constraints.push_back({p.ai(i), Eigen::VectorXd::Zero(1), 0.0});
  prob.constraints.push_back(
      {SymMatrix::Identity(p.n()), Eigen::VectorXd::Ones(1), 1.0});

  ConicSolution sol = solve(prob, settings);
  if (sol.status != SolveStatus::Optimal)
    throw SolverFailure("solve_alt_pair: solver stalled", std::move(sol));

  AltPairResult r;
  r.etaOpt = -sol.objective;
  r.X = sol.X;
  r.yWitness = sol.y.head(p.m());
  r.eta = -sol.y[p.m()];
  r.raw = std::move(sol);
  return r;
}

}  // namespace altspec
