#pragma once

#include <optional>
#include <vector>

#include "altspec/pencil.hpp"
#include "altspec/symcore.hpp"

namespace altspec {

/// One settings record for every tolerance a downstream verdict cites.
struct Settings {
  // solver
  int maxIter = 200000;
  double rho = 1.0;
  double alpha = 1.6;           // over-relaxation
  double epsAbs = 5e-10;        // target residual scale (relative scaling applied)
  double gapTol = 5e-9;
  int checkInterval = 50;
  int stallCheckInterval = 2500;
  double certResidualTol = 1e-6;
  // downstream verdicts
  double tolFeas = kDefaultTol;     // zero / psd decisions
  double tolRank = kRankTol;        // eigenvalues counting toward rank
  double infeasThreshold = kInfeasThreshold;
  double feasBandLow = kFeasBandLow;
  unsigned seed = 42;               // randomized operations
};

/// Standard-form conic problem: one psd variable X in block-diagonal form
/// plus q nonnegative scalars u,
///   minimize  <C,X> + c'u
///   s.t.      <A_i,X> + g_i'u = b_i,  i = 1..mc,   X >= 0 (psd),  u >= 0.
struct ConicProblem {
  struct Constraint {
    SymMatrix A;
    Eigen::VectorXd g;
    double b = 0.0;
  };

  BlockPartition psdPart;  // contiguous block layout of X
  SymMatrix C;
  Eigen::VectorXd c;       // size q
  std::vector<Constraint> constraints;

  int q() const { return static_cast<int>(c.size()); }
};

enum class SolveStatus { Optimal, PrimalInfeasible, DualInfeasible, SlowProgress };

struct ConicSolution {
  SolveStatus status = SolveStatus::SlowProgress;
  SymMatrix X;
  Eigen::VectorXd u;
  Eigen::VectorXd y;  // dual multipliers of the equality constraints
  SymMatrix Z;        // dual slack, psd
  Eigen::VectorXd zu; // dual slack of the scalar cone
  double objective = 0.0;
  double primalResidual = 0.0;
  double dualResidual = 0.0;
  double gap = 0.0;
  int iterations = 0;

  // PrimalInfeasible: y with -A'y in the dual cone and b'y = 1.
  // DualInfeasible: improving ray (rayX, rayU) in the cone with A(ray) = 0
  // and objective value -1 along the ray.
  Eigen::VectorXd certificateY;
  SymMatrix rayX;
  Eigen::VectorXd rayU;
  double certificateResidual = 0.0;
};

class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(std::string what, ConicSolution best)
      : std::runtime_error(std::move(what)), best(std::move(best)) {}
  ConicSolution best;
};

ConicSolution solve(const ConicProblem& prob, const Settings& settings = {});

/// The dual pair driving feasibility classification:
///   (D)  inf { eta : A(y) + eta*I >= 0, eta >= 0 }
///   (P)  sup { -<A0,X> : <A_i,X> = 0, tr(X) <= 1, X >= 0 }.
/// (P) always attains; etaOpt is the common optimal value, X the attaining
/// point and (yWitness, eta) the best dual iterate.
struct AltPairResult {
  double etaOpt = 0.0;
  SymMatrix X;
  Eigen::VectorXd yWitness;
  double eta = 0.0;
  ConicSolution raw;
};

AltPairResult solve_alt_pair(const Pencil& p, const Settings& settings = {});

/// Isometric vectorization of block-diagonal symmetric matrices: diagonal
/// entries as-is, off-diagonal entries scaled by sqrt(2), so that
/// <A,B> = vec(A).vec(B) on the block-diagonal part.
class Vectorizer {
 public:
  explicit Vectorizer(const BlockPartition& part);
  int dim() const { return dim_; }
  const BlockPartition& part() const { return part_; }
  Eigen::VectorXd toVec(const SymMatrix& a) const;
  SymMatrix toMat(const Eigen::VectorXd& v) const;

 private:
  BlockPartition part_;
  int dim_;
};

}  // namespace altspec
