#pragma once

#include <optional>
#include <vector>

#include "altspec/pencil.hpp"
#include "altspec/sdpsolve.hpp"

namespace altspec {

/// A point of the alternative spectrahedron
///   S(Sigma) = { X >= 0 : <A_i,X> = 0 (i in [m]), <A0,X> = -1 }
/// in block-diagonal form, together with its membership residuals.
struct AltPoint {
  SymMatrix X;
  double maxEqResidual = 0.0;   // max_i |<A_i,X>|
  double affineResidual = 0.0;  // |<A0,X> + 1|
  double minEigenvalue = 0.0;   // lambda_min(X)
  std::vector<int> support;     // BS(X), 0-based
};

enum class Verdict { WeaklyFeasible, WeaklyInfeasible };

struct FeasibilityStatus {
  Verdict verdict = Verdict::WeaklyFeasible;
  double etaOpt = 0.0;
  /// present iff WeaklyInfeasible
  std::optional<AltPoint> certificate;
  /// present iff WeaklyFeasible: pairs (eps, y) with A(y) + eps*I >= 0
  std::vector<std::pair<double, Eigen::VectorXd>> epsilonWitnesses;
};

struct MembershipResiduals {
  double maxEq = 0.0;
  double affine = 0.0;
  double minEig = 0.0;
};

struct ExtremeTest {
  bool extreme = false;
  /// nonzero block-diagonal feasible direction when not extreme
  std::optional<SymMatrix> direction;
};

/// Weak feasibility / weak infeasibility of A(y) >= 0 via the alternative
/// dual pair. Throws IndeterminateError when the optimal alternative value
/// falls into the dead band or the solver stalls.
FeasibilityStatus classify(const Pencil& p, const Settings& settings = {});

MembershipResiduals membership_residual(const Pencil& p, const SymMatrix& x);

/// Builds an AltPoint (recomputing residuals and support) from a matrix.
AltPoint make_alt_point(const Pencil& p, const SymMatrix& x, double supportTol = kDefaultTol);

/// Facial extremality test: with Q_b orthonormal bases of the block ranges
/// of X, X is extreme in the block-diagonal section of S(Sigma) iff the
/// only block-diagonal direction W = sum_b Q_b S_b Q_b' with <A_i,W> = 0
/// for i = 0..m is W = 0.
ExtremeTest is_extreme(const Pencil& p, const AltPoint& x, const Settings& settings = {});

/// Rank-reducing purification: follows feasible directions to an extreme
/// point with support contained in the input's support.
AltPoint purify(const Pencil& p, const AltPoint& x, const Settings& settings = {});

/// Classification of S' = S(Sigma) restricted to X with X_{B_i} = 0 for
/// i outside I; certificates are lifted back to full indices.
/// WeaklyInfeasible verdict on the subsystem means S' is nonempty.
FeasibilityStatus restricted_alt(const Pencil& p, const std::vector<int>& blockSet,
                                 const Settings& settings = {});

/// Searches for Xbar > 0 with <A_i,Xbar> = 0 for all i in [m]; presence
/// upgrades weak feasibility to exact feasibility applicability.
std::optional<SymMatrix> strict_kernel_point(const Pencil& p, const Settings& settings = {});

/// Per-block check of the non-triviality assumption: classification of
/// every singleton block subsystem.
std::vector<FeasibilityStatus> check_assumption_nontrivial(const Pencil& p,
                                                           const Settings& settings = {});

}  // namespace altspec
