#pragma once

#include <stdexcept>
#include <string>

namespace altspec {

/// Default relative tolerance for zero/psd decisions, scaled by (1 + ||.||_2).
inline constexpr double kDefaultTol = 1e-8;

/// Dead band separating weakly feasible from weakly infeasible verdicts:
/// optimal alternative values in (kFeasBandLow, kInfeasThreshold) are
/// reported as indeterminate instead of being coerced to a verdict.
inline constexpr double kInfeasThreshold = 1e-7;
inline constexpr double kFeasBandLow = 1e-9;

/// Eigenvalues >= kRankTol * (1 + ||X||_2) count toward rank.
inline constexpr double kRankTol = 1e-7;

/// Singular values < kKernelTol * sigma_max are treated as zero.
inline constexpr double kKernelTol = 1e-9;

/// Thrown when a numerical verdict cannot be decided at the configured
/// tolerances (rank straddling the threshold band, solver stall, optimal
/// value inside the feasibility dead band).
class IndeterminateError : public std::runtime_error {
 public:
  explicit IndeterminateError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace altspec
