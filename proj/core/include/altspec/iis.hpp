#pragma once

#include <optional>
#include <string>
#include <vector>

#include "altspec/altsys.hpp"

namespace altspec {

enum class IISMethod { Greedy, L21, BruteForce };

struct IISResult {
  std::vector<int> blocks;  // sorted, 0-based
  AltPoint certificate;     // support contained in blocks
  bool certificateExtreme = false;
  /// per-subset verdicts gathered while checking irreducibility
  std::vector<std::pair<std::vector<int>, Verdict>> verification;
  IISMethod method = IISMethod::Greedy;
};

struct IISVerification {
  bool verified = false;
  std::string refutation;  // empty when verified
  std::optional<IISResult> result;
  std::vector<std::pair<std::vector<int>, Verdict>> checks;
};

/// Deletion filter: walks the blocks in ascending order and drops every
/// block whose removal keeps the subsystem weakly infeasible. With exact
/// subsystem verdicts the result is an IIS. If the non-triviality
/// assumption fails, the violating singleton block is returned as a
/// size-1 IIS.
IISResult greedy_iis(const Pencil& p, const Settings& settings = {});

/// Checks weak infeasibility of I and weak feasibility of every one-block
/// deletion; enumerates all proper subsets when |I| <= 12.
IISVerification verify_iis(const Pencil& p, const std::vector<int>& blockSet,
                           const Settings& settings = {});

enum class BlockNorm { Frobenius, Operator };

struct MinSupportResult {
  AltPoint point;
  double objective = 0.0;  // sum of per-block norms
};

/// Convex group-norm heuristic min { sum_i ||X_{B_i}|| : X in S(Sigma) }.
/// Frobenius mode embeds each per-block norm bound as a second-order cone
/// in arrow-matrix form; operator mode bounds lambda_max(X_{B_i}) <= t_i
/// (the lower bound is implied by X >= 0). The returned support contains
/// an infeasible subsystem but is not claimed to be an IIS.
MinSupportResult min_support_l21(const Pencil& p, BlockNorm norm = BlockNorm::Frobenius,
                                 const Settings& settings = {});

/// Exhaustive minimum block-support oracle (guarded to k <= 12): first
/// support, by increasing cardinality, whose restricted alternative system
/// is nonempty.
struct BruteForceResult {
  std::vector<int> support;
  AltPoint certificate;
};
BruteForceResult min_support_bruteforce(const Pencil& p, const Settings& settings = {});

/// Constructive half of the IIS <-> extreme point correspondence: purifies
/// a certificate of the restricted alternative system of a verified IIS
/// into an extreme point with support exactly I. A strictly smaller final
/// support refutes that I was an IIS and is surfaced as an error.
AltPoint iis_to_extreme(const Pencil& p, const std::vector<int>& blockSet,
                        const Settings& settings = {});

}  // namespace altspec
