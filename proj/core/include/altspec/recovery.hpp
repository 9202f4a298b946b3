#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "altspec/pencil.hpp"
#include "altspec/sdpsolve.hpp"

namespace altspec {

/// Per-block eigenvalue sign counts: sigmaPlus / sigmaMinus are the numbers
/// of blocks with at least one positive / negative eigenvalue.
struct SignStats {
  int sigmaPlus = 0;
  int sigmaMinus = 0;
  std::vector<std::pair<double, double>> blockEigRange;  // (lambda_min, lambda_max)
};

/// Orthonormal basis (under the symmetric-matrix inner product) of the
/// block-diagonal solutions of <A_i,V> = 0 for all given matrices.
struct KernelBasis {
  int dimension = 0;
  std::vector<SymMatrix> basis;
};

enum class UniquenessOutcome { Holds, Fails, InconclusiveSampled };
enum class UniquenessMode { ExactKernelDimLeqOne, Randomized };

struct UniquenessVerdict {
  UniquenessOutcome outcome = UniquenessOutcome::InconclusiveSampled;
  int t = 0;
  UniquenessMode mode = UniquenessMode::Randomized;
  int trials = 0;
  std::optional<SymMatrix> witness;  // kernel element with min(sigma+,sigma-) <= t
};

enum class SingletonOutcome { ProbablyUnique, NotUnique };

struct SingletonVerdict {
  SingletonOutcome outcome = SingletonOutcome::ProbablyUnique;
  int trials = 0;
  std::optional<std::pair<SymMatrix, SymMatrix>> witnessPair;  // two distinct solutions
};

SignStats sign_stats(const SymMatrix& v, const BlockPartition& part, double tol = kDefaultTol);

KernelBasis constraint_kernel(const std::vector<SymMatrix>& matrices, const BlockPartition& part);

/// Universal uniqueness condition: for all V != 0 in the constraint kernel,
/// sigma+(V) > t and sigma-(V) > t. Decided exactly for kernel dimension
/// <= 1; for larger kernels this is a falsifier (deterministic basis
/// combinations plus seeded rotation-invariant sampling) and honestly
/// reports InconclusiveSampled when no witness is found.
UniquenessVerdict check_recovery_condition(const std::vector<SymMatrix>& matrices,
                                           const BlockPartition& part, int t, int trials = 1000,
                                           const Settings& settings = {});

/// Empirical singleton test for {X >= 0 : <A_i,X> = <A_i,X0>}: minimizes
/// random objectives over the set and reports a witness pair on the first
/// optimum that differs from X0.
SingletonVerdict verify_unique_solution(const std::vector<SymMatrix>& matrices,
                                        const BlockPartition& part, const SymMatrix& x0,
                                        int trials = 20, const Settings& settings = {});

/// Splits a kernel element into the constructive non-uniqueness pair:
/// X1 collects the negated negative eigenparts per block, X2 the positive
/// ones, so X1, X2 >= 0, X2 - X1 = V, and <A_i,X1> = <A_i,X2> whenever
/// <A_i,V> = 0.
std::pair<SymMatrix, SymMatrix> split_psd_pair(const SymMatrix& v, const BlockPartition& part);

struct GeneratedSystem {
  std::vector<SymMatrix> matrices;
  BlockPartition part;
  SymMatrix predictedKernel;  // unit-norm kernel element (dimension 1)
  int predictedSigma = 0;     // sigma+ = sigma- of every kernel element
};

/// Diagonal encoding of the bidiagonal chain v_i + v_{i+1} = 0 over n
/// singleton blocks; the kernel is the alternating-sign diagonal. Odd n is
/// handled by the even-core construction on n-1 variables with the last
/// variable pinned to zero.
GeneratedSystem gen_unique_lp(int n);

/// The 2x2-block variant: n divisible by 3, k = n/3 blocks, variables
/// placed as [[v_{3j-2}, v_{3j}], [v_{3j}, v_{3j-1}]]; every kernel block
/// has eigenvalues +-sqrt(2)*lambda.
GeneratedSystem gen_unique_sdp(int n);

/// Fixture pencils: the decomposable linear counterexample (three polyhedra
/// with blocks {0},{1},{2,3}) and its eps-deformed non-decomposable variant.
Pencil gen_blocklinear();
Pencil gen_blocksdp(double eps);

}  // namespace altspec
