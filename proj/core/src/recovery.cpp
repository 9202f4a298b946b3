#include "altspec/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace altspec {

SignStats sign_stats(const SymMatrix& v, const BlockPartition& part, double tol) {
  if (v.dim() != part.n()) throw std::invalid_argument("sign_stats: dimension mismatch");
  SignStats s;
  for (int b = 0; b < part.k(); ++b) {
    SymMatrix blk = extract_block(v, part, b);
    auto ed = eigen_sym(blk);
    const double lamMin = ed.values[0];
    const double lamMax = ed.values[ed.values.size() - 1];
    const double thresh = tol * (1.0 + std::max(std::abs(lamMin), std::abs(lamMax)));
    if (lamMax > thresh) ++s.sigmaPlus;
    if (lamMin < -thresh) ++s.sigmaMinus;
    s.blockEigRange.emplace_back(lamMin, lamMax);
  }
  return s;
}

KernelBasis constraint_kernel(const std::vector<SymMatrix>& matrices,
                              const BlockPartition& part) {
  Vectorizer vec(part);
  const int d = vec.dim();
  const int m = static_cast<int>(matrices.size());
  KernelBasis kb;
  if (m == 0) {
    kb.dimension = d;
    for (int i = 0; i < d; ++i) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
      e[i] = 1.0;
      kb.basis.push_back(vec.toMat(e));
    }
    return kb;
  }
  Eigen::MatrixXd map(m, d);
  for (int i = 0; i < m; ++i) map.row(i) = vec.toVec(matrices[static_cast<size_t>(i)]).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(map, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv[0] : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > kKernelTol * smax) ++rank;
  kb.dimension = d - rank;
  for (int i = rank; i < d; ++i) kb.basis.push_back(vec.toMat(svd.matrixV().col(i)));
  return kb;
}

namespace {

int min_sign_count(const SymMatrix& v, const BlockPartition& part, double tol) {
  SignStats s = sign_stats(v, part, tol);
  return std::min(s.sigmaPlus, s.sigmaMinus);
}

}  // namespace

UniquenessVerdict check_recovery_condition(const std::vector<SymMatrix>& matrices,
                                           const BlockPartition& part, int t, int trials,
                                           const Settings& settings) {
  if (t < 0) throw std::invalid_argument("check_recovery_condition: t must be >= 0");
  KernelBasis kb = constraint_kernel(matrices, part);

  UniquenessVerdict verdict;
  verdict.t = t;
  if (kb.dimension == 0) {
    verdict.outcome = UniquenessOutcome::Holds;  // vacuous
    verdict.mode = UniquenessMode::ExactKernelDimLeqOne;
    return verdict;
  }
  if (kb.dimension == 1) {
    verdict.mode = UniquenessMode::ExactKernelDimLeqOne;
    const SymMatrix& v = kb.basis.front();
    if (min_sign_count(v, part, settings.tolFeas) <= t) {
      verdict.outcome = UniquenessOutcome::Fails;
      verdict.witness = v;
    } else {
      verdict.outcome = UniquenessOutcome::Holds;
    }
    return verdict;
  }

  verdict.mode = UniquenessMode::Randomized;
  verdict.trials = trials;
  int bestCount = part.k() + 1;
  std::optional<SymMatrix> best;
  auto consider = [&](const SymMatrix& cand) {
    if (cand.maxAbs() < 1e-12) return;
    SymMatrix v = cand.scaled(1.0 / std::sqrt(inner_product(cand, cand)));
    const int c = min_sign_count(v, part, settings.tolFeas);
    if (c < bestCount) {
      bestCount = c;
      best = v;
    }
  };

  for (const auto& b : kb.basis) consider(b);
  for (size_t i = 0; i < kb.basis.size(); ++i)
    for (size_t j = i + 1; j < kb.basis.size(); ++j) {
      consider(kb.basis[i] + kb.basis[j]);
      consider(kb.basis[i] - kb.basis[j]);
    }

  std::mt19937 rng(settings.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < trials; ++trial) {
    SymMatrix cand(part.n());
    for (const auto& b : kb.basis) {
      const double c = gauss(rng);
      cand = cand + c * b;
    }
    consider(cand);
  }

  if (bestCount <= t) {
    verdict.outcome = UniquenessOutcome::Fails;
    verdict.witness = best;
  } else {
    verdict.outcome = UniquenessOutcome::InconclusiveSampled;
  }
  return verdict;
}

SingletonVerdict verify_unique_solution(const std::vector<SymMatrix>& matrices,
                                        const BlockPartition& part, const SymMatrix& x0,
                                        int trials, const Settings& settings) {
  if (x0.dim() != part.n())
    throw std::invalid_argument("verify_unique_solution: dimension mismatch");
  if (!psd_check(x0, settings.tolFeas))
    throw std::invalid_argument("verify_unique_solution: X0 is not psd");
  if (!is_block_diagonal(x0, part, settings.tolFeas * (1.0 + x0.maxAbs())))
    throw std::invalid_argument("verify_unique_solution: X0 is not block-diagonal");

  const int n = part.n();
  Vectorizer vec(part);
  std::mt19937 rng(settings.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // The feasible set may be unbounded; a trace box keeps every solve
  // bounded while any optimum different from X0 stays a valid witness.
  const double traceCap = x0.dense().trace() + n + 1.0;

  SingletonVerdict verdict;
  for (int trial = 0; trial < trials; ++trial) {
    Eigen::VectorXd rv(vec.dim());
    for (int i = 0; i < rv.size(); ++i) rv[i] = gauss(rng);
    SymMatrix r = vec.toMat(rv);
    for (const SymMatrix& obj : {r, -r}) {
      ConicProblem prob{part, obj, Eigen::VectorXd::Zero(1), {}};
      for (const auto& a : matrices)
        prob.constraints.push_back({a, Eigen::VectorXd::Zero(1), inner_product(a, x0)});
      prob.constraints.push_back({SymMatrix::Identity(n), Eigen::VectorXd::Ones(1), traceCap});
      ConicSolution sol = solve(prob, settings);
      if (sol.status != SolveStatus::Optimal)
        throw SolverFailure("verify_unique_solution: solver stalled", std::move(sol));
      if ((sol.X - x0).maxAbs() > 1e-6) {
        verdict.outcome = SingletonOutcome::NotUnique;
        verdict.witnessPair = {x0, sol.X};
        verdict.trials = trial + 1;
        return verdict;
      }
    }
  }
  verdict.outcome = SingletonOutcome::ProbablyUnique;
  verdict.trials = trials;
  return verdict;
}

std::pair<SymMatrix, SymMatrix> split_psd_pair(const SymMatrix& v, const BlockPartition& part) {
  if (v.dim() != part.n()) throw std::invalid_argument("split_psd_pair: dimension mismatch");
  if (v.maxAbs() == 0.0) throw std::invalid_argument("split_psd_pair: V must be nonzero");
  SymMatrix x1(v.dim()), x2(v.dim());
  for (int b = 0; b < part.k(); ++b) {
    auto ed = eigen_sym(extract_block(v, part, b));
    const auto& idx = part.block(b);
    Eigen::VectorXd neg = (-ed.values).cwiseMax(0.0);
    Eigen::VectorXd pos = ed.values.cwiseMax(0.0);
    Eigen::MatrixXd m1 = ed.vectors * neg.asDiagonal() * ed.vectors.transpose();
    Eigen::MatrixXd m2 = ed.vectors * pos.asDiagonal() * ed.vectors.transpose();
    for (size_t i = 0; i < idx.size(); ++i)
      for (size_t j = i; j < idx.size(); ++j) {
        x1.set(idx[i], idx[j], 0.5 * (m1(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +
                                      m1(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i))));
        x2.set(idx[i], idx[j], 0.5 * (m2(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +
                                      m2(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i))));
      }
  }
  return {x1, x2};
}

GeneratedSystem gen_unique_lp(int n) {
  if (n < 2) throw std::invalid_argument("gen_unique_lp: n must be >= 2");
  const int core = (n % 2 == 0) ? n : n - 1;
  std::vector<SymMatrix> mats;
  for (int i = 0; i + 1 < core; ++i) {
    SymMatrix a(n);
    a.set(i, i, 1.0);
    a.set(i + 1, i + 1, 1.0);
    mats.push_back(a);
  }
  if (n % 2 == 1) {
    // pin the ignored variable to zero
    SymMatrix a(n);
    a.set(n - 1, n - 1, 1.0);
    mats.push_back(a);
  }
  SymMatrix kernel(n);
  const double lambda = 1.0 / std::sqrt(static_cast<double>(core));
  for (int i = 0; i < core; ++i) kernel.set(i, i, (i % 2 == 0) ? lambda : -lambda);
  GeneratedSystem g{std::move(mats), BlockPartition::singletons(n), kernel, core / 2};
  return g;
}

GeneratedSystem gen_unique_sdp(int n) {
  if (n < 3 || n % 3 != 0) throw std::invalid_argument("gen_unique_sdp: n must be divisible by 3");
  const int k = n / 3;
  const int dim = 2 * k;
  auto pos = [&](int v) {  // 1-based variable index -> matrix position
    const int j = (v - 1) / 3;  // block
    const int r = (v - 1) % 3;
    if (r == 0) return std::pair<int, int>{2 * j, 2 * j};
    if (r == 1) return std::pair<int, int>{2 * j + 1, 2 * j + 1};
    return std::pair<int, int>{2 * j, 2 * j + 1};
  };
  auto coeff = [&](std::pair<int, int> p) {
    // off-diagonal coefficients halved for the symmetric double count
    return p.first == p.second ? 1.0 : 0.5;
  };
  std::vector<SymMatrix> mats;
  for (int a = 1; a < n; ++a) {
    SymMatrix m(dim);
    auto p1 = pos(a), p2 = pos(a + 1);
    m.set(p1.first, p1.second, m(p1.first, p1.second) + coeff(p1));
    m.set(p2.first, p2.second, m(p2.first, p2.second) + coeff(p2));
    mats.push_back(m);
  }
  // alternating kernel: v_odd = lambda, v_even = -lambda
  SymMatrix kernel(dim);
  const double lambda = 1.0 / (2.0 * std::sqrt(static_cast<double>(k)));
  for (int v = 1; v <= n; ++v) {
    auto p = pos(v);
    kernel.set(p.first, p.second, (v % 2 == 1) ? lambda : -lambda);
  }
  std::vector<int> sizes(static_cast<size_t>(k), 2);
  GeneratedSystem g{std::move(mats), BlockPartition::contiguous(sizes), kernel, k};
  return g;
}

Pencil gen_blocklinear() { return gen_blocksdp(0.0); }

Pencil gen_blocksdp(double eps) {
  SymMatrix a0(4), a1(4), a2(4);
  a0.set(1, 1, -1.0);
  a0.set(2, 2, -1.0);
  a0.set(2, 3, eps);
  a0.set(3, 3, -2.0);
  a1.set(0, 0, 1.0);
  a1.set(1, 1, -1.0);
  a1.set(2, 2, -1.0);
  a1.set(3, 3, -1.0);
  a2.set(1, 1, -1.0);
  a2.set(2, 2, 1.0);
  return Pencil(a0, {a1, a2}, BlockPartition(4, {{0}, {1}, {2, 3}}));
}

}  // namespace altspec
