#include "altspec/iis.hpp"

#include <algorithm>
#include <sstream>

namespace altspec {

namespace {

std::vector<int> all_blocks(const Pencil& p) {
  std::vector<int> v(static_cast<size_t>(p.k()));
  for (int i = 0; i < p.k(); ++i) v[static_cast<size_t>(i)] = i;
  return v;
}

std::vector<int> without(const std::vector<int>& set, int drop) {
  std::vector<int> r;
  r.reserve(set.size());
  for (int b : set)
    if (b != drop) r.push_back(b);
  return r;
}

std::string format_set(const std::vector<int>& set) {
  std::ostringstream os;
  os << "{";
  for (size_t i = 0; i < set.size(); ++i) os << (i ? "," : "") << set[i];
  os << "}";
  return os.str();
}

// Certificate for an infeasible block set, purified when purification
// succeeds (flagged), raw otherwise.
void attach_certificate(const Pencil& p, const std::vector<int>& blocks, IISResult* out,
                        const Settings& st) {
  FeasibilityStatus fs = restricted_alt(p, blocks, st);
  if (!fs.certificate)
    throw IndeterminateError("attach_certificate: restricted system produced no certificate");
  out->certificate = *fs.certificate;
  out->certificateExtreme = false;
  try {
    out->certificate = purify(p, *fs.certificate, st);
    out->certificateExtreme = true;
  } catch (const IndeterminateError&) {
    // keep the raw certificate
  }
}

}  // namespace

IISResult greedy_iis(const Pencil& p, const Settings& settings) {
  FeasibilityStatus root = classify(p, settings);
  if (root.verdict != Verdict::WeaklyInfeasible)
    throw std::invalid_argument("greedy_iis: system is not weakly infeasible");

  IISResult out;
  out.method = IISMethod::Greedy;

  // Non-triviality assumption: a weakly infeasible single block short-cuts
  // to a size-1 IIS.
  for (int b = 0; b < p.k(); ++b) {
    FeasibilityStatus single = classify(subsystem(p, {b}), settings);
    out.verification.emplace_back(std::vector<int>{b}, single.verdict);
    if (single.verdict == Verdict::WeaklyInfeasible) {
      out.blocks = {b};
      attach_certificate(p, out.blocks, &out, settings);
      return out;
    }
  }

  std::vector<int> current = all_blocks(p);
  for (int b = 0; b < p.k(); ++b) {
    if (current.size() == 1) break;
    std::vector<int> trial = without(current, b);
    FeasibilityStatus fs = classify(subsystem(p, trial), settings);
    out.verification.emplace_back(trial, fs.verdict);
    if (fs.verdict == Verdict::WeaklyInfeasible) current = std::move(trial);
  }
  out.blocks = current;
  attach_certificate(p, out.blocks, &out, settings);
  return out;
}

IISVerification verify_iis(const Pencil& p, const std::vector<int>& blockSet,
                           const Settings& settings) {
  IISVerification v;
  std::vector<int> set = blockSet;
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());

  FeasibilityStatus whole = classify(subsystem(p, set), settings);
  v.checks.emplace_back(set, whole.verdict);
  if (whole.verdict != Verdict::WeaklyInfeasible) {
    v.refutation = "subsystem " + format_set(set) + " is weakly feasible";
    return v;
  }

  // One-block deletions (what irreducibility requires over the monotone
  // deletion lattice).
  for (int b : set) {
    std::vector<int> sub = without(set, b);
    FeasibilityStatus fs = classify(subsystem(p, sub), settings);
    v.checks.emplace_back(sub, fs.verdict);
    if (fs.verdict == Verdict::WeaklyInfeasible) {
      v.refutation = "proper subsystem " + format_set(sub) + " is weakly infeasible";
      return v;
    }
  }

  // Full enumeration where affordable; tolerance-level verdicts make
  // monotonicity empirical rather than exact.
  if (set.size() <= 12) {
    const size_t n = set.size();
    for (size_t mask = 1; mask + 1 < (size_t{1} << n); ++mask) {
      std::vector<int> sub;
      for (size_t i = 0; i < n; ++i)
        if (mask & (size_t{1} << i)) sub.push_back(set[i]);
      if (sub.size() >= n - 1) continue;  // already checked above
      FeasibilityStatus fs = classify(subsystem(p, sub), settings);
      v.checks.emplace_back(sub, fs.verdict);
      if (fs.verdict == Verdict::WeaklyInfeasible) {
        v.refutation = "proper subsystem " + format_set(sub) + " is weakly infeasible";
        return v;
      }
    }
  }

  v.verified = true;
  IISResult res;
  res.blocks = set;
  res.method = IISMethod::Greedy;
  res.verification = v.checks;
  attach_certificate(p, set, &res, settings);
  v.result = std::move(res);
  return v;
}

MinSupportResult min_support_l21(const Pencil& p, BlockNorm norm, const Settings& settings) {
  if (p.isEmpty()) throw std::invalid_argument("min_support_l21: empty pencil");
  const int k = p.k();
  const int n = p.n();

  std::vector<int> sizes;
  for (int b = 0; b < k; ++b) sizes.push_back(static_cast<int>(p.part().block(b).size()));

  // Layout of the combined psd variable: X blocks first, auxiliary blocks
  // after. Offsets index into the combined matrix dimension.
  std::vector<int> combined = sizes;
  std::vector<int> auxOffset(static_cast<size_t>(k));
  int dimTotal = n;
  int q = 0;
  if (norm == BlockNorm::Frobenius) {
    for (int b = 0; b < k; ++b) {
      const int db = sizes[static_cast<size_t>(b)] * (sizes[static_cast<size_t>(b)] + 1) / 2;
      auxOffset[static_cast<size_t>(b)] = dimTotal;
      combined.push_back(db + 1);
      dimTotal += db + 1;
    }
  } else {
    for (int b = 0; b < k; ++b) {
      auxOffset[static_cast<size_t>(b)] = dimTotal;
      combined.push_back(sizes[static_cast<size_t>(b)]);
      dimTotal += sizes[static_cast<size_t>(b)];
    }
    q = k;  // the t_i live in the nonnegative scalar cone
  }

  ConicProblem prob{BlockPartition::contiguous(combined), SymMatrix(dimTotal),
                    Eigen::VectorXd::Zero(q), {}};

  auto embed = [&](const SymMatrix& a) {
    SymMatrix r(dimTotal);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) r.set(i, j, a(i, j));
    return r;
  };

  // S(Sigma) membership.
  for (int i = 0; i < p.m(); ++i)
    prob.constraints.push_back({embed(p.ai(i)), Eigen::VectorXd::Zero(q), 0.0});
  prob.constraints.push_back({embed(p.a0()), Eigen::VectorXd::Zero(q), -1.0});

  if (norm == BlockNorm::Frobenius) {
    // Arrow form of ||svec(X_b)||_2 <= t_b: M = [[t, z'],[z, t I]] >= 0.
    constexpr double kSqrt2 = 1.4142135623730951;
    for (int b = 0; b < k; ++b) {
      const auto& idx = p.part().block(b);
      const int nb = sizes[static_cast<size_t>(b)];
      const int off = auxOffset[static_cast<size_t>(b)];
      prob.C.set(off, off, 1.0);
      int slot = 1;
      for (int i = 0; i < nb; ++i)
        for (int j = i; j < nb; ++j) {
          // M[0][slot] = svec(X_b)[slot-1]
          SymMatrix a(dimTotal);
          a.set(off, off + slot, 0.5);
          a.set(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)],
                (i == j) ? -1.0 : -kSqrt2 / 2.0);
          prob.constraints.push_back({a, Eigen::VectorXd::Zero(q), 0.0});
          // M[slot][slot] = M[0][0]
          SymMatrix d(dimTotal);
          d.set(off + slot, off + slot, 1.0);
          d.set(off, off, -1.0);
          prob.constraints.push_back({d, Eigen::VectorXd::Zero(q), 0.0});
          ++slot;
        }
      const int db = slot - 1;
      for (int i = 1; i <= db; ++i)
        for (int j = i + 1; j <= db; ++j) {
          SymMatrix z(dimTotal);
          z.set(off + i, off + j, 0.5);
          prob.constraints.push_back({z, Eigen::VectorXd::Zero(q), 0.0});
        }
    }
  } else {
    // Slack block Q_b = t_b I - X_b >= 0; lambda_max bound (X >= 0 makes
    // the lower operator bound redundant).
    for (int b = 0; b < k; ++b) {
      prob.c[b] = 1.0;
      const auto& idx = p.part().block(b);
      const int nb = sizes[static_cast<size_t>(b)];
      const int off = auxOffset[static_cast<size_t>(b)];
      for (int i = 0; i < nb; ++i)
        for (int j = i; j < nb; ++j) {
          SymMatrix a(dimTotal);
          a.set(off + i, off + j, (i == j) ? 1.0 : 0.5);
          a.set(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)], (i == j) ? 1.0 : 0.5);
          Eigen::VectorXd g = Eigen::VectorXd::Zero(q);
          if (i == j) g[b] = -1.0;
          prob.constraints.push_back({a, g, 0.0});
        }
    }
  }

  ConicSolution sol = solve(prob, settings);
  if (sol.status == SolveStatus::PrimalInfeasible)
    throw std::invalid_argument("min_support_l21: S(Sigma) is empty (system weakly feasible)");
  if (sol.status != SolveStatus::Optimal)
    throw SolverFailure("min_support_l21: solver stalled", std::move(sol));

  SymMatrix x(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) x.set(i, j, sol.X(i, j));

  MinSupportResult r;
  r.point = make_alt_point(p, x, settings.tolFeas);
  r.objective = sol.objective;
  return r;
}

BruteForceResult min_support_bruteforce(const Pencil& p, const Settings& settings) {
  const int k = p.k();
  if (k > 12) throw std::invalid_argument("min_support_bruteforce: guard k <= 12 violated");
  for (int card = 1; card <= k; ++card) {
    // lexicographic subsets of the given cardinality
    std::vector<char> sel(static_cast<size_t>(k), 0);
    std::fill(sel.begin(), sel.begin() + card, 1);
    std::vector<std::vector<int>> subsets;
    do {
      std::vector<int> s;
      for (int i = 0; i < k; ++i)
        if (sel[static_cast<size_t>(i)]) s.push_back(i);
      subsets.push_back(std::move(s));
    } while (std::prev_permutation(sel.begin(), sel.end()));
    for (const auto& s : subsets) {
      FeasibilityStatus fs = restricted_alt(p, s, settings);
      if (fs.verdict == Verdict::WeaklyInfeasible) return {s, *fs.certificate};
    }
  }
  throw std::invalid_argument("min_support_bruteforce: S(Sigma) is empty at every support");
}

AltPoint iis_to_extreme(const Pencil& p, const std::vector<int>& blockSet,
                        const Settings& settings) {
  IISVerification ver = verify_iis(p, blockSet, settings);
  if (!ver.verified)
    throw std::invalid_argument("iis_to_extreme: not an IIS: " + ver.refutation);

  FeasibilityStatus fs = restricted_alt(p, blockSet, settings);
  AltPoint extreme = purify(p, *fs.certificate, settings);

  std::vector<int> set = blockSet;
  std::sort(set.begin(), set.end());
  if (extreme.support != set)
    throw std::runtime_error(
        "iis_to_extreme: purified support shrank below the candidate set, refuting that it "
        "was an IIS");
  return extreme;
}

}  // namespace altspec
