#include <doctest.h>

#include <random>

#include "altspec/recovery.hpp"
#include "helpers.hpp"

using namespace altspec;
using testutil::diag_matrix;

namespace {

std::vector<SymMatrix> all_fixture_matrices(const Pencil& p) {
  std::vector<SymMatrix> mats{p.a0()};
  for (int i = 0; i < p.m(); ++i) mats.push_back(p.ai(i));
  return mats;
}

}  // namespace

TEST_CASE("sign statistics") {
  BlockPartition part(4, {{0}, {1}, {2, 3}});
  SignStats s = sign_stats(diag_matrix({1.0, 1.0, 1.0, -1.0}), part);
  CHECK(s.sigmaPlus == 3);
  CHECK(s.sigmaMinus == 1);

  std::mt19937 rng(51);
  for (int trial = 0; trial < 10; ++trial) {
    SymMatrix x = testutil::random_psd_block_diag(part, rng);
    SignStats sp = sign_stats(x, part);
    CHECK(sp.sigmaMinus == 0);
    CHECK(sp.sigmaPlus == static_cast<int>(block_support(x, part).size()));
  }

  // two indefinite 2x2 blocks of the [[l,l],[l,-l]] pattern
  GeneratedSystem g6 = gen_unique_sdp(6);
  SignStats s6 = sign_stats(g6.predictedKernel, g6.part);
  CHECK(s6.sigmaPlus == 2);
  CHECK(s6.sigmaMinus == 2);
}

TEST_CASE("negation swaps the sign counts exactly") {
  std::mt19937 rng(52);
  BlockPartition part(6, {{0, 1}, {2}, {3, 4, 5}});
  for (int trial = 0; trial < 20; ++trial) {
    SymMatrix v = testutil::random_block_diag(part, rng);
    SignStats a = sign_stats(v, part);
    SignStats b = sign_stats(-v, part);
    CHECK(a.sigmaPlus == b.sigmaMinus);
    CHECK(a.sigmaMinus == b.sigmaPlus);
  }
}

TEST_CASE("constraint kernel basis") {
  GeneratedSystem g4 = gen_unique_lp(4);
  KernelBasis kb = constraint_kernel(g4.matrices, g4.part);
  REQUIRE(kb.dimension == 1);
  // proportional to diag(1,-1,1,-1)/2
  SymMatrix v = kb.basis.front();
  if (v(0, 0) < 0) v = -v;
  CHECK((v.dense() - g4.predictedKernel.dense()).cwiseAbs().maxCoeff() <= 1e-9);
  for (const auto& a : g4.matrices) CHECK(std::abs(inner_product(a, v)) <= 1e-9);

  // no constraints: the whole block-diagonal space
  BlockPartition part(3, {{0, 1}, {2}});
  KernelBasis full = constraint_kernel({}, part);
  CHECK(full.dimension == 3 + 1);

  // independent random rows drop the dimension one each
  std::mt19937 rng(53);
  std::vector<SymMatrix> rows;
  for (int i = 0; i < 2; ++i) rows.push_back(testutil::random_block_diag(part, rng));
  KernelBasis cut = constraint_kernel(rows, part);
  CHECK(cut.dimension == 2);
  // orthonormal under the matrix inner product
  for (size_t i = 0; i < cut.basis.size(); ++i)
    for (size_t j = 0; j < cut.basis.size(); ++j) {
      double expect = (i == j) ? 1.0 : 0.0;
      CHECK(inner_product(cut.basis[i], cut.basis[j]) == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("uniqueness condition on the generated families (exact mode)") {
  for (int n : {4, 6, 8}) {
    GeneratedSystem g = gen_unique_lp(n);
    UniquenessVerdict holds = check_recovery_condition(g.matrices, g.part, n / 2 - 1);
    CHECK(holds.outcome == UniquenessOutcome::Holds);
    CHECK(holds.mode == UniquenessMode::ExactKernelDimLeqOne);
    UniquenessVerdict fails = check_recovery_condition(g.matrices, g.part, n / 2);
    CHECK(fails.outcome == UniquenessOutcome::Fails);
    REQUIRE(fails.witness.has_value());
  }
  for (int n : {6, 9}) {
    GeneratedSystem g = gen_unique_sdp(n);
    CHECK(check_recovery_condition(g.matrices, g.part, n / 3 - 1).outcome ==
          UniquenessOutcome::Holds);
    CHECK(check_recovery_condition(g.matrices, g.part, n / 3).outcome ==
          UniquenessOutcome::Fails);
  }
}

TEST_CASE("uniqueness condition fails on the decomposable fixture, t = 2") {
  Pencil p = testutil::dl_fixture();
  UniquenessVerdict v = check_recovery_condition(all_fixture_matrices(p), p.part(), 2);
  REQUIRE(v.outcome == UniquenessOutcome::Fails);
  REQUIRE(v.witness.has_value());
  SignStats s = sign_stats(*v.witness, p.part());
  CHECK(std::min(s.sigmaPlus, s.sigmaMinus) <= 2);
  // every kernel element here has a lone-signed side
  CHECK(std::min(s.sigmaPlus, s.sigmaMinus) == 1);
  for (const auto& a : all_fixture_matrices(p))
    CHECK(std::abs(inner_product(a, *v.witness)) <= 1e-9);
}

TEST_CASE("singleton-block specialization matches the vector sign count") {
  for (int n : {4, 6}) {
    GeneratedSystem g = gen_unique_lp(n);
    KernelBasis kb = constraint_kernel(g.matrices, g.part);
    REQUIRE(kb.dimension == 1);
    Eigen::VectorXd diag = kb.basis.front().dense().diagonal();
    int negatives = 0;
    for (int i = 0; i < diag.size(); ++i)
      if (diag[i] < -1e-9) ++negatives;
    int positives = 0;
    for (int i = 0; i < diag.size(); ++i)
      if (diag[i] > 1e-9) ++positives;
    for (int t = 0; t < n; ++t) {
      bool holds = check_recovery_condition(g.matrices, g.part, t).outcome ==
                   UniquenessOutcome::Holds;
      CHECK(holds == (std::min(positives, negatives) > t));
    }
  }
}

TEST_CASE("split into a psd pair") {
  BlockPartition part(4, {{0}, {1}, {2, 3}});
  auto [x1, x2] = split_psd_pair(diag_matrix({1.0, 1.0, 1.0, -1.0}), part);
  CHECK((x1.dense() - diag_matrix({0.0, 0.0, 0.0, 1.0}).dense()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((x2.dense() - diag_matrix({1.0, 1.0, 1.0, 0.0}).dense()).cwiseAbs().maxCoeff() <= 1e-12);

  SymMatrix h(2);
  h.set(0, 0, 1.0);
  h.set(0, 1, 1.0);
  h.set(1, 1, -1.0);
  auto [h1, h2] = split_psd_pair(h, BlockPartition(2, {{0, 1}}));
  CHECK(min_eigenvalue(h1) >= -1e-12);
  CHECK(min_eigenvalue(h2) >= -1e-12);
  CHECK(((h2 - h1).dense() - h.dense()).cwiseAbs().maxCoeff() <= 1e-12);
  auto e1 = eigen_sym(h1), e2 = eigen_sym(h2);
  CHECK(e1.values[1] == doctest::Approx(std::sqrt(2.0)));
  CHECK(e2.values[1] == doctest::Approx(std::sqrt(2.0)));

  std::mt19937 rng(54);
  SymMatrix psd = testutil::random_psd_block_diag(part, rng);
  auto [p1, p2] = split_psd_pair(psd, part);
  CHECK(p1.maxAbs() <= 1e-10);
  CHECK((p2.dense() - psd.dense()).cwiseAbs().maxCoeff() <= 1e-10);

  CHECK_THROWS_AS(split_psd_pair(SymMatrix::Zero(4), part), std::invalid_argument);
}

TEST_CASE("split postconditions over random kernel elements") {
  std::mt19937 rng(55);
  std::uniform_int_distribution<int> pick(0, 2);
  int done = 0;
  while (done < 200) {
    std::vector<int> sizes;
    const int k = 2 + pick(rng);
    for (int b = 0; b < k; ++b) sizes.push_back(1 + pick(rng) % 2);
    BlockPartition part = BlockPartition::contiguous(sizes);
    std::vector<SymMatrix> mats;
    for (int i = 0; i < 2; ++i) mats.push_back(testutil::random_block_diag(part, rng));
    KernelBasis kb = constraint_kernel(mats, part);
    if (kb.dimension == 0) continue;
    SymMatrix v = kb.basis[static_cast<size_t>(pick(rng)) % kb.basis.size()];
    auto [x1, x2] = split_psd_pair(v, part);
    CHECK(min_eigenvalue(x1) >= -1e-8);
    CHECK(min_eigenvalue(x2) >= -1e-8);
    CHECK(((x2 - x1).dense() - v.dense()).cwiseAbs().maxCoeff() <= 1e-9);
    for (const auto& a : mats)
      CHECK(std::abs(inner_product(a, x1) - inner_product(a, x2)) <= 1e-9);
    SignStats sv = sign_stats(v, part);
    SignStats s1 = sign_stats(x1, part);
    CHECK(s1.sigmaPlus == sv.sigmaMinus);
    ++done;
  }
}

TEST_CASE("empirical singleton verification") {
  // the fixture admits two solutions with the same right-hand side
  Pencil p = testutil::dl_fixture();
  SingletonVerdict nu = verify_unique_solution(all_fixture_matrices(p), p.part(),
                                               diag_matrix({0.5, 0.0, 0.0, 0.5}), 5);
  CHECK(nu.outcome == SingletonOutcome::NotUnique);
  REQUIRE(nu.witnessPair.has_value());
  CHECK((nu.witnessPair->first.dense() - nu.witnessPair->second.dense())
            .cwiseAbs()
            .maxCoeff() > 1e-6);

  // unconstrained scalar case
  SingletonVerdict scalar =
      verify_unique_solution({}, BlockPartition::singletons(1), SymMatrix::Zero(1), 3);
  CHECK(scalar.outcome == SingletonOutcome::NotUnique);

  // a single-block solution of the 2x2-block family is unique
  GeneratedSystem g6 = gen_unique_sdp(6);
  SymMatrix x0(g6.part.n());
  x0.set(0, 0, 1.0);
  SingletonVerdict uq = verify_unique_solution(g6.matrices, g6.part, x0, 5);
  CHECK(uq.outcome == SingletonOutcome::ProbablyUnique);
}

TEST_CASE("uniqueness holds for a solution with negative entries") {
  // sigma+ of this single-block solution is 1 < 2 = n/3
  GeneratedSystem g6 = gen_unique_sdp(6);
  SymMatrix x0(g6.part.n());
  x0.set(0, 0, 2.0);
  x0.set(0, 1, -1.0);
  x0.set(1, 1, 2.0);
  REQUIRE(psd_check(x0));
  SingletonVerdict uq = verify_unique_solution(g6.matrices, g6.part, x0, 5);
  CHECK(uq.outcome == SingletonOutcome::ProbablyUnique);
}

TEST_CASE("family generators") {
  GeneratedSystem g4 = gen_unique_lp(4);
  CHECK(g4.matrices.size() == 3);
  CHECK(g4.part == BlockPartition::singletons(4));
  CHECK((g4.predictedKernel.dense() -
         diag_matrix({0.5, -0.5, 0.5, -0.5}).dense()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(g4.predictedSigma == 2);

  GeneratedSystem g2 = gen_unique_lp(2);
  const double r2 = 1.0 / std::sqrt(2.0);
  CHECK((g2.predictedKernel.dense() - diag_matrix({r2, -r2}).dense()).cwiseAbs().maxCoeff() <=
        1e-12);
  CHECK(g2.predictedSigma == 1);

  // odd n pins the last variable and keeps a 1-dimensional kernel
  GeneratedSystem g5 = gen_unique_lp(5);
  KernelBasis kb5 = constraint_kernel(g5.matrices, g5.part);
  CHECK(kb5.dimension == 1);
  CHECK(std::abs(kb5.basis.front()(4, 4)) <= 1e-9);

  GeneratedSystem s3 = gen_unique_sdp(3);
  CHECK(s3.part.k() == 1);
  SignStats st3 = sign_stats(s3.predictedKernel, s3.part);
  CHECK(st3.sigmaPlus == 1);
  CHECK(st3.sigmaMinus == 1);

  GeneratedSystem s9 = gen_unique_sdp(9);
  CHECK(check_recovery_condition(s9.matrices, s9.part, 2).outcome == UniquenessOutcome::Holds);

  // kernel predictions are genuine kernel elements of unit norm
  for (const GeneratedSystem& g : {gen_unique_lp(6), gen_unique_sdp(6)}) {
    CHECK(inner_product(g.predictedKernel, g.predictedKernel) == doctest::Approx(1.0));
    for (const auto& a : g.matrices)
      CHECK(std::abs(inner_product(a, g.predictedKernel)) <= 1e-12);
  }

  CHECK_THROWS_AS(gen_unique_lp(1), std::invalid_argument);
  CHECK_THROWS_AS(gen_unique_sdp(7), std::invalid_argument);
}

TEST_CASE("fixture pencils match the displayed data") {
  Pencil lin = testutil::dl_fixture();
  Pencil df0 = testutil::deformed_fixture(0.0);
  CHECK((lin.a0().dense() - df0.a0().dense()).cwiseAbs().maxCoeff() == 0.0);
  for (int i = 0; i < 2; ++i)
    CHECK((lin.ai(i).dense() - df0.ai(i).dense()).cwiseAbs().maxCoeff() == 0.0);

  Pencil df1 = testutil::deformed_fixture(1.0);
  SymMatrix b3 = extract_block(df1.a0(), df1.part(), 2);
  CHECK(b3(0, 0) == -1.0);
  CHECK(b3(0, 1) == 1.0);
  CHECK(b3(1, 1) == -2.0);
  CHECK(lin.part() == BlockPartition(4, {{0}, {1}, {2, 3}}));
}

TEST_CASE("largest certifiable threshold never exceeds the halved dimension") {
  // even-dimension family attains floor(n/2) - 1 and nothing above
  for (int n : {4, 6, 8}) {
    GeneratedSystem g = gen_unique_lp(n);
    for (int t = n / 2; t <= n; ++t)
      CHECK(check_recovery_condition(g.matrices, g.part, t).outcome !=
            UniquenessOutcome::Holds);
    CHECK(check_recovery_condition(g.matrices, g.part, n / 2 - 1).outcome ==
          UniquenessOutcome::Holds);
  }
}
