#include <doctest.h>

#include <algorithm>
#include <random>

#include "altspec/altsys.hpp"
#include "helpers.hpp"

using namespace altspec;
using testutil::diag_matrix;

TEST_CASE("classify: infeasible fixture, feasible subsystem, empty pencil") {
  Pencil p = testutil::dl_fixture();

  FeasibilityStatus full = classify(p);
  REQUIRE(full.verdict == Verdict::WeaklyInfeasible);
  REQUIRE(full.certificate.has_value());
  CHECK(full.certificate->maxEqResidual <= 1e-7);
  CHECK(full.certificate->affineResidual <= 1e-7);
  CHECK(full.certificate->minEigenvalue >= -1e-8);
  // recompute the residuals independently
  MembershipResiduals r = membership_residual(p, full.certificate->X);
  CHECK(r.maxEq == doctest::Approx(full.certificate->maxEqResidual).epsilon(1e-12));
  CHECK(r.affine == doctest::Approx(full.certificate->affineResidual).epsilon(1e-12));

  FeasibilityStatus sub = classify(subsystem(p, {1, 2}));
  REQUIRE(sub.verdict == Verdict::WeaklyFeasible);
  REQUIRE_FALSE(sub.epsilonWitnesses.empty());
  Pencil ps = subsystem(p, {1, 2});
  for (const auto& [eps, y] : sub.epsilonWitnesses) {
    SymMatrix shifted = evaluate(ps, y) + eps * SymMatrix::Identity(ps.n());
    CHECK(min_eigenvalue(shifted) >= -1e-9);
  }

  FeasibilityStatus empty = classify(subsystem(p, {}));
  CHECK(empty.verdict == Verdict::WeaklyFeasible);
}

TEST_CASE("membership residuals") {
  Pencil p = testutil::deformed_fixture(1.0);
  MembershipResiduals member = membership_residual(p, testutil::member_right());
  CHECK(member.maxEq <= 1e-12);
  CHECK(member.affine <= 1e-12);
  CHECK(member.minEig >= -1e-12);

  MembershipResiduals zero = membership_residual(p, SymMatrix::Zero(4));
  CHECK(zero.maxEq == 0.0);
  CHECK(zero.affine == 1.0);
  CHECK(zero.minEig == 0.0);

  // projecting a random psd block matrix onto the equality constraints
  // kills the first two residuals
  std::mt19937 rng(41);
  Vectorizer vec(p.part());
  Eigen::MatrixXd rows(p.m() + 1, vec.dim());
  Eigen::VectorXd rhs(p.m() + 1);
  for (int i = 0; i < p.m(); ++i) {
    rows.row(i) = vec.toVec(p.ai(i)).transpose();
    rhs[i] = 0.0;
  }
  rows.row(p.m()) = vec.toVec(p.a0()).transpose();
  rhs[p.m()] = -1.0;
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd x = vec.toVec(testutil::random_psd_block_diag(p.part(), rng));
    Eigen::VectorXd corr = rows.transpose() *
                           (rows * rows.transpose()).ldlt().solve(rows * x - rhs);
    MembershipResiduals proj = membership_residual(p, vec.toMat(x - corr));
    CHECK(proj.maxEq <= 1e-9);
    CHECK(proj.affine <= 1e-9);
  }
}

TEST_CASE("is_extreme on the deformed fixture") {
  Pencil p = testutil::deformed_fixture(1.0);

  AltPoint right = make_alt_point(p, testutil::member_right());
  ExtremeTest t1 = is_extreme(p, right);
  CHECK(t1.extreme);

  // midpoint of the two displayed members is a strict convex combination
  SymMatrix mid = 0.5 * testutil::member_left() + 0.5 * testutil::member_right();
  ExtremeTest t2 = is_extreme(p, make_alt_point(p, mid));
  CHECK_FALSE(t2.extreme);
  REQUIRE(t2.direction.has_value());
  CHECK(t2.direction->maxAbs() > 1e-8);
  // the direction is feasible for the homogeneous equations
  for (int i = 0; i < p.m(); ++i)
    CHECK(std::abs(inner_product(p.ai(i), *t2.direction)) <= 1e-8);
  CHECK(std::abs(inner_product(p.a0(), *t2.direction)) <= 1e-8);

  // interior point of the (X44, X34) region, eps = 1
  const double eps = 1.0, x44 = 0.25, x34 = 0.2;
  SymMatrix interior(4);
  interior.set(0, 0, 1.0 - x44 + 2.0 * eps * x34);
  interior.set(1, 1, 0.5 - x44 + eps * x34);
  interior.set(2, 2, 0.5 - x44 + eps * x34);
  interior.set(2, 3, x34);
  interior.set(3, 3, x44);
  AltPoint ip = make_alt_point(p, interior);
  CHECK(ip.maxEqResidual <= 1e-12);
  CHECK(ip.affineResidual <= 1e-12);
  CHECK(ip.minEigenvalue >= 0.0);
  CHECK_FALSE(is_extreme(p, ip).extreme);
}

TEST_CASE("purify reduces to extreme points") {
  Pencil dl = testutil::dl_fixture();
  SymMatrix v1 = diag_matrix({1.0, 0.5, 0.5, 0.0});
  SymMatrix v2 = diag_matrix({0.5, 0.0, 0.0, 0.5});

  // already extreme input is a fixed point
  AltPoint fixed = purify(dl, make_alt_point(dl, v2));
  CHECK((fixed.X.dense() - v2.dense()).cwiseAbs().maxCoeff() <= 1e-7);

  // midpoint lands on one of the two vertices
  AltPoint mid = purify(dl, make_alt_point(dl, 0.5 * v1 + 0.5 * v2));
  const double d1 = (mid.X.dense() - v1.dense()).cwiseAbs().maxCoeff();
  const double d2 = (mid.X.dense() - v2.dense()).cwiseAbs().maxCoeff();
  CHECK(std::min(d1, d2) <= 1e-7);

  // random strict convex combinations on the deformed fixture purify to
  // extreme members with support inside the original support
  Pencil df = testutil::deformed_fixture(1.0);
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> unif(0.1, 0.9);
  for (int trial = 0; trial < 5; ++trial) {
    const double lam = unif(rng);
    SymMatrix x = lam * testutil::member_left() + (1.0 - lam) * testutil::member_right();
    AltPoint in = make_alt_point(df, x);
    AltPoint out = purify(df, in);
    CHECK(is_extreme(df, out).extreme);
    MembershipResiduals r = membership_residual(df, out.X);
    CHECK(r.maxEq <= 1e-7);
    CHECK(r.affine <= 1e-7);
    CHECK(r.minEig >= -1e-8);
    for (int b : out.support)
      CHECK(std::find(in.support.begin(), in.support.end(), b) != in.support.end());
  }
}

TEST_CASE("restricted alternative classification") {
  Pencil p = testutil::dl_fixture();

  FeasibilityStatus on13 = restricted_alt(p, {0, 2});
  REQUIRE(on13.verdict == Verdict::WeaklyInfeasible);
  REQUIRE(on13.certificate.has_value());
  CHECK(on13.certificate->X.dim() == 4);
  for (int b : on13.certificate->support) CHECK((b == 0 || b == 2));
  MembershipResiduals r = membership_residual(p, on13.certificate->X);
  CHECK(r.maxEq <= 1e-7);
  CHECK(r.affine <= 1e-7);

  CHECK(restricted_alt(p, {}).verdict == Verdict::WeaklyFeasible);
  CHECK(restricted_alt(p, {1, 2}).verdict == Verdict::WeaklyFeasible);
}

TEST_CASE("strict kernel point") {
  // no constraints at all: the scaled identity works
  Pencil free(SymMatrix::Identity(2), {SymMatrix::Zero(2)}, BlockPartition::singletons(2));
  auto xbar = strict_kernel_point(free);
  REQUIRE(xbar.has_value());
  CHECK(min_eigenvalue(*xbar) > 1e-6);

  // the decomposable fixture's constraint kernel contains positive diagonals
  auto xdl = strict_kernel_point(testutil::dl_fixture());
  REQUIRE(xdl.has_value());
  CHECK(min_eigenvalue(*xdl) > 1e-6);
  Pencil p = testutil::dl_fixture();
  for (int i = 0; i < p.m(); ++i) CHECK(std::abs(inner_product(p.ai(i), *xdl)) <= 1e-7);

  // constraints spanning all diagonal matrices force the kernel to zero
  SymMatrix e1(2), e2(2);
  e1.set(0, 0, 1.0);
  e2.set(1, 1, 1.0);
  Pencil pinned(SymMatrix::Identity(2), {e1, e2}, BlockPartition::singletons(2));
  CHECK_FALSE(strict_kernel_point(pinned).has_value());
}

TEST_CASE("per-block non-triviality scan") {
  auto dl = check_assumption_nontrivial(testutil::dl_fixture());
  REQUIRE(dl.size() == 3);
  for (const auto& fs : dl) CHECK(fs.verdict == Verdict::WeaklyFeasible);

  auto df = check_assumption_nontrivial(testutil::deformed_fixture(1.0));
  for (const auto& fs : df) CHECK(fs.verdict == Verdict::WeaklyFeasible);

  SymMatrix neg(1);
  neg.set(0, 0, -1.0);
  Pencil bad(neg, {}, BlockPartition::singletons(1));
  auto scan = check_assumption_nontrivial(bad);
  REQUIRE(scan.size() == 1);
  CHECK(scan[0].verdict == Verdict::WeaklyInfeasible);
}
