#include <doctest.h>

#include "altspec/io.hpp"
#include "helpers.hpp"

using namespace altspec;

TEST_CASE("problem files round-trip exactly") {
  for (const Pencil& p : {testutil::dl_fixture(), testutil::deformed_fixture(0.5)}) {
    io::ProblemFile pf = io::from_pencil(p);
    std::string text = io::emit_problem(pf);
    io::ProblemFile back = io::parse_problem(text);
    CHECK(back.n == pf.n);
    CHECK(back.blocks == pf.blocks);
    REQUIRE(back.matrices.size() == pf.matrices.size());
    for (size_t i = 0; i < pf.matrices.size(); ++i)
      CHECK((back.matrices[i].dense() - pf.matrices[i].dense()).cwiseAbs().maxCoeff() == 0.0);
    // emission is canonical: re-emitting the parse is byte-identical
    CHECK(io::emit_problem(back) == text);
  }
}

TEST_CASE("round trip preserves exact binary values") {
  io::ProblemFile pf;
  pf.n = 2;
  pf.blocks = {{0}, {1}};
  SymMatrix a(2);
  a.set(0, 0, 1.0 / 3.0);
  a.set(1, 1, -7.25e-13);
  pf.matrices = {a, SymMatrix::Zero(2)};
  io::ProblemFile back = io::parse_problem(io::emit_problem(pf));
  CHECK(back.matrices[0](0, 0) == 1.0 / 3.0);
  CHECK(back.matrices[0](1, 1) == -7.25e-13);
}

TEST_CASE("parse rejects malformed documents with diagnostics") {
  CHECK_THROWS_AS(io::parse_problem("{ truncated"), io::ParseError);
  CHECK_THROWS_AS(io::parse_problem("[]"), io::ParseError);
  CHECK_THROWS_AS(io::parse_problem(R"({"n":2,"m":0,"blocks":[[0],[1]]})"), io::ParseError);
  // wrong matrix count
  CHECK_THROWS_AS(
      io::parse_problem(R"({"n":1,"m":1,"blocks":[[0]],"matrices":[[]]})"), io::ParseError);
  // triplet below the diagonal
  CHECK_THROWS_AS(
      io::parse_problem(R"({"n":2,"m":0,"blocks":[[0],[1]],"matrices":[[[1,0,1.0]]]})"),
      io::ParseError);
  // duplicate triplet
  CHECK_THROWS_AS(
      io::parse_problem(
          R"({"n":2,"m":0,"blocks":[[0],[1]],"matrices":[[[0,0,1.0],[0,0,2.0]]]})"),
      io::ParseError);
  // invalid partition
  CHECK_THROWS_AS(
      io::parse_problem(R"({"n":2,"m":0,"blocks":[[0]],"matrices":[[]]})"), io::ParseError);
  // off-block entries surface when converting to a pencil
  io::ProblemFile pf =
      io::parse_problem(R"({"n":2,"m":0,"blocks":[[0],[1]],"matrices":[[[0,1,1.0]]]})");
  CHECK_THROWS_AS(io::to_pencil(pf), io::ParseError);
}

TEST_CASE("triplets are sorted and scientific notation is accepted") {
  SymMatrix a(3);
  a.set(2, 2, 3.0);
  a.set(0, 1, 2.0);
  a.set(0, 0, 1.0);
  auto trips = io::matrix_triplets(a);
  REQUIRE(trips.size() == 3);
  CHECK(trips[0][0] == 0);
  CHECK(trips[0][1] == 0);
  CHECK(trips[1][1] == 1);
  CHECK(trips[2][0] == 2);

  io::ProblemFile pf = io::parse_problem(
      R"({"n":1,"m":0,"blocks":[[0]],"matrices":[[[0,0,2.5e-3]]]})");
  CHECK(pf.matrices[0](0, 0) == 2.5e-3);
}
