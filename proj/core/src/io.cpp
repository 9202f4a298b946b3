#include "altspec/io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace altspec::io {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void require(bool cond, const std::string& msg) {
  if (!cond) throw ParseError(msg);
}

}  // namespace

nlohmann::ordered_json matrix_triplets(const SymMatrix& a) {
  ordered_json trips = ordered_json::array();
  for (int i = 0; i < a.dim(); ++i)
    for (int j = i; j < a.dim(); ++j)
      if (a(i, j) != 0.0) trips.push_back(ordered_json::array({i, j, a(i, j)}));
  return trips;
}

SymMatrix matrix_from_triplets(int n, const nlohmann::json& triplets) {
  require(triplets.is_array(), "matrix entry is not a triplet list");
  SymMatrix a(n);
  std::set<std::pair<int, int>> seen;
  for (const auto& t : triplets) {
    require(t.is_array() && t.size() == 3, "triplet is not [i, j, value]");
    require(t[0].is_number_integer() && t[1].is_number_integer(), "triplet indices not integers");
    const int i = t[0].get<int>();
    const int j = t[1].get<int>();
    require(0 <= i && i <= j && j < n, "triplet index out of range or lower-triangle");
    require(seen.insert({i, j}).second, "duplicate triplet position");
    require(t[2].is_number(), "triplet value is not a number");
    const double v = t[2].get<double>();
    require(std::isfinite(v), "triplet value is not finite");
    a.set(i, j, v);
  }
  return a;
}

ProblemFile parse_problem(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("problem file: ") + e.what());
  }
  require(doc.is_object(), "problem file: top level is not an object");
  for (const char* key : {"n", "m", "blocks", "matrices"})
    require(doc.contains(key), std::string("problem file: missing member '") + key + "'");

  ProblemFile pf;
  require(doc["n"].is_number_integer(), "member 'n' is not an integer");
  require(doc["m"].is_number_integer(), "member 'm' is not an integer");
  pf.n = doc["n"].get<int>();
  const int m = doc["m"].get<int>();
  require(pf.n >= 1, "member 'n' must be positive");
  require(m >= 0, "member 'm' must be nonnegative");

  require(doc["blocks"].is_array(), "member 'blocks' is not a list");
  for (const auto& blk : doc["blocks"]) {
    require(blk.is_array(), "block is not an index list");
    std::vector<int> idx;
    for (const auto& v : blk) {
      require(v.is_number_integer(), "block index is not an integer");
      idx.push_back(v.get<int>());
    }
    pf.blocks.push_back(std::move(idx));
  }

  require(doc["matrices"].is_array() && static_cast<int>(doc["matrices"].size()) == m + 1,
          "member 'matrices' must hold m + 1 entries");
  for (const auto& mat : doc["matrices"]) pf.matrices.push_back(matrix_from_triplets(pf.n, mat));

  try {
    BlockPartition check(pf.n, pf.blocks);
  } catch (const std::exception& e) {
    throw ParseError(std::string("member 'blocks': ") + e.what());
  }
  return pf;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open problem file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

std::string emit_problem(const ProblemFile& pf) {
  ordered_json doc;
  doc["n"] = pf.n;
  doc["m"] = pf.m();
  doc["blocks"] = pf.blocks;
  ordered_json mats = ordered_json::array();
  for (const auto& a : pf.matrices) mats.push_back(matrix_triplets(a));
  doc["matrices"] = std::move(mats);
  return doc.dump(2) + "\n";
}

Pencil to_pencil(const ProblemFile& pf) {
  if (pf.matrices.empty()) throw ParseError("problem file holds no matrices");
  std::vector<SymMatrix> rest(pf.matrices.begin() + 1, pf.matrices.end());
  try {
    return Pencil(pf.matrices.front(), std::move(rest), BlockPartition(pf.n, pf.blocks));
  } catch (const std::exception& e) {
    throw ParseError(std::string("problem file: ") + e.what());
  }
}

ProblemFile from_pencil(const Pencil& p) {
  ProblemFile pf;
  pf.n = p.n();
  pf.blocks = p.part().blocks();
  pf.matrices.push_back(p.a0());
  for (int i = 0; i < p.m(); ++i) pf.matrices.push_back(p.ai(i));
  return pf;
}

}  // namespace altspec::io
