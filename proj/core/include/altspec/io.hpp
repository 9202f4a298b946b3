#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "altspec/pencil.hpp"

namespace altspec::io {

/// Malformed problem file; the message carries position diagnostics when
/// the underlying document fails to parse.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// On-disk problem document: members n, m, blocks (partition of row
/// indices, 0-based), matrices (m+1 upper-triangle triplet lists, entry 0
/// holding the constant matrix).
struct ProblemFile {
  int n = 0;
  std::vector<std::vector<int>> blocks;
  std::vector<SymMatrix> matrices;

  int m() const { return static_cast<int>(matrices.size()) - 1; }
};

ProblemFile parse_problem(const std::string& text);
ProblemFile load_problem(const std::string& path);

/// Canonical emission: matrices in index order, triplets sorted by (i, j),
/// shortest round-trip decimals. Byte-identical for equal inputs.
std::string emit_problem(const ProblemFile& pf);

Pencil to_pencil(const ProblemFile& pf);
ProblemFile from_pencil(const Pencil& p);

/// Sorted [i, j, value] upper-triangle triplets of the nonzero entries.
nlohmann::ordered_json matrix_triplets(const SymMatrix& a);
SymMatrix matrix_from_triplets(int n, const nlohmann::json& triplets);

}  // namespace altspec::io
