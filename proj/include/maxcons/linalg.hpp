// Exact sparse linear algebra over Q and dense rank modulo a prime.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "maxcons/poly.hpp"
#include "maxcons/rational.hpp"

namespace maxcons {

using SparseVec = std::vector<std::pair<std::uint32_t, Rational>>;  // sorted by column

void axpy(SparseVec& y, const Rational& a, const SparseVec& x);  // y += a x
SparseVec make_sparse(std::vector<std::pair<std::uint32_t, Rational>> entries);

// Row echelon form built incrementally. Pivot rows are normalized to a leading 1.
class Echelon {
 public:
  // Returns true when the row is independent of the rows inserted so far.
  bool insert(SparseVec row);
  SparseVec reduce(SparseVec row) const;
  bool in_span(const SparseVec& row) const { return reduce(row).empty(); }
  std::size_t rank() const { return pivots_.size(); }
  bool has_pivot(std::uint32_t col) const { return pivots_.count(col) != 0; }

  // Treats column `nvars` as the right-hand side. Returns a solution with free variables 0.
  std::optional<std::vector<Rational>> solve(std::uint32_t nvars) const;
  // Basis of the kernel for a homogeneous system in `nvars` unknowns.
  std::vector<std::vector<Rational>> nullspace(std::uint32_t nvars) const;

 private:
  std::map<std::uint32_t, SparseVec> pivots_;
};

// Assigns dense column ids to (component, monomial, scalar part) triples.
class ColumnIndex {
 public:
  explicit ColumnIndex(int components) : ncomp_(components) {}
  SparseVec flatten(const std::vector<Poly>& comps);
  std::uint32_t monomial_count() const { return static_cast<std::uint32_t>(ids_.size()); }

 private:
  int ncomp_;
  std::map<Monomial, std::uint32_t> ids_;
};

constexpr std::uint64_t kRankPrime = 2305843009213693951ull;  // 2^61 - 1

// Rank of a dense matrix over F_p; rows are reduced in place.
std::size_t rank_mod_p(std::vector<std::vector<std::uint64_t>> rows, std::uint64_t p = kRankPrime);

// Exact rank over Q of a dense rational matrix.
std::size_t rank_rational(const std::vector<std::vector<Rational>>& rows);

}  // namespace maxcons
