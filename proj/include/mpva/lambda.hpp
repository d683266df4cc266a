// Multiplicative lambda-brackets on difference polynomial rings: bracket
// tables on generators (local Laurent-polynomial entries or rational
// operator entries), the master-formula evaluation on arbitrary ring
// elements, Frechet derivatives, operator-level bracket composition, and
// the structure axiom checkers (skewsymmetry, Jacobi, compatibility).

#pragma once

#include <string>
#include <variant>
#include <vector>

#include "mpva/ore.hpp"

namespace mpva {

// Laurent polynomial in the bracket variable with difference-polynomial
// coefficients: sum_k c_k L^k, no zero coefficients stored.
class LambdaPoly {
 public:
  std::map<long, DiffPoly> coeffs;

  LambdaPoly() = default;
  LambdaPoly(const DiffPoly& c) { add_term(0, c); }
  static LambdaPoly monomial(const DiffPoly& c, long k);

  bool is_zero() const { return coeffs.empty(); }
  DiffPoly coeff(long k) const;
  void add_term(long k, const DiffPoly& c);

  LambdaPoly operator+(const LambdaPoly& o) const;
  LambdaPoly operator-(const LambdaPoly& o) const;
  LambdaPoly operator-() const;
  LambdaPoly operator*(const LambdaPoly& o) const;  // L commutes with all
  LambdaPoly scaled(const DiffPoly& c) const;
  LambdaPoly mul_lambda(long k) const;  // multiply by L^k
  friend bool operator==(const LambdaPoly&, const LambdaPoly&) = default;
};

// sum c_k L^k  ->  sum S^{-k}(c_k) L^{-k}; the right-hand side of the
// skewsymmetry axiom is -lambda_adjoint of the opposite bracket.
LambdaPoly lambda_adjoint(const LambdaPoly& p);

// Conversions between bracket polynomials and difference operators with
// the same coefficients (L^k <-> S^k).
DiffOp lambda_to_op(const LambdaPoly& p);
LambdaPoly op_to_lambda(const DiffOp& a);  // finite, polynomial coefficients

// Frechet derivative row: the operator sum_n (da/du_{gen,n}) S^n.
struct FrechetRow {
  int gen = 0;
  DiffOp op;
};
std::vector<FrechetRow> frechet(const DiffPoly& a);

// Table of generator brackets: entry(i, j) represents {u_i L u_j}, either
// as a Laurent polynomial in L (local) or as a rational operator whose
// symbol is the bracket.  Absent entries are zero.
class BracketTable {
 public:
  using Entry = std::variant<LambdaPoly, RatOp>;

  std::vector<int> gens;

  BracketTable() = default;
  explicit BracketTable(std::vector<int> generators)
      : gens(std::move(generators)) {}

  void set(int i, int j, Entry e);
  const Entry* find(int i, int j) const;
  bool all_local() const;

  // Local view; throws RationalEntry when the entry is an operator.
  LambdaPoly local_entry(int i, int j) const;
  // Operator view (symbol = {u_i L u_j}); local entries are lifted.
  RatOp op_entry(int i, int j) const;

  const std::map<std::pair<int, int>, Entry>& entries() const { return e_; }

 private:
  std::map<std::pair<int, int>, Entry> e_;
};

// Entrywise sum; the generator set is the union.
BracketTable table_sum(const BracketTable& a, const BracketTable& b);

// {a_L b} for a local table, by the master formula
//   sum (db/du_{j,n}) S^n( h_{ji;k} S^{k-m}(da/du_{i,m}) ) L^{n-m+k}
// where {u_i L u_j} = sum_k h_{ji;k} L^k.  Throws RationalEntry when the
// table has an operator entry.
LambdaPoly master_bracket(const DiffPoly& a, const DiffPoly& b,
                          const BracketTable& H);

// Operator with symbol {a_L b}, as the composition
//   sum_{i,j}  D_b[j] o H_op(i, j) o D_a[i]^*
// of Frechet rows with the entry operators; works for rational tables.
RatOp bracket_operator(const DiffPoly& a, const DiffPoly& b,
                       const BracketTable& H);

struct CheckReport {
  bool passed = true;
  std::vector<std::string> violations;
};

// {u_i L u_j} = -{u_j L^-1 S^-1 u_i} on all generator pairs; local pairs
// are checked as polynomials, pairs with an operator entry at the exact
// operator level (H_ij + H_ji^* = 0).
CheckReport check_skewsymmetry(const BracketTable& H);

// Jacobi identity
//   {u_i L {u_j M u_k}} - {u_j M {u_i L u_k}} = {{u_i L u_j}_{LM} u_k}
// on all generator triples.  All-local tables are decided exactly; tables
// with operator entries are checked on the coefficient window
// |a|,|b| <= window of L^a M^b against both directed expansions of every
// entry (a truncated oracle, not a proof).
CheckReport check_jacobi(const BracketTable& H, long window = 0);

// Compatibility of two structures = Jacobi for the sum table.
CheckReport check_compatibility(const BracketTable& H, const BracketTable& K,
                                long window = 0);

}  // namespace mpva
