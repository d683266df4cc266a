// Core arithmetic in the Laurent difference polynomial ring
//
//     V = Q[ u_{i,n}^{+-1} | i in gens, n in Z ]
//
// with the shift automorphism S(u_{i,n}) = u_{i,n+1}, its fraction field,
// partial and variational derivatives, and the quotient map onto
// functionals V/(S-1)V.
//
// All values are immutable after construction; every operation is a pure
// function.  Coefficients are exact rationals of unbounded size (GMP).

#pragma once

#include <gmpxx.h>

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mpva {

// Arbitrary-precision rational; mpq_class is kept in canonical form
// (den > 0, gcd(|num|, den) = 1) automatically.
using Scalar = mpq_class;

inline bool scalar_is_zero(const Scalar& s) { return sgn(s) == 0; }

// A single variable u_{gen,shift}.  Generator indices follow the source
// structure (they may be zero or negative, e.g. for generic-operator
// coefficient rings indexed downwards from N-1).
struct VarRef {
  int gen = 0;
  long shift = 0;
  friend auto operator<=>(const VarRef&, const VarRef&) = default;
};

// Laurent monomial: finite map VarRef -> nonzero integer exponent.
class Monomial {
 public:
  std::map<VarRef, int> factors;

  Monomial() = default;
  static Monomial var(int gen, long shift, int exp = 1);

  bool is_one() const { return factors.empty(); }
  Monomial operator*(const Monomial& o) const;
  Monomial pow(int k) const;
  Monomial inverse() const { return pow(-1); }
  Monomial shifted(long k) const;

  // Minimal shift index occurring in the monomial (0 for the constant
  // monomial); used for orbit canonicalization.
  long min_shift() const;
  bool is_constant() const { return factors.empty(); }

  friend bool operator==(const Monomial&, const Monomial&) = default;
  // Deterministic term order: lexicographic on the sequence of
  // (gen, shift, exponent) triples.
  bool lex_less(const Monomial& o) const;
};

struct MonoOrder {
  bool operator()(const Monomial& a, const Monomial& b) const {
    return a.lex_less(b);
  }
};

// Exact sparse Laurent difference polynomial: finite map Monomial -> Scalar
// with no zero coefficients stored; the empty map is zero.
class DiffPoly {
 public:
  std::map<Monomial, Scalar, MonoOrder> terms;

  DiffPoly() = default;
  DiffPoly(long v);
  DiffPoly(const Scalar& v);
  static DiffPoly var(int gen, long shift, int exp = 1);
  static DiffPoly term(const Scalar& c, const Monomial& m);

  bool is_zero() const { return terms.empty(); }
  bool is_constant() const;
  bool is_one() const;
  // Single-term test (terms are units of the Laurent ring when invertible).
  bool is_term() const { return terms.size() == 1; }
  Scalar constant_term() const;

  DiffPoly operator+(const DiffPoly& o) const;
  DiffPoly operator-(const DiffPoly& o) const;
  DiffPoly operator-() const;
  DiffPoly operator*(const DiffPoly& o) const;
  DiffPoly& operator+=(const DiffPoly& o);
  DiffPoly& operator-=(const DiffPoly& o);
  DiffPoly scaled(const Scalar& c) const;
  // k >= 0 for general polynomials; any k for single terms.
  DiffPoly pow(int k) const;
  // Inverse of a single-term polynomial (unit of the Laurent ring).
  DiffPoly term_inverse() const;

  friend bool operator==(const DiffPoly&, const DiffPoly&) = default;

  // Largest term under the fixed order.
  std::pair<Monomial, Scalar> leading_term() const;

  void add_term(const Monomial& m, const Scalar& c);
};

DiffPoly shift(const DiffPoly& p, long k);
DiffPoly partial(const DiffPoly& p, int gen, long n);
// delta h / delta u_gen = sum_n S^{-n} (partial h / partial u_{gen,n})
DiffPoly variational_derivative(const DiffPoly& h, int gen);

// The (gen, shift) pairs occurring in p.
std::set<std::pair<int, long>> support_vars(const DiffPoly& p);
std::set<int> support_gens(const DiffPoly& p);

// Exact division in the Laurent ring; nullopt when den does not divide num.
std::optional<DiffPoly> exact_divide(const DiffPoly& num, const DiffPoly& den);

// Greatest common divisor in the Laurent ring, up to a unit; normalized to
// leading coefficient 1.  poly_gcd(0, b) = b.
DiffPoly poly_gcd(const DiffPoly& a, const DiffPoly& b);

// Fraction num/den over the difference ring.  den is normalized by dividing
// num and den through by den's leading term (a unit of the Laurent ring);
// equality is decided by cross-multiplication.  Simplification (exact
// division of den into num) is best-effort and never required for
// correctness.
class DiffFrac {
 public:
  DiffFrac() : num_(), den_(1) {}
  DiffFrac(long v) : num_(v), den_(1) {}
  DiffFrac(const Scalar& v) : num_(v), den_(1) {}
  DiffFrac(const DiffPoly& p) : num_(p), den_(1) {}
  DiffFrac(DiffPoly num, DiffPoly den);

  const DiffPoly& num() const { return num_; }
  const DiffPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_one(); }
  // Throws if the denominator did not cancel.
  const DiffPoly& as_poly() const;

  DiffFrac operator+(const DiffFrac& o) const;
  DiffFrac operator-(const DiffFrac& o) const;
  DiffFrac operator-() const;
  DiffFrac operator*(const DiffFrac& o) const;
  DiffFrac operator/(const DiffFrac& o) const;
  DiffFrac inverse() const;

  bool operator==(const DiffFrac& o) const;

 private:
  void normalize();
  // Construction from parts already known to share no factor; skips the gcd.
  static DiffFrac reduced(DiffPoly num, DiffPoly den);
  friend DiffFrac shift(const DiffFrac& f, long k);
  DiffPoly num_, den_;
};

DiffFrac shift(const DiffFrac& f, long k);

// Canonical representative of a difference polynomial modulo (S-1)V:
// every monomial is shifted so that its minimal shift index is 0, and
// coefficients of identical representatives are summed.  Constants are
// fixed by S and survive unchanged.
struct Functional {
  DiffPoly rep;
  friend bool operator==(const Functional&, const Functional&) = default;
  bool is_zero() const { return rep.is_zero(); }
};

Functional canonical_functional(const DiffPoly& p);

// Telescoping solvers: find a with (S-1)a = g, resp. b with (S+1)b = g.
// Work orbit-by-orbit; return nullopt when an orbit sum (plain resp.
// alternating) or the constant-term condition obstructs the solution.
std::optional<DiffPoly> solve_S_minus_1(const DiffPoly& g);
std::optional<DiffPoly> solve_S_plus_1(const DiffPoly& g);

}  // namespace mpva
