// Exact arithmetic in the skew field V(S) of rational difference operators:
// skew (Laurent) polynomials with the twist S o f = S(f) o S, left and right
// Euclidean division, Ore least common multiples, right fractions
// S^k o num o den^-1, iota+- expansions, symbols, and exact polynomial
// reduction.

#pragma once

#include <map>
#include <optional>

#include "mpva/psdo.hpp"

namespace mpva {

// Skew Laurent polynomial sum_n a_n S^n over DiffFrac; exponents may be
// negative.  The Euclidean algorithms below require genuine polynomial
// inputs (val >= 0).
class SkewPoly {
 public:
  SkewPoly() = default;
  SkewPoly(long v) { set(0, DiffFrac(v)); }
  SkewPoly(const DiffFrac& c) { set(0, c); }
  static SkewPoly monomial(const DiffFrac& c, long n);
  static SkewPoly from_op(const DiffOp& a);  // finite operators only
  DiffOp to_op() const;

  const std::map<long, DiffFrac>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  bool is_one() const;
  long deg() const;  // max exponent; throws on zero
  long val() const;  // min exponent; throws on zero
  DiffFrac coeff(long n) const;
  void set(long n, const DiffFrac& c);

  SkewPoly operator+(const SkewPoly& o) const;
  SkewPoly operator-(const SkewPoly& o) const;
  SkewPoly operator-() const;
  // Twisted product: (a o b) has coefficient sum a_m S^m(b_n) at S^{m+n}.
  SkewPoly operator*(const SkewPoly& o) const;
  bool operator==(const SkewPoly& o) const;

  // sigma^k: apply the shift automorphism to every coefficient
  // (conjugation S^k o a o S^-k).
  SkewPoly conj(long k) const;
  // a o S^k: reindex exponents by +k, coefficients unchanged.
  SkewPoly compose_right_shift(long k) const;
  // S^k o a: reindex by +k and shift coefficients.
  SkewPoly compose_left_shift(long k) const;
  // Formal adjoint a* = sum S^-n o a_n.
  SkewPoly adjoint() const;
  // a applied to a ring element: sum a_n S^n(f).
  DiffFrac apply(const DiffFrac& f) const;

 private:
  std::map<long, DiffFrac> c_;
};

// a = q o b + r with deg r < deg b (left division, quotient on the left).
std::pair<SkewPoly, SkewPoly> left_divmod(const SkewPoly& a,
                                          const SkewPoly& b);
// a = b o q + r with deg r < deg b (right division, quotient on the right).
std::pair<SkewPoly, SkewPoly> right_divmod(const SkewPoly& a,
                                           const SkewPoly& b);

// Least left common multiple cofactors: b1 o b = d1 o d.
std::pair<SkewPoly, SkewPoly> ore_common_multiple(const SkewPoly& b,
                                                  const SkewPoly& d);
// Least common right multiple cofactors: b o b1 = d o d1.
std::pair<SkewPoly, SkewPoly> ore_common_right_multiple(const SkewPoly& b,
                                                        const SkewPoly& d);
// Greatest common right divisor (monic), via the left-division Euclid.
SkewPoly gcrd(SkewPoly a, SkewPoly b);

// Rational difference operator as a right fraction
//
//     r = S^k o num o den^-1
//
// with num, den genuine skew polynomials, num(0) != 0 (val 0) unless
// num = 0, den(0) != 0 and den monic.  Equality is decided semantically by
// subtraction; the monic normal form is only a serialization convention.
class RatOp {
 public:
  RatOp() = default;
  RatOp(long v) : num_(v) {}
  RatOp(const DiffFrac& c) : num_(c) {}
  explicit RatOp(const SkewPoly& p);        // polynomial operator
  static RatOp from_op(const DiffOp& a);    // finite operators only
  static RatOp shift_op(long k);            // S^k
  // S^k o num o den^-1 from arbitrary Laurent num / den.
  static RatOp fraction(const SkewPoly& num, const SkewPoly& den,
                        long k = 0);

  long prefactor() const { return k_; }
  const SkewPoly& num() const { return num_; }
  const SkewPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool den_is_one() const { return den_.is_one(); }

  friend RatOp rat_add(const RatOp& a, const RatOp& b);
  friend RatOp rat_mul(const RatOp& a, const RatOp& b);
  friend RatOp rat_inv(const RatOp& a);
  friend RatOp rat_adjoint(const RatOp& a);

  bool operator==(const RatOp& o) const;

 private:
  SkewPoly num_;      // val 0 when nonzero
  SkewPoly den_ = 1;  // val 0, monic
  long k_ = 0;
  void normalize();
};

inline RatOp rat_sub(const RatOp& a, const RatOp& b) {
  return rat_add(a, rat_mul(RatOp(-1), b));
}
inline RatOp rat_neg(const RatOp& a) { return rat_mul(RatOp(-1), a); }
RatOp rat_pow(const RatOp& a, int k);  // any integer power

// iota+ (Up) / iota- (Down) geometric expansion truncated at the requested
// order: Up keeps exponents < order, Down keeps exponents >= -order.
DiffOp rat_expand(const RatOp& r, Dir direction, long order);

// Half-sum symbol restricted to the window [-window, window].
std::map<long, DiffFrac> rat_symbol(const RatOp& r, long window);

// Exact left division; the Laurent difference operator when den divides
// num (up to the S-power prefactor), nullopt otherwise.
std::optional<DiffOp> rat_is_polynomial(const RatOp& r);

// r applied to a ring element, defined when the result of den^-1 is not
// needed, i.e. when r is polynomial; throws NonlocalResult otherwise.
DiffFrac rat_apply_polynomial(const RatOp& r, const DiffFrac& f);

}  // namespace mpva
