// Truncation-aware pseudodifference operator arithmetic in V((S)) and
// V((S^-1)): products, adjoints, parts, residues, powers, symbols.
//
// An operator is a finite window of resolved coefficients plus an optional
// truncation marker: for a Down-directed series (powers unbounded below),
// trunc = t records an unresolved tail O(S^t); every stored exponent is
// strictly above t.  Truncation propagates pessimistically through products
// and any read past the marker throws TruncationAmbiguity instead of
// silently returning 0.

#pragma once

#include <map>
#include <optional>

#include "mpva/diffring.hpp"
#include "mpva/errors.hpp"

namespace mpva {

enum class Dir { Down, Up, Finite };

class DiffOp {
 public:
  DiffOp() : dir_(Dir::Finite) {}
  explicit DiffOp(Dir d) : dir_(d) {}
  static DiffOp monomial(const DiffFrac& c, long n);  // c * S^n, Finite
  static DiffOp constant(const DiffFrac& c) { return monomial(c, 0); }

  Dir dir() const { return dir_; }
  std::optional<long> trunc() const { return trunc_; }
  const std::map<long, DiffFrac>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty() && !trunc_; }

  // Resolved coefficient read; throws TruncationAmbiguity past the marker.
  DiffFrac coeff(long n) const;
  bool resolved(long n) const;

  void set_coeff(long n, const DiffFrac& c);
  void set_trunc(Dir d, long t);  // also fixes the direction
  long lo() const;                // smallest stored exponent
  long hi() const;                // largest stored exponent

  friend bool operator==(const DiffOp&, const DiffOp&);

 private:
  Dir dir_;
  std::map<long, DiffFrac> coeffs_;
  std::optional<long> trunc_;
  void drop_hidden();
};

DiffOp op_add(const DiffOp& a, const DiffOp& b);
DiffOp op_sub(const DiffOp& a, const DiffOp& b);
DiffOp op_neg(const DiffOp& a);
DiffOp op_scale(const DiffOp& a, const DiffFrac& c);
DiffOp op_mul(const DiffOp& a, const DiffOp& b);
DiffOp op_adjoint(const DiffOp& a);
// (positive part: powers >= 0, negative part: powers <= -1)
std::pair<DiffOp, DiffOp> op_parts(const DiffOp& a);
DiffFrac op_mres(const DiffOp& a);
DiffOp op_power(const DiffOp& a, int k);
DiffOp commutator(const DiffOp& a, const DiffOp& b);
// The symbol is the identity reindexing S^n -> z^n of resolved coefficients.
std::map<long, DiffFrac> op_symbol(const DiffOp& a);
// Apply the shift automorphism coefficientwise: S^k . a . S^-k.
DiffOp op_conjugate_shift(const DiffOp& a, long k);
// a(S) applied to a ring element: sum a_n S^n(f).
DiffFrac op_apply(const DiffOp& a, const DiffFrac& f);

struct GenericOperatorSpec {
  int N = 1;       // order
  int depth = 0;   // retained lower coefficients below the leading ones
  bool monic = true;  // u_N = 1 gauge; otherwise u_N is a free generator
};

// S^N + u_{N-1} S^{N-1} + ... + u_{N-1-depth} S^{N-1-depth} + O(lower),
// generators indexed by their coefficient index.
DiffOp make_generic(const GenericOperatorSpec& spec);

}  // namespace mpva
