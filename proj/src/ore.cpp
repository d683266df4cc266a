#include "mpva/ore.hpp"

#include <algorithm>

namespace mpva {

namespace {

// Work budget for best-effort normalization passes (right-divisor
// cancellation).  Inactive (-1) for the mandatory arithmetic paths.
thread_local long skew_budget = -1;
struct SkewBudgetExceeded {};

void skew_charge(size_t work) {
  if (skew_budget < 0) return;
  skew_budget -= static_cast<long>(work);
  if (skew_budget < 0) throw SkewBudgetExceeded{};
}

size_t frac_weight(const DiffFrac& f) {
  return f.num().terms.size() + f.den().terms.size();
}

}  // namespace

// ---------------------------------------------------------------------------
// SkewPoly

SkewPoly SkewPoly::monomial(const DiffFrac& c, long n) {
  SkewPoly r;
  r.set(n, c);
  return r;
}

SkewPoly SkewPoly::from_op(const DiffOp& a) {
  if (a.trunc())
    throw TruncationAmbiguity("SkewPoly::from_op: operator is truncated");
  SkewPoly r;
  for (const auto& [n, c] : a.coeffs()) r.set(n, c);
  return r;
}

DiffOp SkewPoly::to_op() const {
  DiffOp r;
  for (const auto& [n, c] : c_) r.set_coeff(n, c);
  return r;
}

bool SkewPoly::is_one() const {
  return c_.size() == 1 && c_.begin()->first == 0 &&
         c_.begin()->second == DiffFrac(1);
}

long SkewPoly::deg() const {
  if (c_.empty()) throw std::domain_error("SkewPoly::deg of zero");
  return c_.rbegin()->first;
}

long SkewPoly::val() const {
  if (c_.empty()) throw std::domain_error("SkewPoly::val of zero");
  return c_.begin()->first;
}

DiffFrac SkewPoly::coeff(long n) const {
  auto it = c_.find(n);
  return it == c_.end() ? DiffFrac() : it->second;
}

void SkewPoly::set(long n, const DiffFrac& c) {
  if (c.is_zero())
    c_.erase(n);
  else
    c_[n] = c;
}

SkewPoly SkewPoly::operator+(const SkewPoly& o) const {
  SkewPoly r = *this;
  for (const auto& [n, c] : o.c_) r.set(n, r.coeff(n) + c);
  return r;
}

SkewPoly SkewPoly::operator-(const SkewPoly& o) const {
  SkewPoly r = *this;
  for (const auto& [n, c] : o.c_) r.set(n, r.coeff(n) - c);
  return r;
}

SkewPoly SkewPoly::operator-() const {
  SkewPoly r;
  for (const auto& [n, c] : c_) r.c_[n] = -c;
  return r;
}

SkewPoly SkewPoly::operator*(const SkewPoly& o) const {
  SkewPoly r;
  for (const auto& [m, am] : c_)
    for (const auto& [n, bn] : o.c_) {
      skew_charge(frac_weight(am) * frac_weight(bn));
      r.set(m + n, r.coeff(m + n) + am * shift(bn, m));
    }
  return r;
}

bool SkewPoly::operator==(const SkewPoly& o) const {
  if (c_.size() != o.c_.size()) return false;
  for (const auto& [n, c] : c_) {
    auto it = o.c_.find(n);
    if (it == o.c_.end() || !(it->second == c)) return false;
  }
  return true;
}

SkewPoly SkewPoly::conj(long k) const {
  SkewPoly r;
  for (const auto& [n, c] : c_) r.c_[n] = shift(c, k);
  return r;
}

SkewPoly SkewPoly::compose_right_shift(long k) const {
  SkewPoly r;
  for (const auto& [n, c] : c_) r.c_[n + k] = c;
  return r;
}

SkewPoly SkewPoly::compose_left_shift(long k) const {
  SkewPoly r;
  for (const auto& [n, c] : c_) r.c_[n + k] = shift(c, k);
  return r;
}

SkewPoly SkewPoly::adjoint() const {
  SkewPoly r;
  for (const auto& [n, c] : c_) r.c_[-n] = shift(c, -n);
  return r;
}

DiffFrac SkewPoly::apply(const DiffFrac& f) const {
  DiffFrac r;
  for (const auto& [n, c] : c_) r = r + c * shift(f, n);
  return r;
}

// ---------------------------------------------------------------------------
// Euclidean division and Ore conditions

std::pair<SkewPoly, SkewPoly> left_divmod(const SkewPoly& a,
                                          const SkewPoly& b) {
  if (b.is_zero()) throw OreFailure("left_divmod: division by zero");
  SkewPoly q, r = a;
  const long e = b.deg();
  const DiffFrac btop = b.coeff(e);
  while (!r.is_zero() && r.deg() >= e) {
    long t = r.deg() - e;
    DiffFrac qt = r.coeff(r.deg()) / shift(btop, t);
    q.set(t, q.coeff(t) + qt);
    r = r - SkewPoly::monomial(qt, t) * b;
  }
  return {q, r};
}

std::pair<SkewPoly, SkewPoly> right_divmod(const SkewPoly& a,
                                           const SkewPoly& b) {
  if (b.is_zero()) throw OreFailure("right_divmod: division by zero");
  SkewPoly q, r = a;
  const long e = b.deg();
  const DiffFrac btop = b.coeff(e);
  while (!r.is_zero() && r.deg() >= e) {
    long t = r.deg() - e;
    DiffFrac qt = shift(r.coeff(r.deg()) / btop, -e);
    q.set(t, q.coeff(t) + qt);
    r = r - b * SkewPoly::monomial(qt, t);
  }
  return {q, r};
}

std::pair<SkewPoly, SkewPoly> ore_common_multiple(const SkewPoly& b,
                                                  const SkewPoly& d) {
  if (b.is_zero() || d.is_zero())
    throw OreFailure("ore_common_multiple: zero argument");
  // Extended left-division Euclid with r_i = u_i o b + v_i o d.
  SkewPoly r0 = b, r1 = d;
  SkewPoly u0 = 1, v0, u1, v1 = 1;
  while (!r1.is_zero()) {
    auto [q, r2] = left_divmod(r0, r1);
    SkewPoly u2 = u0 - q * u1, v2 = v0 - q * v1;
    r0 = r1; r1 = r2;
    u0 = u1; u1 = u2;
    v0 = v1; v1 = v2;
  }
  // u1 o b = -v1 o d is the least left common multiple.
  return {u1, -v1};
}

std::pair<SkewPoly, SkewPoly> ore_common_right_multiple(const SkewPoly& b,
                                                        const SkewPoly& d) {
  if (b.is_zero() || d.is_zero())
    throw OreFailure("ore_common_right_multiple: zero argument");
  // Extended right-division Euclid with r_i = b o u_i + d o v_i.
  SkewPoly r0 = b, r1 = d;
  SkewPoly u0 = 1, v0, u1, v1 = 1;
  while (!r1.is_zero()) {
    auto [q, r2] = right_divmod(r0, r1);
    SkewPoly u2 = u0 - u1 * q, v2 = v0 - v1 * q;
    r0 = r1; r1 = r2;
    u0 = u1; u1 = u2;
    v0 = v1; v1 = v2;
  }
  return {u1, -v1};
}

SkewPoly gcrd(SkewPoly a, SkewPoly b) {
  if (a.is_zero()) std::swap(a, b);
  while (!b.is_zero()) {
    auto [q, r] = left_divmod(a, b);
    a = b;
    b = r;
  }
  if (a.is_zero()) return a;
  // Left-multiplying by a function preserves right divisors; make monic.
  return SkewPoly(a.coeff(a.deg()).inverse()) * a;
}

// ---------------------------------------------------------------------------
// RatOp

RatOp::RatOp(const SkewPoly& p) : num_(p) { normalize(); }

RatOp RatOp::from_op(const DiffOp& a) { return RatOp(SkewPoly::from_op(a)); }

RatOp RatOp::shift_op(long k) {
  RatOp r(1);
  r.k_ = k;
  return r;
}

RatOp RatOp::fraction(const SkewPoly& num, const SkewPoly& den, long k) {
  if (den.is_zero()) throw OreFailure("RatOp: zero denominator");
  RatOp r;
  r.num_ = num;
  r.den_ = den;
  r.k_ = k;
  r.normalize();
  return r;
}

void RatOp::normalize() {
  if (num_.is_zero()) {
    den_ = 1;
    k_ = 0;
    return;
  }
  // Push S-power content of the denominator onto both parts:
  // N o (D o S^j)^-1 = (N o S^-j) o D^-1.
  long j = den_.val();
  if (j != 0) {
    den_ = den_.compose_right_shift(-j);
    num_ = num_.compose_right_shift(-j);
  }
  // Extract the numerator's S-power content into the left prefactor:
  // N = S^v o (S^-v o N).
  long v = num_.val();
  if (v != 0) {
    k_ += v;
    num_ = num_.compose_left_shift(-v);
  }
  // Cancel the greatest common right divisor.  This is a normalization
  // nicety, not needed for correctness, so the attempt runs under a work
  // budget and is abandoned when the Euclid chain gets too expensive.
  if (!den_.is_one() && den_.deg() >= 1) {
    long saved = skew_budget;
    skew_budget = 400'000;
    try {
      SkewPoly g = gcrd(num_, den_);
      if (!g.is_zero() && g.deg() >= 1) {
        auto [qn, rn] = left_divmod(num_, g);
        auto [qd, rd] = left_divmod(den_, g);
        if (rn.is_zero() && rd.is_zero()) {
          num_ = qn;
          den_ = qd;
        }
      }
    } catch (const SkewBudgetExceeded&) {
      // keep the uncancelled fraction
    }
    skew_budget = saved;
  }
  // A degree-0 denominator is a function: absorb it.
  if (!den_.is_zero() && den_.deg() == 0) {
    num_ = num_ * SkewPoly(den_.coeff(0).inverse());
    den_ = 1;
    return;
  }
  // Monic denominator: right-multiply num and den by a function.
  long e = den_.deg();
  DiffFrac c = shift(den_.coeff(e).inverse(), -e);
  if (!(SkewPoly(c).is_one())) {
    num_ = num_ * SkewPoly(c);
    den_ = den_ * SkewPoly(c);
  }
}

RatOp rat_mul(const RatOp& a, const RatOp& b) {
  if (a.is_zero() || b.is_zero()) return RatOp();
  // S^al n1 d1^-1 S^be n2 d2^-1
  //   = S^{al+be} o sigma^{-be}(n1) o D^-1 o n2 o d2^-1,  D = sigma^-be(d1).
  SkewPoly n1 = a.num_.conj(-b.k_);
  SkewPoly D = a.den_.conj(-b.k_);
  SkewPoly A = b.num_, B = 1;
  if (!D.is_one()) {
    // D^-1 o n2 = A o B^-1 from the common right multiple n2 o B = D o A.
    auto [p, q] = ore_common_right_multiple(D, b.num_);
    A = p;
    B = q;
  }
  return RatOp::fraction(n1 * A, b.den_ * B, a.k_ + b.k_);
}

RatOp rat_add(const RatOp& a, const RatOp& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  SkewPoly e1 = 1, e2 = 1, D = a.den_;
  if (!(a.den_ == b.den_)) {
    auto [p, q] = ore_common_right_multiple(a.den_, b.den_);
    e1 = p;
    e2 = q;
    D = a.den_ * e1;
  }
  SkewPoly n =
      (a.num_ * e1).compose_left_shift(a.k_) +
      (b.num_ * e2).compose_left_shift(b.k_);
  return RatOp::fraction(n, D, 0);
}

RatOp rat_inv(const RatOp& a) {
  if (a.is_zero()) throw OreFailure("rat_inv: inverse of zero");
  // (S^k n d^-1)^-1 = d o (S^k o n)^-1.
  return RatOp::fraction(a.den_, a.num_.compose_left_shift(a.k_), 0);
}

RatOp rat_adjoint(const RatOp& a) {
  // (S^k n d^-1)* = (d*)^-1 o n* o S^-k.
  RatOp dstar = RatOp::fraction(a.den_.adjoint(), SkewPoly(1), 0);
  RatOp m = RatOp::fraction(a.num_.adjoint().compose_right_shift(-a.k_),
                            SkewPoly(1), 0);
  return rat_mul(rat_inv(dstar), m);
}

bool RatOp::operator==(const RatOp& o) const {
  return rat_sub(*this, o).is_zero();
}

RatOp rat_pow(const RatOp& a, int k) {
  if (k < 0) return rat_pow(rat_inv(a), -k);
  RatOp r(1);
  for (int i = 0; i < k; ++i) r = rat_mul(r, a);
  return r;
}

// ---------------------------------------------------------------------------
// Expansions and symbols

namespace {

// Truncated geometric expansion of den^-1 so that all exponents up to
// need_hi (Up) resp. down to need_lo (Down) are exact.
DiffOp den_inverse_series(const SkewPoly& den, Dir dir, long bound) {
  if (den.is_one()) return DiffOp::constant(DiffFrac(1));
  if (dir == Dir::Up) {
    DiffFrac f0 = den.coeff(0);
    if (f0.is_zero())
      throw OreFailure("iota+: denominator has vanishing constant term");
    // den = (1 + R) o f0 with R = (den - f0) o f0^-1 supported in S^{>=1}.
    DiffOp R = ((den - SkewPoly(f0)) * SkewPoly(f0.inverse())).to_op();
    DiffOp acc = DiffOp::constant(DiffFrac(1));
    DiffOp term = acc;
    DiffOp negR = op_neg(R);
    for (long i = 1; i <= bound; ++i) {
      term = op_mul(negR, term);
      // Coefficients past the working order only feed terms that are
      // discarded anyway; dropping them now keeps the powers small.
      DiffOp kept;
      for (const auto& [n, c] : term.coeffs())
        if (n <= bound) kept.set_coeff(n, c);
      term = kept;
      if (term.is_zero()) break;
      acc = op_add(acc, term);
    }
    return op_scale(acc, f0.inverse());
  }
  long e = den.deg();
  DiffFrac fe = den.coeff(e);
  // den = (1 + R) o fe S^e with R supported in S^{<=-1}.
  DiffOp tinv = DiffOp::monomial(shift(fe.inverse(), -e), -e);
  DiffOp R = op_mul((den - SkewPoly::monomial(fe, e)).to_op(), tinv);
  DiffOp acc = DiffOp::constant(DiffFrac(1));
  DiffOp term = acc;
  DiffOp negR = op_neg(R);
  for (long i = 1; i <= bound; ++i) {
    term = op_mul(negR, term);
    DiffOp kept;
    for (const auto& [n, c] : term.coeffs())
      if (n >= -bound) kept.set_coeff(n, c);
    term = kept;
    if (term.is_zero()) break;
    acc = op_add(acc, term);
  }
  return op_mul(tinv, acc);
}

}  // namespace

DiffOp rat_expand(const RatOp& r, Dir direction, long order) {
  if (direction == Dir::Finite)
    throw std::domain_error("rat_expand: direction must be Up or Down");
  DiffOp result;
  if (r.is_zero()) {
    result = DiffOp();
  } else {
    DiffOp N = r.num().compose_left_shift(r.prefactor()).to_op();
    // Series order actually needed so that every kept coefficient of
    // N o Dinv is complete; each extra series term is expensive, so the
    // bound is kept tight (one unit of margin).
    long bound;
    if (direction == Dir::Up) {
      // Kept exponents are < order; series exponents m >= 0 contribute
      // at N.lo() + m and above.
      bound = order - N.lo() + 1;
    } else {
      // Kept exponents are >= -order - 1; the series already sits below
      // S^{-deg den}, and contributes at N.hi() - deg den - i and below.
      long e = r.den().is_one() ? 0 : r.den().deg();
      bound = order + 1 + N.hi() - e + 1;
    }
    if (bound < 0) bound = 0;
    DiffOp Dinv = den_inverse_series(r.den(), direction, bound);
    result = op_mul(N, Dinv);
  }
  // Up keeps exponents < order; Down keeps exponents >= -order.
  if (direction == Dir::Up)
    result.set_trunc(Dir::Up, order);
  else
    result.set_trunc(Dir::Down, -order - 1);
  return result;
}

std::map<long, DiffFrac> rat_symbol(const RatOp& r, long window) {
  DiffOp up = rat_expand(r, Dir::Up, window + 1);
  DiffOp down = rat_expand(r, Dir::Down, window);
  std::map<long, DiffFrac> sym;
  Scalar half(1, 2);
  for (long n = -window; n <= window; ++n) {
    DiffFrac c = (up.coeff(n) + down.coeff(n)) * DiffFrac(half);
    if (!c.is_zero()) sym[n] = c;
  }
  return sym;
}

std::optional<DiffOp> rat_is_polynomial(const RatOp& r) {
  if (r.is_zero()) return DiffOp();
  SkewPoly N = r.num().compose_left_shift(r.prefactor());
  if (r.den().is_one()) return N.to_op();
  const SkewPoly& d = r.den();
  const long e = d.deg();
  const long vbound = N.val();
  SkewPoly q, rem = N;
  const DiffFrac dtop = d.coeff(e);
  while (!rem.is_zero() && rem.deg() - e >= vbound) {
    long t = rem.deg() - e;
    DiffFrac qt = rem.coeff(rem.deg()) / shift(dtop, t);
    q.set(t, q.coeff(t) + qt);
    rem = rem - SkewPoly::monomial(qt, t) * d;
  }
  if (!rem.is_zero()) return std::nullopt;
  return q.to_op();
}

DiffFrac rat_apply_polynomial(const RatOp& r, const DiffFrac& f) {
  // Compose with multiplication by f; if the denominator cancels the
  // composition is a genuine operator and r(f) = (r o f)(1).
  RatOp composed = rat_mul(r, RatOp(f));
  auto p = rat_is_polynomial(composed);
  if (!p) throw NonlocalResult("rational operator application did not cancel");
  return op_apply(*p, DiffFrac(1));
}

}  // namespace mpva
