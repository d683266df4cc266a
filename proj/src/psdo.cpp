#include "mpva/psdo.hpp"

#include <algorithm>
#include <climits>

namespace mpva {

DiffOp DiffOp::monomial(const DiffFrac& c, long n) {
  DiffOp r;
  if (!c.is_zero()) r.coeffs_[n] = c;
  return r;
}

DiffFrac DiffOp::coeff(long n) const {
  if (!resolved(n))
    throw TruncationAmbiguity("coefficient S^" + std::to_string(n) +
                              " is hidden by the truncation marker");
  auto it = coeffs_.find(n);
  return it == coeffs_.end() ? DiffFrac() : it->second;
}

bool DiffOp::resolved(long n) const {
  if (!trunc_) return true;
  if (dir_ == Dir::Down) return n > *trunc_;
  return n < *trunc_;
}

void DiffOp::set_coeff(long n, const DiffFrac& c) {
  if (trunc_ && !resolved(n)) return;  // writes past the marker are dropped
  if (c.is_zero())
    coeffs_.erase(n);
  else
    coeffs_[n] = c;
}

void DiffOp::set_trunc(Dir d, long t) {
  if (d == Dir::Finite)
    throw std::domain_error("set_trunc: finite operators carry no marker");
  if (trunc_ && dir_ == d) {
    // Pessimistic merge: keep the tighter resolved window.
    t = (d == Dir::Down) ? std::max(t, *trunc_) : std::min(t, *trunc_);
  }
  dir_ = d;
  trunc_ = t;
  drop_hidden();
}

void DiffOp::drop_hidden() {
  if (!trunc_) return;
  for (auto it = coeffs_.begin(); it != coeffs_.end();) {
    bool hidden = (dir_ == Dir::Down) ? it->first <= *trunc_
                                      : it->first >= *trunc_;
    it = hidden ? coeffs_.erase(it) : std::next(it);
  }
}

long DiffOp::lo() const {
  if (coeffs_.empty()) return trunc_ ? *trunc_ : 0;
  return coeffs_.begin()->first;
}

long DiffOp::hi() const {
  if (coeffs_.empty()) return trunc_ ? *trunc_ : 0;
  return coeffs_.rbegin()->first;
}

bool operator==(const DiffOp& a, const DiffOp& b) {
  return a.coeffs_ == b.coeffs_ && a.trunc_ == b.trunc_ &&
         (a.trunc_ ? a.dir_ == b.dir_ : true);
}

namespace {

// Combined direction for sums/products; Finite is compatible with anything.
Dir join_dir(Dir a, Dir b) {
  if (a == Dir::Finite) return b;
  if (b == Dir::Finite) return a;
  if (a != b) throw DirectionMismatch("series directions are incompatible");
  return a;
}

}  // namespace

DiffOp op_add(const DiffOp& a, const DiffOp& b) {
  Dir d = join_dir(a.dir(), b.dir());
  DiffOp r(d);
  if (d == Dir::Down) {
    long t = LONG_MIN;
    if (a.trunc()) t = std::max(t, *a.trunc());
    if (b.trunc()) t = std::max(t, *b.trunc());
    if (t != LONG_MIN) r.set_trunc(d, t);
  } else if (d == Dir::Up) {
    long t = LONG_MAX;
    if (a.trunc()) t = std::min(t, *a.trunc());
    if (b.trunc()) t = std::min(t, *b.trunc());
    if (t != LONG_MAX) r.set_trunc(d, t);
  }
  for (const auto& [n, c] : a.coeffs()) r.set_coeff(n, c);
  for (const auto& [n, c] : b.coeffs()) {
    auto cur = r.coeffs().count(n) ? r.coeffs().at(n) : DiffFrac();
    r.set_coeff(n, cur + c);
  }
  return r;
}

DiffOp op_neg(const DiffOp& a) {
  DiffOp r(a.dir());
  if (a.trunc()) r.set_trunc(a.dir(), *a.trunc());
  for (const auto& [n, c] : a.coeffs()) r.set_coeff(n, -c);
  return r;
}

DiffOp op_sub(const DiffOp& a, const DiffOp& b) {
  return op_add(a, op_neg(b));
}

DiffOp op_scale(const DiffOp& a, const DiffFrac& c) {
  DiffOp r(a.dir());
  if (a.trunc()) r.set_trunc(a.dir(), *a.trunc());
  if (c.is_zero() && !a.trunc()) return DiffOp();
  for (const auto& [n, k] : a.coeffs()) r.set_coeff(n, c * k);
  return r;
}

DiffOp op_mul(const DiffOp& a, const DiffOp& b) {
  Dir d = join_dir(a.dir(), b.dir());
  DiffOp r(d);
  // Pessimistic truncation: any product touching a hidden tail is unknown.
  if (d == Dir::Down) {
    long t = LONG_MIN;
    if (a.trunc()) t = std::max(t, *a.trunc() + b.hi());
    if (b.trunc()) t = std::max(t, a.hi() + *b.trunc());
    if (t != LONG_MIN) r.set_trunc(d, t);
  } else if (d == Dir::Up) {
    long t = LONG_MAX;
    if (a.trunc()) t = std::min(t, *a.trunc() + b.lo());
    if (b.trunc()) t = std::min(t, a.lo() + *b.trunc());
    if (t != LONG_MAX) r.set_trunc(d, t);
  }
  for (const auto& [m, am] : a.coeffs())
    for (const auto& [n, bn] : b.coeffs()) {
      if (!r.resolved(m + n)) continue;
      auto cur = r.coeffs().count(m + n) ? r.coeffs().at(m + n) : DiffFrac();
      r.set_coeff(m + n, cur + am * shift(bn, m));
    }
  return r;
}

DiffOp op_adjoint(const DiffOp& a) {
  Dir d = a.dir();
  Dir rd = d == Dir::Down ? Dir::Up : (d == Dir::Up ? Dir::Down : Dir::Finite);
  DiffOp r(rd);
  if (a.trunc()) r.set_trunc(rd, -*a.trunc());
  for (const auto& [n, c] : a.coeffs()) r.set_coeff(-n, shift(c, -n));
  return r;
}

std::pair<DiffOp, DiffOp> op_parts(const DiffOp& a) {
  DiffOp plus(Dir::Finite), minus(Dir::Finite);
  if (a.trunc()) {
    if (a.dir() == Dir::Down) {
      if (*a.trunc() >= 0)
        throw TruncationAmbiguity("positive part not fully resolved");
      minus = DiffOp(Dir::Down);
      minus.set_trunc(Dir::Down, *a.trunc());
    } else {
      if (*a.trunc() <= -1)
        throw TruncationAmbiguity("negative part not fully resolved");
      plus = DiffOp(Dir::Up);
      plus.set_trunc(Dir::Up, *a.trunc());
    }
  }
  for (const auto& [n, c] : a.coeffs())
    (n >= 0 ? plus : minus).set_coeff(n, c);
  return {plus, minus};
}

DiffFrac op_mres(const DiffOp& a) { return a.coeff(0); }

DiffOp op_power(const DiffOp& a, int k) {
  if (k < 0) throw std::domain_error("op_power: negative exponent");
  if (k == 0) return DiffOp::constant(DiffFrac(1));
  if (a.dir() == Dir::Finite) {
    // binary splitting is safe without truncation
    DiffOp r = DiffOp::constant(DiffFrac(1));
    DiffOp base = a;
    int e = k;
    while (e > 0) {
      if (e & 1) r = op_mul(r, base);
      base = e > 1 ? op_mul(base, base) : base;
      e >>= 1;
    }
    return r;
  }
  // Left-to-right accumulation: truncation loss is order-dependent.
  DiffOp r = a;
  for (int i = 1; i < k; ++i) r = op_mul(r, a);
  return r;
}

DiffOp commutator(const DiffOp& a, const DiffOp& b) {
  return op_sub(op_mul(a, b), op_mul(b, a));
}

std::map<long, DiffFrac> op_symbol(const DiffOp& a) { return a.coeffs(); }

DiffOp op_conjugate_shift(const DiffOp& a, long k) {
  DiffOp r(a.dir());
  if (a.trunc()) r.set_trunc(a.dir(), *a.trunc());
  for (const auto& [n, c] : a.coeffs()) r.set_coeff(n, shift(c, k));
  return r;
}

DiffFrac op_apply(const DiffOp& a, const DiffFrac& f) {
  if (a.trunc())
    throw TruncationAmbiguity("cannot apply a truncated operator exactly");
  DiffFrac r;
  for (const auto& [n, c] : a.coeffs()) r = r + c * shift(f, n);
  return r;
}

DiffOp make_generic(const GenericOperatorSpec& spec) {
  DiffOp r(Dir::Finite);
  if (spec.monic)
    r.set_coeff(spec.N, DiffFrac(1));
  else
    r.set_coeff(spec.N, DiffFrac(DiffPoly::var(spec.N, 0)));
  for (int i = spec.N - 1; i >= spec.N - 1 - spec.depth; --i)
    r.set_coeff(i, DiffFrac(DiffPoly::var(i, 0)));
  r.set_trunc(Dir::Down, spec.N - 2 - spec.depth);
  return r;
}

}  // namespace mpva
