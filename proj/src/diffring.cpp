#include "mpva/diffring.hpp"

#include <algorithm>
#include <climits>
#include <random>
#include <vector>

namespace mpva {

// ---------------------------------------------------------------------------
// Monomial

Monomial Monomial::var(int gen, long shift, int exp) {
  Monomial m;
  if (exp != 0) m.factors[{gen, shift}] = exp;
  return m;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r = *this;
  for (const auto& [v, e] : o.factors) {
    auto it = r.factors.find(v);
    if (it == r.factors.end()) {
      r.factors[v] = e;
    } else {
      it->second += e;
      if (it->second == 0) r.factors.erase(it);
    }
  }
  return r;
}

Monomial Monomial::pow(int k) const {
  Monomial r;
  if (k == 0) return r;
  for (const auto& [v, e] : factors) r.factors[v] = e * k;
  return r;
}

Monomial Monomial::shifted(long k) const {
  Monomial r;
  for (const auto& [v, e] : factors) r.factors[{v.gen, v.shift + k}] = e;
  return r;
}

long Monomial::min_shift() const {
  bool first = true;
  long m = 0;
  for (const auto& [v, e] : factors) {
    if (first || v.shift < m) m = v.shift;
    first = false;
  }
  return m;
}

bool Monomial::lex_less(const Monomial& o) const {
  // Lexicographic comparison of full exponent vectors over (gen, shift),
  // missing variables counting as exponent 0.  This is translation
  // invariant, hence a genuine monomial order on the Laurent monoid.
  auto a = factors.begin(), b = o.factors.begin();
  while (a != factors.end() || b != o.factors.end()) {
    if (a == factors.end()) return 0 < b->second;
    if (b == o.factors.end()) return a->second < 0;
    if (a->first < b->first) return a->second < 0;
    if (b->first < a->first) return 0 < b->second;
    if (a->second != b->second) return a->second < b->second;
    ++a;
    ++b;
  }
  return false;
}

// ---------------------------------------------------------------------------
// DiffPoly

DiffPoly::DiffPoly(long v) {
  if (v != 0) terms[Monomial{}] = Scalar(v);
}

DiffPoly::DiffPoly(const Scalar& v) {
  if (!scalar_is_zero(v)) terms[Monomial{}] = v;
}

DiffPoly DiffPoly::var(int gen, long shift, int exp) {
  DiffPoly p;
  p.terms[Monomial::var(gen, shift, exp)] = Scalar(1);
  return p;
}

DiffPoly DiffPoly::term(const Scalar& c, const Monomial& m) {
  DiffPoly p;
  if (!scalar_is_zero(c)) p.terms[m] = c;
  return p;
}

bool DiffPoly::is_constant() const {
  return terms.empty() ||
         (terms.size() == 1 && terms.begin()->first.is_one());
}

bool DiffPoly::is_one() const {
  return terms.size() == 1 && terms.begin()->first.is_one() &&
         terms.begin()->second == 1;
}

Scalar DiffPoly::constant_term() const {
  auto it = terms.find(Monomial{});
  return it == terms.end() ? Scalar(0) : it->second;
}

void DiffPoly::add_term(const Monomial& m, const Scalar& c) {
  if (scalar_is_zero(c)) return;
  auto it = terms.find(m);
  if (it == terms.end()) {
    terms[m] = c;
  } else {
    it->second += c;
    if (scalar_is_zero(it->second)) terms.erase(it);
  }
}

DiffPoly DiffPoly::operator+(const DiffPoly& o) const {
  DiffPoly r = *this;
  r += o;
  return r;
}

DiffPoly& DiffPoly::operator+=(const DiffPoly& o) {
  for (const auto& [m, c] : o.terms) add_term(m, c);
  return *this;
}

DiffPoly DiffPoly::operator-(const DiffPoly& o) const {
  DiffPoly r = *this;
  r -= o;
  return r;
}

DiffPoly& DiffPoly::operator-=(const DiffPoly& o) {
  for (const auto& [m, c] : o.terms) add_term(m, -c);
  return *this;
}

DiffPoly DiffPoly::operator-() const {
  DiffPoly r;
  for (const auto& [m, c] : terms) r.terms[m] = -c;
  return r;
}

DiffPoly DiffPoly::operator*(const DiffPoly& o) const {
  DiffPoly r;
  for (const auto& [m1, c1] : terms)
    for (const auto& [m2, c2] : o.terms) r.add_term(m1 * m2, c1 * c2);
  return r;
}

DiffPoly DiffPoly::scaled(const Scalar& c) const {
  DiffPoly r;
  if (scalar_is_zero(c)) return r;
  for (const auto& [m, k] : terms) r.terms[m] = k * c;
  return r;
}

DiffPoly DiffPoly::pow(int k) const {
  if (k < 0) {
    if (!is_term())
      throw std::domain_error("DiffPoly::pow: negative power of a non-term");
    return term_inverse().pow(-k);
  }
  DiffPoly r(1);
  DiffPoly base = *this;
  int e = k;
  while (e > 0) {
    if (e & 1) r = r * base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

DiffPoly DiffPoly::term_inverse() const {
  if (!is_term())
    throw std::domain_error("DiffPoly::term_inverse: not a single term");
  const auto& [m, c] = *terms.begin();
  DiffPoly r;
  r.terms[m.inverse()] = 1 / c;
  return r;
}

std::pair<Monomial, Scalar> DiffPoly::leading_term() const {
  if (terms.empty()) throw std::domain_error("leading_term of zero");
  auto it = std::prev(terms.end());
  return {it->first, it->second};
}

// ---------------------------------------------------------------------------
// Ring operations

DiffPoly shift(const DiffPoly& p, long k) {
  DiffPoly r;
  for (const auto& [m, c] : p.terms) r.terms[m.shifted(k)] = c;
  return r;
}

DiffPoly partial(const DiffPoly& p, int gen, long n) {
  DiffPoly r;
  const VarRef v{gen, n};
  for (const auto& [m, c] : p.terms) {
    auto it = m.factors.find(v);
    if (it == m.factors.end()) continue;
    int e = it->second;
    Monomial dm = m * Monomial::var(gen, n, -1);
    r.add_term(dm, c * e);
  }
  return r;
}

DiffPoly variational_derivative(const DiffPoly& h, int gen) {
  DiffPoly r;
  std::set<long> shifts;
  for (const auto& [m, c] : h.terms)
    for (const auto& [v, e] : m.factors)
      if (v.gen == gen) shifts.insert(v.shift);
  for (long n : shifts) r += shift(partial(h, gen, n), -n);
  return r;
}

std::set<std::pair<int, long>> support_vars(const DiffPoly& p) {
  std::set<std::pair<int, long>> s;
  for (const auto& [m, c] : p.terms)
    for (const auto& [v, e] : m.factors) s.insert({v.gen, v.shift});
  return s;
}

std::set<int> support_gens(const DiffPoly& p) {
  std::set<int> s;
  for (const auto& [m, c] : p.terms)
    for (const auto& [v, e] : m.factors) s.insert(v.gen);
  return s;
}

// ---------------------------------------------------------------------------
// Exact division

namespace {

// Monomial with, per variable, the (negated) minimal exponent occurring in
// p, so that p * clearing_monomial(p) has all exponents >= 0 and no
// variable dividing every term.
Monomial clearing_monomial(const DiffPoly& p) {
  std::set<VarRef> vars;
  for (const auto& [m, c] : p.terms)
    for (const auto& [v, e] : m.factors) vars.insert(v);
  Monomial r;
  for (const VarRef& v : vars) {
    bool first = true;
    int mn = 0;
    for (const auto& [m, c] : p.terms) {
      auto it = m.factors.find(v);
      int e = it == m.factors.end() ? 0 : it->second;
      mn = first ? e : std::min(mn, e);
      first = false;
    }
    if (mn != 0) r.factors[v] = -mn;
  }
  return r;
}

}  // namespace

std::optional<DiffPoly> exact_divide(const DiffPoly& num,
                                     const DiffPoly& den) {
  if (den.is_zero()) return std::nullopt;
  if (num.is_zero()) return DiffPoly();
  if (den.is_term()) return num * den.term_inverse();
  // Clear Laurent exponents so both operands are honest polynomials with no
  // common variable factor; the cleared denominator is then coprime to all
  // monomials and ordinary multivariate division decides divisibility.
  Monomial mn = clearing_monomial(num);
  Monomial md = clearing_monomial(den);
  DiffPoly a = num * DiffPoly::term(Scalar(1), mn);
  DiffPoly b = den * DiffPoly::term(Scalar(1), md);
  DiffPoly q, r = a;
  auto [lb, cb] = b.leading_term();
  while (!r.is_zero()) {
    auto [lr, cr] = r.leading_term();
    // Term division lr/lb must stay a genuine (non-Laurent) monomial; since
    // the term order is multiplicative, exact divisibility of r by b forces
    // lt(b) | lt(r) at every step.
    Monomial t = lr * lb.inverse();
    for (const auto& [v, e] : t.factors)
      if (e < 0) return std::nullopt;
    DiffPoly tp = DiffPoly::term(cr / cb, t);
    q += tp;
    r -= tp * b;
  }
  // num/den = q * md / mn.
  return q * DiffPoly::term(Scalar(1), md * mn.inverse());
}

// ---------------------------------------------------------------------------
// Multivariate gcd (subresultant polynomial remainder sequences)

namespace {

// Univariate view in a chosen variable: degree -> coefficient polynomial.
using UniView = std::map<int, DiffPoly>;

UniView to_univar(const DiffPoly& p, const VarRef& x) {
  UniView u;
  for (const auto& [m, c] : p.terms) {
    Monomial rest = m;
    int d = 0;
    auto it = rest.factors.find(x);
    if (it != rest.factors.end()) {
      d = it->second;
      rest.factors.erase(it);
    }
    u[d] += DiffPoly::term(c, rest);
  }
  return u;
}

DiffPoly from_univar(const UniView& u, const VarRef& x) {
  DiffPoly p;
  for (const auto& [d, c] : u)
    p += c * DiffPoly::term(Scalar(1), Monomial::var(x.gen, x.shift, d));
  return p;
}

DiffPoly must_divide(const DiffPoly& num, const DiffPoly& den) {
  auto q = exact_divide(num, den);
  if (!q) throw std::logic_error("gcd: expected exact division failed");
  return *q;
}

// Work budget for a whole gcd computation.  Reduction of a fraction is
// always optional, so when the budget runs out the computation aborts and
// the caller falls back to gcd 1 instead of stalling on a pathological
// remainder sequence.
thread_local long gcd_budget = -1;
struct GcdBudgetExceeded {};

void gcd_charge(size_t work) {
  if (gcd_budget < 0) return;
  gcd_budget -= static_cast<long>(work);
  if (gcd_budget < 0) throw GcdBudgetExceeded{};
}

// Divide out the rational content (gcd of numerators over lcm of
// denominators, sign taken from the leading coefficient) so integer
// coefficient sizes stay bounded through the remainder sequences.  Scalars
// are units, so this never affects divisibility.
void scalar_reduce(DiffPoly& p) {
  if (p.is_zero()) return;
  mpz_class g = 0, l = 1;
  for (const auto& [m, c] : p.terms) {
    g = gcd(g, c.get_num());
    l = lcm(l, c.get_den());
  }
  Scalar s(g, l);
  s.canonicalize();
  if (sgn(p.leading_term().second) < 0) s = -s;
  p = p.scaled(1 / s);
}

void scalar_reduce_view(std::map<int, DiffPoly>& u) {
  mpz_class g = 0, l = 1;
  bool neg = false;
  for (const auto& [d, c] : u)
    for (const auto& [m, s] : c.terms) {
      g = gcd(g, s.get_num());
      l = lcm(l, s.get_den());
    }
  if (sgn(g) == 0) return;
  if (!u.empty()) neg = sgn(u.rbegin()->second.leading_term().second) < 0;
  Scalar s(g, l);
  s.canonicalize();
  if (neg) s = -s;
  for (auto& [d, c] : u) c = c.scaled(1 / s);
}

// Evaluation screen for the remainder sequences: substitute random integers
// for every variable except x and take the univariate gcd degree over Q.
// The true gcd's degree in x never exceeds this estimate (barring an
// unlucky point that kills its leading coefficient), and the estimate is
// only ever used to skip work: under-estimating the gcd leaves a fraction
// unreduced, which is always sound.

// Degree of the univariate gcd of dense coefficient vectors; -1 for zero.
int uni_gcd_degree(std::vector<Scalar> A, std::vector<Scalar> B) {
  auto trim = [](std::vector<Scalar>& v) {
    while (!v.empty() && scalar_is_zero(v.back())) v.pop_back();
  };
  trim(A);
  trim(B);
  if (A.empty()) return static_cast<int>(B.size()) - 1;
  if (B.empty()) return static_cast<int>(A.size()) - 1;
  while (true) {
    if (A.size() < B.size()) std::swap(A, B);
    // A -= (lead A / lead B) x^(dA-dB) B
    size_t off = A.size() - B.size();
    Scalar q = A.back() / B.back();
    for (size_t i = 0; i < B.size(); ++i) A[i + off] -= q * B[i];
    trim(A);
    if (A.empty()) return static_cast<int>(B.size()) - 1;
  }
}

// Coefficient vector of p in x after substituting pt for all other
// variables; nullopt when the image collapses to zero.
std::optional<std::vector<Scalar>> eval_except(
    const DiffPoly& p, const VarRef& x, const std::map<VarRef, long>& pt) {
  std::vector<Scalar> out;
  for (const auto& [m, c] : p.terms) {
    Scalar v = c;
    int ex = 0;
    for (const auto& [var, e] : m.factors) {
      if (var == x) {
        ex = e;
        continue;
      }
      mpz_class base(pt.at(var)), power;
      mpz_pow_ui(power.get_mpz_t(), base.get_mpz_t(),
                 static_cast<unsigned long>(e));
      v *= Scalar(power);
    }
    if (out.size() <= static_cast<size_t>(ex)) out.resize(ex + 1);
    out[ex] += v;
  }
  while (!out.empty() && scalar_is_zero(out.back())) out.pop_back();
  if (out.empty()) return std::nullopt;
  return out;
}

// Gcd up to a unit.  Intermediate quotients are exact only up to monomial
// units of the Laurent ring, so inputs are re-cleared here: after clearing,
// exponents are >= 0 and no variable divides every term, which guarantees a
// non-constant leading monomial for non-constant input.
DiffPoly gcd_cleared(const DiffPoly& a0, const DiffPoly& b0) {
  if (a0.is_zero()) return b0;
  if (b0.is_zero()) return a0;
  if (a0.is_term() || b0.is_term()) return DiffPoly(1);
  DiffPoly a = a0 * DiffPoly::term(Scalar(1), clearing_monomial(a0));
  DiffPoly b = b0 * DiffPoly::term(Scalar(1), clearing_monomial(b0));
  if (a.is_constant() || b.is_constant()) return DiffPoly(1);
  gcd_charge(a.terms.size() + b.terms.size());
  scalar_reduce(a);
  scalar_reduce(b);
  // Trial division first: in fraction arithmetic the common factor is very
  // often one of the operands itself.
  if (exact_divide(a, b)) return b;
  if (exact_divide(b, a)) return a;
  // A non-constant common factor can only involve shared variables.
  std::set<VarRef> va, vb, common;
  for (const auto& [m, c] : a.terms)
    for (const auto& [v, e] : m.factors) va.insert(v);
  for (const auto& [m, c] : b.terms)
    for (const auto& [v, e] : m.factors) vb.insert(v);
  for (const VarRef& v : va)
    if (vb.count(v)) common.insert(v);
  if (common.empty()) return DiffPoly(1);
  // Evaluation screen: estimate the gcd's degree in each shared variable
  // and bail out (or pick the easiest main variable) accordingly.
  static thread_local std::mt19937 rng(0x9e3779b9);
  std::uniform_int_distribution<long> pick(2, 1 << 14);
  VarRef x = *common.begin();
  int best = INT_MAX;
  for (int attempt = 0; attempt < 3; ++attempt) {
    std::map<VarRef, long> pt;
    for (const VarRef& v : va) pt[v] = pick(rng);
    for (const VarRef& v : vb) pt.emplace(v, pick(rng));
    bool collapsed = false;
    best = INT_MAX;
    for (const VarRef& v : common) {
      auto ea = eval_except(a, v, pt);
      auto eb = eval_except(b, v, pt);
      if (!ea || !eb) {
        collapsed = true;
        break;
      }
      int d = uni_gcd_degree(*ea, *eb);
      if (d == 0) continue;
      if (d < best) {
        best = d;
        x = v;
      }
    }
    if (collapsed) continue;  // unlucky point, retry
    if (best == INT_MAX) return DiffPoly(1);  // coprime in every variable
    break;
  }
  if (best == INT_MAX) x = *common.begin();  // screen failed; fall through
  UniView ua = to_univar(a, x), ub = to_univar(b, x);
  if (ub.rbegin()->first == 0) {
    // b does not involve x: reduce to the content of a.
    DiffPoly ca;
    for (const auto& [d, c] : ua) ca = gcd_cleared(ca, c);
    return gcd_cleared(ca, b);
  }
  if (ua.rbegin()->first == 0) {
    DiffPoly cb;
    for (const auto& [d, c] : ub) cb = gcd_cleared(cb, c);
    return gcd_cleared(a, cb);
  }
  // Contents and primitive parts.
  DiffPoly ca, cb;
  for (const auto& [d, c] : ua) ca = gcd_cleared(ca, c);
  for (const auto& [d, c] : ub) cb = gcd_cleared(cb, c);
  for (auto& [d, c] : ua) c = must_divide(c, ca);
  for (auto& [d, c] : ub) c = must_divide(c, cb);
  scalar_reduce_view(ua);
  scalar_reduce_view(ub);
  DiffPoly cont = gcd_cleared(ca, cb);

  UniView A = ua, B = ub;
  if (A.rbegin()->first < B.rbegin()->first) std::swap(A, B);
  DiffPoly g(1), h(1);
  while (true) {
    int degA = A.rbegin()->first, degB = B.rbegin()->first;
    int delta = degA - degB;
    // Pseudo-remainder prem(A, B) = lc(B)^(delta+1) A mod B, computed by
    // cross-multiplication: R <- lc(B) R - lc(R) x^(deg R - deg B) B.
    DiffPoly lcB = B.rbegin()->second;
    UniView R = A;
    int e = delta + 1;
    while (!R.empty() && R.rbegin()->first >= degB) {
      int dr = R.rbegin()->first;
      DiffPoly lr = R.rbegin()->second;
      UniView next;
      for (const auto& [d, c] : R) {
        if (d == dr) continue;
        gcd_charge(c.terms.size() * lcB.terms.size());
        next[d] = c * lcB;
      }
      for (const auto& [d, c] : B) {
        if (d == degB) continue;
        int dd = d + dr - degB;
        gcd_charge(lr.terms.size() * c.terms.size());
        DiffPoly nc = (next.count(dd) ? next[dd] : DiffPoly()) - lr * c;
        if (nc.is_zero())
          next.erase(dd);
        else
          next[dd] = nc;
      }
      R = std::move(next);
      --e;
    }
    if (e > 0)
      for (auto& [d, c] : R) c = c * lcB.pow(e);
    if (R.empty()) break;
    if (R.rbegin()->first == 0) return cont;  // primitive parts are coprime
    A = B;
    DiffPoly div = g * h.pow(delta);
    B = R;
    for (auto& [d, c] : B) c = must_divide(c, div);
    scalar_reduce_view(B);
    g = A.rbegin()->second;
    h = delta == 0 ? h : must_divide(g.pow(delta), h.pow(delta - 1));
    scalar_reduce(h);
    scalar_reduce(g);
  }
  // Primitive part of the last nonzero remainder.
  DiffPoly cB;
  for (const auto& [d, c] : B) cB = gcd_cleared(cB, c);
  for (auto& [d, c] : B) c = must_divide(c, cB);
  scalar_reduce_view(B);
  return cont * from_univar(B, x);
}

}  // namespace

DiffPoly poly_gcd(const DiffPoly& a, const DiffPoly& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  DiffPoly ac = a * DiffPoly::term(Scalar(1), clearing_monomial(a));
  DiffPoly bc = b * DiffPoly::term(Scalar(1), clearing_monomial(b));
  DiffPoly g(1);
  long saved = gcd_budget;
  gcd_budget = 2'000'000;
  try {
    g = gcd_cleared(ac, bc);
  } catch (const GcdBudgetExceeded&) {
    g = DiffPoly(1);  // give up on reduction; callers treat 1 as "no factor"
  }
  gcd_budget = saved;
  // Scale so the leading coefficient is 1 (a canonical unit choice).
  auto [lm, lc] = g.leading_term();
  return g.scaled(1 / lc);
}

// ---------------------------------------------------------------------------
// DiffFrac

DiffFrac::DiffFrac(DiffPoly num, DiffPoly den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::domain_error("DiffFrac: zero denominator");
  normalize();
}

void DiffFrac::normalize() {
  if (num_.is_zero()) {
    den_ = DiffPoly(1);
    return;
  }
  if (den_.is_term()) {
    num_ = num_ * den_.term_inverse();
    den_ = DiffPoly(1);
    return;
  }
  DiffPoly g = poly_gcd(num_, den_);
  if (!g.is_term()) {
    if (auto qn = exact_divide(num_, g)) {
      if (auto qd = exact_divide(den_, g)) {
        num_ = *qn;
        den_ = *qd;
      }
    }
  }
  if (den_.is_term()) {
    num_ = num_ * den_.term_inverse();
    den_ = DiffPoly(1);
    return;
  }
  // Divide through by the leading term of den (a unit of the Laurent ring)
  // so that den has leading term 1.
  auto [lm, lc] = den_.leading_term();
  DiffPoly inv = DiffPoly::term(1 / lc, lm.inverse());
  num_ = num_ * inv;
  den_ = den_ * inv;
}

const DiffPoly& DiffFrac::as_poly() const {
  if (!is_polynomial())
    throw std::domain_error("DiffFrac::as_poly: denominator did not cancel");
  return num_;
}

DiffFrac DiffFrac::reduced(DiffPoly num, DiffPoly den) {
  DiffFrac r;
  r.num_ = std::move(num);
  r.den_ = std::move(den);
  if (r.num_.is_zero()) {
    r.den_ = DiffPoly(1);
    return r;
  }
  if (r.den_.is_term()) {
    r.num_ = r.num_ * r.den_.term_inverse();
    r.den_ = DiffPoly(1);
    return r;
  }
  auto [lm, lc] = r.den_.leading_term();
  DiffPoly inv = DiffPoly::term(1 / lc, lm.inverse());
  r.num_ = r.num_ * inv;
  r.den_ = r.den_ * inv;
  return r;
}

namespace {

// Remove any detectable common factor from the pair; both or neither are
// divided, so a/b keeps its value whenever (a, b) are a fraction's parts.
void cancel_pair(DiffPoly& a, DiffPoly& b) {
  if (a.is_zero() || b.is_zero()) return;
  DiffPoly g = poly_gcd(a, b);
  if (g.is_term()) return;
  auto qa = exact_divide(a, g);
  auto qb = exact_divide(b, g);
  if (qa && qb) {
    a = std::move(*qa);
    b = std::move(*qb);
  }
}

}  // namespace

// Fraction arithmetic keeps operands reduced and only ever takes gcds of
// original components (Henrici's scheme), never of full cross products;
// this is what keeps coefficient growth in long Euclidean chains tame.
DiffFrac DiffFrac::operator+(const DiffFrac& o) const {
  if (den_ == o.den_) {
    DiffPoly t = num_ + o.num_;
    DiffPoly d = den_;
    cancel_pair(t, d);
    return reduced(std::move(t), std::move(d));
  }
  DiffPoly g = poly_gcd(den_, o.den_);
  if (g.is_term())
    return reduced(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  auto b1 = exact_divide(den_, g);
  auto d1 = exact_divide(o.den_, g);
  if (!b1 || !d1)
    return DiffFrac(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  DiffPoly t = num_ * *d1 + o.num_ * *b1;
  if (t.is_zero()) return DiffFrac();
  DiffPoly h = poly_gcd(t, g);
  if (!h.is_term()) {
    auto tq = exact_divide(t, h);
    auto gq = exact_divide(g, h);
    if (tq && gq) return reduced(std::move(*tq), *gq * *b1 * *d1);
  }
  return reduced(std::move(t), g * *b1 * *d1);
}

DiffFrac DiffFrac::operator-(const DiffFrac& o) const { return *this + (-o); }

DiffFrac DiffFrac::operator-() const {
  DiffFrac r = *this;
  r.num_ = -r.num_;
  return r;
}

DiffFrac DiffFrac::operator*(const DiffFrac& o) const {
  DiffPoly n1 = num_, d2 = o.den_;
  DiffPoly n2 = o.num_, d1 = den_;
  cancel_pair(n1, d2);
  cancel_pair(n2, d1);
  return reduced(n1 * n2, d1 * d2);
}

DiffFrac DiffFrac::operator/(const DiffFrac& o) const {
  return *this * o.inverse();
}

DiffFrac DiffFrac::inverse() const {
  if (num_.is_zero()) throw std::domain_error("DiffFrac: inverse of zero");
  return reduced(den_, num_);
}

bool DiffFrac::operator==(const DiffFrac& o) const {
  return num_ * o.den_ == o.num_ * den_;
}

DiffFrac shift(const DiffFrac& f, long k) {
  // Shifting preserves reducedness, so no gcd is needed.
  return DiffFrac::reduced(shift(f.num(), k), shift(f.den(), k));
}

// ---------------------------------------------------------------------------
// Functionals and telescoping solvers

Functional canonical_functional(const DiffPoly& p) {
  DiffPoly rep;
  for (const auto& [m, c] : p.terms) rep.add_term(m.shifted(-m.min_shift()), c);
  return Functional{rep};
}

namespace {

// Group the terms of g by S-orbit: canonical monomial -> sorted list of
// (shift offset, coefficient).
std::map<Monomial, std::map<long, Scalar>, MonoOrder> orbits(
    const DiffPoly& g) {
  std::map<Monomial, std::map<long, Scalar>, MonoOrder> r;
  for (const auto& [m, c] : g.terms) {
    long s = m.min_shift();
    r[m.shifted(-s)][s] = c;
  }
  return r;
}

}  // namespace

std::optional<DiffPoly> solve_S_minus_1(const DiffPoly& g) {
  DiffPoly a;
  for (const auto& [rep, coeffs] : orbits(g)) {
    if (rep.is_constant()) {
      // (S-1) kills constants: nonzero constant term is an obstruction.
      return std::nullopt;
    }
    // (S-1)(sum_k a_k S^k rep) = sum_k (a_{k-1} - a_k) S^k rep; telescoping
    // gives a_k = -(g_{k_min} + ... + g_k), and the full orbit sum must be 0.
    long kmin = coeffs.begin()->first;
    long kmax = coeffs.rbegin()->first;
    Scalar acc(0);
    for (long k = kmin; k < kmax; ++k) {
      auto it = coeffs.find(k);
      if (it != coeffs.end()) acc += it->second;
      if (!scalar_is_zero(acc)) a.add_term(rep.shifted(k), -acc);
    }
    acc += coeffs.rbegin()->second;
    if (!scalar_is_zero(acc)) return std::nullopt;
  }
  return a;
}

std::optional<DiffPoly> solve_S_plus_1(const DiffPoly& g) {
  DiffPoly b;
  for (const auto& [rep, coeffs] : orbits(g)) {
    if (rep.is_constant()) {
      b.add_term(rep, coeffs.begin()->second / 2);
      continue;
    }
    // (S+1)(sum_k b_k S^k rep): b_{k-1} + b_k = g_k, solved upward with
    // b_k = 0 below the support; the final recursion value must vanish.
    long kmin = coeffs.begin()->first;
    long kmax = coeffs.rbegin()->first;
    Scalar prev(0);
    for (long k = kmin; k <= kmax; ++k) {
      auto it = coeffs.find(k);
      Scalar gk = (it == coeffs.end()) ? Scalar(0) : it->second;
      Scalar bk = gk - prev;
      if (k < kmax) {
        if (!scalar_is_zero(bk)) b.add_term(rep.shifted(k), bk);
        prev = bk;
      } else {
        if (!scalar_is_zero(bk)) return std::nullopt;
      }
    }
  }
  return b;
}

}  // namespace mpva
