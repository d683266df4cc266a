#include "mpva/adler.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "mpva/errors.hpp"

namespace mpva {

namespace {

// Coefficient gauge of a truncated operator L = sum_{a<=N} u_a S^a:
// u_N = 1 in the monic gauge, u_a = 0 outside [lo, hi], and the S^0
// coefficient carries the optional shift u_0 + eps.
struct Gauge {
  int N = 1;
  int lo = 0;
  bool monic = true;
  Scalar eps = 0;

  int hi() const { return monic ? N - 1 : N; }

  DiffPoly u(long a) const {
    if (a > N) return DiffPoly(0);
    if (monic && a == N) return DiffPoly(1);
    if (a < lo || a > hi()) return DiffPoly(0);
    DiffPoly p = DiffPoly::var(static_cast<int>(a), 0);
    if (a == 0 && !scalar_is_zero(eps)) p += DiffPoly(eps);
    return p;
  }

  std::vector<int> gens() const {
    std::vector<int> g;
    for (int a = lo; a <= hi(); ++a) g.push_back(a);
    return g;
  }
};

SkewPoly mono(const DiffPoly& p) { return SkewPoly(DiffFrac(p)); }

// a (LS)^k b as a one-term skew polynomial: a * S^k(b) at S^k.
SkewPoly sand(const DiffPoly& a, long k, const DiffPoly& b) {
  SkewPoly s;
  s.set(k, DiffFrac(a * shift(b, k)));
  return s;
}

// a (LS)^{k1} b (LS)^{k2} c.
SkewPoly triple(const DiffPoly& a, long k1, const DiffPoly& b, long k2,
                const DiffPoly& c) {
  SkewPoly s;
  s.set(k1 + k2, DiffFrac(a * shift(b, k1) * shift(c, k1 + k2)));
  return s;
}

// LS - 1 and (LS)^{-1} - 1 as polynomial operators.
SkewPoly ls_minus_one(long k) {
  return SkewPoly::monomial(DiffFrac(1), k) - SkewPoly(DiffFrac(1));
}

// Store an entry, reducing rational operators to local form when possible.
void set_entry(BracketTable& T, int i, int j, const RatOp& r) {
  if (r.is_zero()) return;
  if (auto op = rat_is_polynomial(r)) {
    T.set(i, j, op_to_lambda(*op));
  } else {
    T.set(i, j, r);
  }
}

void set_local(BracketTable& T, int i, int j, const SkewPoly& s) {
  if (s.is_zero()) return;
  T.set(i, j, op_to_lambda(s.to_op()));
}

// Double-sum part shared by the quadratic tables:
//   sum_{n=0}^{N-i} ( u_{j-n} (LS)^{j-i-n} u_{i+n} - u_{i+n} (LS)^n u_{j-n} ).
SkewPoly quadratic_sum(const Gauge& g, int i, int j) {
  SkewPoly s;
  for (long n = 0; n <= g.N - i; ++n) {
    s = s + sand(g.u(j - n), j - i - n, g.u(i + n)) -
        sand(g.u(i + n), n, g.u(j - n));
  }
  return s;
}

// u_j ((LS)^N - (LS)^j) ((LS)^N - 1)^{-1} (1 - (LS)^{-i}) u_i.
RatOp monic_correction(const Gauge& g, int i, int j) {
  if (i == 0) return RatOp(0);
  SkewPoly a = sand(g.u(j), g.N, DiffPoly(1)) - sand(g.u(j), j, DiffPoly(1));
  SkewPoly c = mono(g.u(i)) - sand(DiffPoly(1), -i, g.u(i));
  if (a.is_zero() || c.is_zero()) return RatOp(0);
  RatOp inv = rat_inv(RatOp(ls_minus_one(g.N)));
  return rat_mul(rat_mul(RatOp(a), inv), RatOp(c));
}

}  // namespace

BracketTable adler1_table(int N, int depth, const Scalar& eps) {
  Gauge g{N, N - 1 - depth, true, eps};
  BracketTable T(g.gens());
  for (int i : T.gens) {
    for (int j : T.gens) {
      int e = (i >= 1 && j >= 1) ? 1 : (i <= 0 && j <= 0) ? -1 : 0;
      if (e == 0) continue;
      DiffPoly uij = g.u(i + j);
      if (uij.is_zero()) continue;
      LambdaPoly p;
      p.add_term(-i, shift(uij, -i).scaled(e));
      p.add_term(j, uij.scaled(-e));
      if (!p.is_zero()) T.set(i, j, p);
    }
  }
  return T;
}

BracketTable adler2_table(int N, int depth, AdlerGauge gauge,
                          const Scalar& eps) {
  bool monic = gauge == AdlerGauge::Monic;
  int hi = monic ? N - 1 : N;
  Gauge g{N, hi - depth, monic, eps};
  BracketTable T(g.gens());
  Scalar half(1, 2);
  for (int i : T.gens) {
    for (int j : T.gens) {
      SkewPoly s = quadratic_sum(g, i, j);
      // -1/2 u_j ((LS)^j + 1)((LS)^{-i} - 1) u_i, expanded termwise.
      const DiffPoly ui = g.u(i), uj = g.u(j);
      SkewPoly corr = sand(uj, j - i, ui) - sand(uj, j, ui) +
                      sand(uj, -i, ui) - sand(uj, 0, ui);
      s = s + SkewPoly(DiffFrac(-half)) * corr;
      set_local(T, i, j, s);
    }
  }
  return T;
}

BracketTable adler2_dirac_table(int N, int depth, const Scalar& eps) {
  Gauge g{N, N - 1 - depth, true, eps};
  BracketTable T(g.gens());
  for (int i : T.gens) {
    for (int j : T.gens) {
      RatOp r(quadratic_sum(g, i, j));
      r = rat_add(r, monic_correction(g, i, j));
      set_entry(T, i, j, r);
    }
  }
  return T;
}

BracketTable adler3_dirac_N1_table(int depth, const Scalar& eps) {
  Gauge g{1, -depth, true, eps};
  BracketTable T(g.gens());
  RatOp inv_up = rat_inv(RatOp(ls_minus_one(1)));     // (LS - 1)^{-1}
  RatOp inv_dn = rat_inv(RatOp(ls_minus_one(-1)));    // ((LS)^{-1} - 1)^{-1}
  for (int i : T.gens) {
    for (int j : T.gens) {
      // Double sums, with the roles of the two slots exchanged relative
      // to the correction terms (the pairing that makes the table
      // skewsymmetric and match the operator identity).
      const long si = j, sj = i;
      SkewPoly loc;
      for (long a = g.lo; a <= si; ++a) {
        for (long b = g.lo; b <= 1; ++b) {
          long c = si + sj - a - b;
          if (c < g.lo || c > 1) continue;
          loc = loc + triple(g.u(a), a, g.u(b), b - sj, g.u(c)) -
                triple(g.u(b), si - a, g.u(a), a + b - si - sj, g.u(c));
        }
      }
      for (long a = sj + 1; a <= 1; ++a) {
        for (long b = g.lo; b <= 1; ++b) {
          long c = si + sj - a - b;
          if (c < g.lo || c > 1) continue;
          loc = loc - triple(g.u(c), c, g.u(a), a - sj, g.u(b)) +
                triple(g.u(c), si - b, g.u(b), -a, g.u(a));
        }
      }
      RatOp r(loc);

      // (1 - (LS)^{-i}) u_i, shared by two corrections.
      SkewPoly ci = mono(g.u(i)) - sand(DiffPoly(1), -i, g.u(i));

      // - (u_{j-1} (LS)^j - LS u_{j-1}) (LS-1)^{-1} (1 - (LS)^{-i}) u_i
      SkewPoly a3 = sand(g.u(j - 1), j, DiffPoly(1)) -
                    sand(DiffPoly(1), 1, g.u(j - 1));
      if (!a3.is_zero() && !ci.is_zero())
        r = rat_sub(r, rat_mul(rat_mul(RatOp(a3), inv_up), RatOp(ci)));

      // u_j ((LS)^j - 1), shared by the remaining corrections.
      SkewPoly a4 = sand(g.u(j), j, DiffPoly(1)) - mono(g.u(j));
      if (!a4.is_zero()) {
        // + u_j ((LS)^j-1) ((LS)^{-1}-1)^{-1} (L^{-1} - (LS)^{-i}) u_{i-1}
        DiffPoly um = g.u(i - 1);
        if (!um.is_zero()) {
          SkewPoly c4 = SkewPoly::monomial(DiffFrac(um), -1) -
                        sand(DiffPoly(1), -i, um);
          if (!c4.is_zero())
            r = rat_add(r, rat_mul(rat_mul(RatOp(a4), inv_dn), RatOp(c4)));
        }
        // - u_j ((LS)^j-1) ((LS-1)^{-1} u_0 - u_0 ((LS)^{-1}-1)^{-1})
        //       (1 - (LS)^{-i}) u_i
        DiffPoly u0 = g.u(0);
        if (!u0.is_zero() && !ci.is_zero()) {
          RatOp mid = rat_sub(rat_mul(inv_up, RatOp(mono(u0))),
                              rat_mul(RatOp(mono(u0)), inv_dn));
          r = rat_sub(r, rat_mul(rat_mul(RatOp(a4), mid), RatOp(ci)));
        }
      }
      set_entry(T, i, j, r);
    }
  }
  return T;
}

BracketTable table_scaled(const BracketTable& t, const Scalar& c) {
  BracketTable out(t.gens);
  if (scalar_is_zero(c)) return out;
  for (const auto& [ij, e] : t.entries()) {
    if (const auto* lp = std::get_if<LambdaPoly>(&e)) {
      out.set(ij.first, ij.second, lp->scaled(DiffPoly(c)));
    } else {
      out.set(ij.first, ij.second,
              rat_mul(RatOp(DiffFrac(c)), std::get<RatOp>(e)));
    }
  }
  return out;
}

std::pair<BracketTable, BracketTable> wn_tables(int N, const Scalar& c) {
  if (N < 2) throw std::invalid_argument("wn_tables: N must be >= 2");
  Gauge g{N, 1, true, 0};
  std::vector<int> gens;
  for (int a = 1; a <= N - 1; ++a) gens.push_back(a);

  BracketTable H1(gens);
  for (int i : gens) {
    for (int j : gens) {
      DiffPoly uij = g.u(i + j);
      if (uij.is_zero()) continue;
      LambdaPoly p;
      p.add_term(-i, shift(uij, -i));
      p.add_term(j, -uij);
      if (!p.is_zero()) H1.set(i, j, p);
    }
  }

  BracketTable H2(gens);
  for (int i : gens) {
    for (int j : gens) {
      SkewPoly s;
      for (long n = 1; n <= j; ++n)
        s = s + sand(g.u(n), n - i, g.u(i + j - n));
      for (long n = i; n <= i + j - 1; ++n)
        s = s - sand(g.u(n), n - i, g.u(i + j - n));
      RatOp r(s);
      r = rat_add(r, monic_correction(g, i, j));
      set_entry(H2, i, j, r);
    }
  }

  if (!scalar_is_zero(c)) H2 = table_sum(table_scaled(H1, c), H2);
  return {H1, H2};
}

const DiffPoly& MiuraImage::image(int i) const {
  for (const auto& [g, p] : images)
    if (g == i) return p;
  throw std::out_of_range("MiuraImage::image: no such generator");
}

MiuraImage miura_map(int N) {
  if (N < 2) throw std::invalid_argument("miura_map: N must be >= 2");
  MiuraImage m;
  m.N = N;
  for (int i = 1; i <= N - 1; ++i) {
    Monomial mon;
    if (i >= 2) mon = Monomial::var(i, 0);
    int len = (i == 1) ? N : i;
    for (int k = 0; k < len; ++k) mon = mon * Monomial::var(1, k, -1);
    m.images.emplace_back(i, DiffPoly::term(Scalar(1), mon));
  }
  return m;
}

namespace {

// v_k with the wrap-around v_N = v_1 and v_{k>N} = 0.
DiffPoly an_var(int N, long k) {
  if (k > N) return DiffPoly(0);
  if (k == N) return DiffPoly::var(1, 0);
  return DiffPoly::var(static_cast<int>(k), 0);
}

// Geometric Laurent polynomials (1-(LS)^k)/(1-LS) and its mirror.
SkewPoly geo_up(long k) {
  SkewPoly s;
  for (long t = 0; t < k; ++t) s.set(t, DiffFrac(1));
  return s;
}
SkewPoly geo_dn(long k) {
  SkewPoly s;
  for (long t = 0; t < k; ++t) s.set(-t, DiffFrac(1));
  return s;
}

}  // namespace

std::pair<BracketTable, BracketTable> an_tables(int N) {
  if (N < 2) throw std::invalid_argument("an_tables: N must be >= 2");

  std::vector<int> gens;
  for (int a = 1; a <= N - 1; ++a) gens.push_back(a);
  auto v = [N](long k) { return an_var(N, k); };
  const DiffPoly one(1);

  // (LS)^{-1} v_2 - v_2 LS, the core factor of the linear brackets.
  SkewPoly core = sand(one, -1, v(2)) - sand(v(2), 1, one);

  BracketTable A1(gens);
  // entry (p, q) = {v_p L v_q}; formulas are stated with the second slot
  // on the left.  Entries (1, q>=2) are filled by skewsymmetry.
  for (int p : gens) {
    for (int q : gens) {
      if (p == 1 && q == 1) {
        SkewPoly s = mono(v(1)) * geo_up(N) * core * geo_dn(N) * mono(v(1));
        set_local(A1, 1, 1, s);
      } else if (q == 1) {
        SkewPoly s =
            mono(v(1)) * geo_up(N) * core * geo_dn(p) * mono(v(p)) +
            mono(v(1)) * geo_up(N) *
                (SkewPoly::monomial(DiffFrac(v(p + 1)), 1) -
                 sand(one, -p, v(p + 1)));
        set_local(A1, p, 1, s);
      } else if (p >= 2 && q >= 2) {
        SkewPoly tail = sand(one, -p, v(p + q));
        tail.set(q, tail.coeff(q) - DiffFrac(v(p + q)));
        SkewPoly s =
            mono(v(q)) * geo_up(q) * core * geo_dn(p) * mono(v(p)) +
            mono(v(q)) * geo_up(q) *
                (SkewPoly::monomial(DiffFrac(v(p + 1)), 1) -
                 sand(one, -p, v(p + 1))) +
            (sand(v(q + 1), q, one) - sand(one, -1, v(q + 1))) * geo_dn(p) *
                mono(v(p)) +
            tail;
        set_local(A1, p, q, s);
      }
    }
  }
  for (int q = 2; q <= N - 1; ++q) {
    LambdaPoly e = A1.local_entry(q, 1);
    LambdaPoly sk = -lambda_adjoint(e);
    if (!sk.is_zero()) A1.set(1, q, sk);
  }

  BracketTable A2(gens);
  for (int p : gens) {
    for (int q : gens) {
      if (p == 1 && q == 1) {
        SkewPoly k = (SkewPoly(DiffFrac(1)) -
                      SkewPoly::monomial(DiffFrac(1), 1 - N)) *
                     geo_up(N);
        set_local(A2, 1, 1, mono(v(1)) * k * mono(v(1)));
      } else if (q == 1) {
        SkewPoly k = (SkewPoly(DiffFrac(1)) -
                      SkewPoly::monomial(DiffFrac(1), 1 - p)) *
                     geo_up(N);
        set_local(A2, p, 1, mono(v(1)) * k * mono(v(p)));
      } else if (p >= 2 && q >= 2) {
        // v_q LS (1-(LS)^{q-1})(1-(LS)^{-p})/(1-LS) v_p
        SkewPoly mid = SkewPoly::monomial(DiffFrac(1), 1) * geo_up(q - 1) *
                       (SkewPoly(DiffFrac(1)) -
                        SkewPoly::monomial(DiffFrac(1), -p));
        SkewPoly s = mono(v(q)) * mid * mono(v(p));
        if (q + p <= N + 1) {
          for (long r = 2; r <= p; ++r)
            s = s - sand(v(q + p - r), q - r, v(r));
          for (long r = q; r <= q + p - 2; ++r)
            s = s + sand(v(q + p - r), q - r, v(r));
          // ((LS)^{1-p} - L^{q-1}) v_{q+p-1}
          s = s + sand(one, 1 - p, v(q + p - 1));
          s.set(q - 1, s.coeff(q - 1) - DiffFrac(v(q + p - 1)));
        } else {
          for (long r = q + p - N; r <= p; ++r)
            s = s - sand(v(q + p - r), q - r, v(r));
          for (long r = q; r <= N; ++r)
            s = s + sand(v(q + p - r), q - r, v(r));
        }
        set_local(A2, p, q, s);
      }
    }
  }
  for (int q = 2; q <= N - 1; ++q) {
    LambdaPoly e = A2.local_entry(q, 1);
    LambdaPoly sk = -lambda_adjoint(e);
    if (!sk.is_zero()) A2.set(1, q, sk);
  }
  return {A1, A2};
}

BracketTable general_type_table(const DiffPoly& f,
                                const std::vector<Scalar>& c, int gen) {
  BracketTable T({gen});
  LambdaPoly p;
  for (size_t n = 0; n < c.size(); ++n) {
    if (scalar_is_zero(c[n])) continue;
    long j = static_cast<long>(n) + 1;
    p.add_term(j, (f * shift(f, j)).scaled(c[n]));
    p.add_term(-j, (f * shift(f, -j)).scaled(-c[n]));
  }
  if (!p.is_zero()) T.set(gen, gen, p);
  return T;
}

BracketTable sandwich_table(const DiffPoly& f, const RatOp& r, int gen) {
  for (const SkewPoly* part : {&r.num(), &r.den()}) {
    for (const auto& [n, cf] : part->coeffs()) {
      if (!cf.num().is_constant() || !cf.den().is_constant())
        throw SkewViolation("sandwich_table: kernel must be constant");
    }
  }
  if (!rat_add(r, rat_adjoint(r)).is_zero())
    throw SkewViolation("sandwich_table: kernel fails r(S^-1) = -r(S)");
  BracketTable T({gen});
  RatOp fr{SkewPoly(DiffFrac(f))};
  set_entry(T, gen, gen, rat_mul(rat_mul(fr, r), fr));
  return T;
}

// ---------------------------------------------------------------------
// Generating-series residual check.
// ---------------------------------------------------------------------

namespace {

struct GKey {
  long z = 0, w = 0, l = 0, s = 0;
  friend auto operator<=>(const GKey&, const GKey&) = default;
};

// Finite sum of monomials c * z^z w^w L^l S^s; S acts on everything to
// its right, so products twist the second factor's coefficients.
using GSeries = std::map<GKey, DiffFrac>;

void gs_accum(GSeries& out, const GKey& k, const DiffFrac& c) {
  auto it = out.find(k);
  if (it == out.end()) {
    if (!c.is_zero()) out.emplace(k, c);
    return;
  }
  it->second = it->second + c;
  if (it->second.is_zero()) out.erase(it);
}

GSeries gs_mul(const GSeries& a, const GSeries& b, long lmax) {
  GSeries out;
  for (const auto& [ka, ca] : a) {
    for (const auto& [kb, cb] : b) {
      long l = ka.l + kb.l;
      if (l > lmax || l < -lmax) continue;
      GKey k{ka.z + kb.z, ka.w + kb.w, l, ka.s + kb.s};
      gs_accum(out, k, ca * shift(cb, ka.s));
    }
  }
  return out;
}

GSeries gs_add(const GSeries& a, const GSeries& b) {
  GSeries out = a;
  for (const auto& [k, c] : b) gs_accum(out, k, c);
  return out;
}

GSeries gs_sub(const GSeries& a, const GSeries& b) {
  GSeries out = a;
  for (const auto& [k, c] : b) gs_accum(out, k, -c);
  return out;
}

GSeries gs_scale(const GSeries& a, const Scalar& c) {
  GSeries out;
  for (const auto& [k, v] : a) gs_accum(out, k, v * DiffFrac(c));
  return out;
}

GSeries gs_monomial(long z, long w, long l, long s, const DiffFrac& c) {
  GSeries out;
  gs_accum(out, GKey{z, w, l, s}, c);
  return out;
}

// Directed geometric expansions of ((LS)^step - 1)^{-1}: the ascending
// series -sum_{n>=0} (LS)^{step n} and the descending series
// sum_{n>=1} (LS)^{-step n}.
GSeries geo_inverse(long step, bool ascending, long order) {
  GSeries out;
  if (ascending) {
    for (long n = 0; step * n <= order; ++n)
      gs_accum(out, GKey{0, 0, step * n, step * n}, DiffFrac(-1));
  } else {
    for (long n = 1; step * n <= order; ++n)
      gs_accum(out, GKey{0, 0, -step * n, -step * n}, DiffFrac(1));
  }
  return out;
}

struct ResidualContext {
  long lo = 0, N = 0, lmax = 0, T = 0;
  GSeries Lz, Lw, LwlS, Lwl, Lstar, dplus, dplus0;

  GSeries mul(const GSeries& a, const GSeries& b) const {
    return gs_mul(a, b, lmax);
  }
  GSeries chain(const std::vector<const GSeries*>& fs) const {
    GSeries out = *fs.front();
    for (size_t i = 1; i < fs.size(); ++i) out = mul(out, *fs[i]);
    return out;
  }
};

GSeries rhs_series(const ResidualContext& c, AdlerKind kind,
                   const DiffFrac& u0) {
  const GSeries X = gs_monomial(-1, 1, 1, 1, DiffFrac(1));  // w L S / z
  switch (kind) {
    case AdlerKind::Adler1: {
      GSeries m1 = gs_monomial(-1, 1, 1, 0, DiffFrac(1));  // w L / z
      GSeries lhs1 = c.mul(c.dplus, gs_sub(c.mul(X, c.Lstar), c.Lw));
      GSeries lhs2 =
          c.mul(gs_sub(c.mul(c.Lz, m1), c.Lwl), c.dplus0);
      return gs_sub(lhs1, lhs2);
    }
    case AdlerKind::Adler2: {
      GSeries r = gs_sub(c.chain({&c.LwlS, &c.dplus, &c.Lstar}),
                         c.chain({&c.Lz, &c.dplus, &c.Lw}));
      GSeries half = gs_scale(
          c.mul(gs_add(c.LwlS, c.Lw), gs_sub(c.Lstar, c.Lz)), Scalar(1, 2));
      return gs_sub(r, half);
    }
    case AdlerKind::Adler2DiracMonic: {
      GSeries r = gs_sub(c.chain({&c.LwlS, &c.dplus, &c.Lstar}),
                         c.chain({&c.Lz, &c.dplus, &c.Lw}));
      GSeries pn = gs_monomial(0, 0, c.N, c.N, DiffFrac(1));
      GSeries pre = gs_sub(c.mul(c.Lw, pn), c.LwlS);
      GSeries post = gs_sub(c.Lz, c.Lstar);
      GSeries corr;
      for (bool asc : {true, false}) {
        GSeries inv = geo_inverse(c.N, asc, c.T);
        corr = gs_add(corr, c.chain({&pre, &inv, &post}));
      }
      return gs_add(r, gs_scale(corr, Scalar(1, 2)));
    }
    case AdlerKind::Adler3DiracN1: {
      GSeries wls = gs_monomial(0, 1, 1, 1, DiffFrac(1));   // w L S
      GSeries zl = gs_monomial(1, 0, -1, 0, DiffFrac(1));   // z L^-1
      GSeries zsl = gs_monomial(1, 0, -1, -1, DiffFrac(1)); // z (LS)^-1
      GSeries diffw = gs_sub(c.LwlS, c.Lw);
      GSeries diffz = gs_sub(c.Lz, c.Lstar);
      GSeries u0m = gs_monomial(0, 0, 0, 0, u0);

      GSeries t1 = c.mul(c.chain({&c.LwlS, &c.Lz, &c.dplus}),
                         gs_sub(c.Lstar, c.mul(X, c.Lw)));
      GSeries t2 = c.mul(gs_sub(c.Lz, c.mul(c.LwlS, X)),
                         c.chain({&c.dplus, &c.Lw, &c.Lstar}));
      GSeries pre3 = gs_sub(c.mul(c.LwlS, wls), c.mul(wls, c.Lw));
      GSeries pre4 = diffw;
      GSeries post4 = gs_sub(c.mul(c.Lz, zl), c.mul(zsl, c.Lstar));

      GSeries corr;
      for (bool asc : {true, false}) {
        GSeries invA = geo_inverse(1, asc, c.T);  // (LS-1)^{-1}
        // ((LS)^{-1}-1)^{-1}: ascending sum_{n>=1}(LS)^n, descending
        // -sum_{n>=0}(LS)^{-n}.
        GSeries invB;
        if (asc) {
          for (long n = 1; n <= c.T; ++n)
            gs_accum(invB, GKey{0, 0, n, n}, DiffFrac(1));
        } else {
          for (long n = 0; n <= c.T; ++n)
            gs_accum(invB, GKey{0, 0, -n, -n}, DiffFrac(-1));
        }
        GSeries t3 = c.chain({&pre3, &invA, &diffz});
        GSeries t4 = c.chain({&pre4, &invB, &post4});
        GSeries t5 = c.chain({&pre4, &invA, &u0m, &diffz});
        GSeries t6 = c.chain({&pre4, &u0m, &invB, &diffz});
        corr = gs_add(corr, gs_add(gs_sub(t4, t3), gs_sub(t6, t5)));
      }
      return gs_add(gs_sub(t1, t2), gs_scale(corr, Scalar(1, 2)));
    }
  }
  throw std::logic_error("rhs_series: unknown kind");
}

}  // namespace

ResidualReport adler_residual(const DiffOp& L, const BracketTable& H,
                              AdlerKind kind, long window) {
  if (L.coeffs().empty())
    throw std::invalid_argument("adler_residual: zero operator");
  ResidualContext c;
  c.lo = L.coeffs().begin()->first;
  c.N = L.coeffs().rbegin()->first;
  if (kind == AdlerKind::Adler3DiracN1 && c.N != 1)
    throw std::invalid_argument("adler_residual: cubic form requires N = 1");
  long span = c.N - c.lo;
  c.lmax = window + span + 8;
  c.T = c.lmax + span + 4;

  DiffFrac u0(0);
  for (const auto& [a, cf] : L.coeffs()) {
    c.Lz = gs_add(c.Lz, gs_monomial(a, 0, 0, 0, cf));
    c.Lw = gs_add(c.Lw, gs_monomial(0, a, 0, 0, cf));
    c.LwlS = gs_add(c.LwlS, gs_monomial(0, a, a, a, cf));
    c.Lwl = gs_add(c.Lwl, gs_monomial(0, a, a, 0, cf));
    c.Lstar = gs_add(c.Lstar, gs_monomial(a, 0, -a, -a, shift(cf, -a)));
    if (a == 0) u0 = cf;
  }
  for (long n = 0; n <= c.T; ++n) {
    gs_accum(c.dplus, GKey{-n, n, n, n}, DiffFrac(1));
    gs_accum(c.dplus0, GKey{-n, n, n, 0}, DiffFrac(1));
  }

  GSeries rhs = rhs_series(c, kind, u0);

  // Collapse the trailing S powers: the series acts on 1.
  std::map<std::tuple<long, long, long>, DiffFrac> rhs_val;
  for (const auto& [k, cf] : rhs) {
    auto key = std::make_tuple(k.z, k.w, k.l);
    auto it = rhs_val.find(key);
    if (it == rhs_val.end())
      rhs_val.emplace(key, cf);
    else
      it->second = it->second + cf;
  }

  std::set<long> rows;
  for (long i = c.lo; i <= c.N + 2; ++i) rows.insert(i);
  for (int gct : H.gens) rows.insert(gct);

  ResidualReport rep;
  rep.clean_window = window;
  long min_bad = window + 1;
  for (long i : rows) {
    for (long j : rows) {
      std::map<long, DiffFrac> lhs;
      bool igen = std::count(H.gens.begin(), H.gens.end(), (int)i);
      bool jgen = std::count(H.gens.begin(), H.gens.end(), (int)j);
      if (igen && jgen) {
        if (const auto* e = H.find((int)i, (int)j)) {
          if (const auto* lp = std::get_if<LambdaPoly>(e)) {
            for (const auto& [k, cf] : lp->coeffs) lhs[k] = DiffFrac(cf);
          } else {
            lhs = rat_symbol(std::get<RatOp>(*e), window);
          }
        }
      }
      for (long k = -window; k <= window; ++k) {
        DiffFrac l(0), r(0);
        if (auto it = lhs.find(k); it != lhs.end()) l = it->second;
        if (auto it = rhs_val.find(std::make_tuple(i, j, k));
            it != rhs_val.end())
          r = it->second;
        if (l == r) continue;
        rep.zero = false;
        min_bad = std::min(min_bad, std::max<long>(1, std::abs(k)));
        if (rep.violations.size() < 20) {
          std::ostringstream os;
          os << "residual nonzero at z^" << i << " w^" << j << " L^" << k;
          rep.violations.push_back(os.str());
        }
      }
    }
  }
  if (!rep.zero) rep.clean_window = min_bad - 1;
  return rep;
}

}  // namespace mpva
