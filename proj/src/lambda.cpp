#include "mpva/lambda.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <utility>

#include "mpva/errors.hpp"

namespace mpva {

// ---------------------------------------------------------------------------
// LambdaPoly

LambdaPoly LambdaPoly::monomial(const DiffPoly& c, long k) {
  LambdaPoly p;
  p.add_term(k, c);
  return p;
}

DiffPoly LambdaPoly::coeff(long k) const {
  auto it = coeffs.find(k);
  return it == coeffs.end() ? DiffPoly() : it->second;
}

void LambdaPoly::add_term(long k, const DiffPoly& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = coeffs.try_emplace(k, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) coeffs.erase(it);
  }
}

LambdaPoly LambdaPoly::operator+(const LambdaPoly& o) const {
  LambdaPoly r = *this;
  for (const auto& [k, c] : o.coeffs) r.add_term(k, c);
  return r;
}

LambdaPoly LambdaPoly::operator-(const LambdaPoly& o) const {
  return *this + (-o);
}

LambdaPoly LambdaPoly::operator-() const {
  LambdaPoly r;
  for (const auto& [k, c] : coeffs) r.coeffs.emplace(k, -c);
  return r;
}

LambdaPoly LambdaPoly::operator*(const LambdaPoly& o) const {
  LambdaPoly r;
  for (const auto& [k, c] : coeffs)
    for (const auto& [k2, c2] : o.coeffs) r.add_term(k + k2, c * c2);
  return r;
}

LambdaPoly LambdaPoly::scaled(const DiffPoly& c) const {
  LambdaPoly r;
  for (const auto& [k, ck] : coeffs) r.add_term(k, ck * c);
  return r;
}

LambdaPoly LambdaPoly::mul_lambda(long k) const {
  LambdaPoly r;
  for (const auto& [n, c] : coeffs) r.coeffs.emplace(n + k, c);
  return r;
}

LambdaPoly lambda_adjoint(const LambdaPoly& p) {
  LambdaPoly r;
  for (const auto& [k, c] : p.coeffs) r.add_term(-k, shift(c, -k));
  return r;
}

DiffOp lambda_to_op(const LambdaPoly& p) {
  DiffOp a;
  for (const auto& [k, c] : p.coeffs) a.set_coeff(k, DiffFrac(c));
  return a;
}

LambdaPoly op_to_lambda(const DiffOp& a) {
  LambdaPoly p;
  for (const auto& [k, c] : a.coeffs()) p.add_term(k, c.as_poly());
  return p;
}

// ---------------------------------------------------------------------------
// Frechet derivative

std::vector<FrechetRow> frechet(const DiffPoly& a) {
  std::vector<FrechetRow> rows;
  for (int g : support_gens(a)) {
    FrechetRow row;
    row.gen = g;
    for (const auto& [gen, n] : support_vars(a)) {
      if (gen != g) continue;
      DiffPoly d = partial(a, g, n);
      if (!d.is_zero()) row.op.set_coeff(n, DiffFrac(d));
    }
    if (!row.op.is_zero()) rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// BracketTable

void BracketTable::set(int i, int j, Entry e) {
  if (std::find(gens.begin(), gens.end(), i) == gens.end()) gens.push_back(i);
  if (std::find(gens.begin(), gens.end(), j) == gens.end()) gens.push_back(j);
  e_[{i, j}] = std::move(e);
}

const BracketTable::Entry* BracketTable::find(int i, int j) const {
  auto it = e_.find({i, j});
  return it == e_.end() ? nullptr : &it->second;
}

bool BracketTable::all_local() const {
  for (const auto& [ij, e] : e_)
    if (std::holds_alternative<RatOp>(e)) return false;
  return true;
}

LambdaPoly BracketTable::local_entry(int i, int j) const {
  const Entry* e = find(i, j);
  if (!e) return LambdaPoly();
  if (std::holds_alternative<RatOp>(*e))
    throw RationalEntry("bracket table entry is an operator, not a Laurent "
                        "polynomial");
  return std::get<LambdaPoly>(*e);
}

RatOp BracketTable::op_entry(int i, int j) const {
  const Entry* e = find(i, j);
  if (!e) return RatOp();
  if (std::holds_alternative<RatOp>(*e)) return std::get<RatOp>(*e);
  return RatOp::from_op(lambda_to_op(std::get<LambdaPoly>(*e)));
}

BracketTable table_sum(const BracketTable& a, const BracketTable& b) {
  BracketTable s(a.gens);
  for (int g : b.gens)
    if (std::find(s.gens.begin(), s.gens.end(), g) == s.gens.end())
      s.gens.push_back(g);
  std::set<std::pair<int, int>> keys;
  for (const auto& [ij, e] : a.entries()) keys.insert(ij);
  for (const auto& [ij, e] : b.entries()) keys.insert(ij);
  for (const auto& [i, j] : keys) {
    const BracketTable::Entry* ea = a.find(i, j);
    const BracketTable::Entry* eb = b.find(i, j);
    if (!ea && !eb) continue;
    bool local = (!ea || std::holds_alternative<LambdaPoly>(*ea)) &&
                 (!eb || std::holds_alternative<LambdaPoly>(*eb));
    if (local) {
      LambdaPoly sum = a.local_entry(i, j) + b.local_entry(i, j);
      if (!sum.is_zero()) s.set(i, j, sum);
    } else {
      RatOp sum = rat_add(a.op_entry(i, j), b.op_entry(i, j));
      if (!sum.is_zero()) s.set(i, j, sum);
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Master formula (local tables, exact)

LambdaPoly master_bracket(const DiffPoly& a, const DiffPoly& b,
                          const BracketTable& H) {
  LambdaPoly out;
  auto sa = support_vars(a);
  auto sb = support_vars(b);
  for (const auto& [i, m] : sa) {
    DiffPoly da = partial(a, i, m);
    if (da.is_zero()) continue;
    for (const auto& [j, n] : sb) {
      DiffPoly db = partial(b, j, n);
      if (db.is_zero()) continue;
      LambdaPoly entry = H.local_entry(i, j);  // {u_i L u_j} = sum h_k L^k
      for (const auto& [k, h] : entry.coeffs)
        out.add_term(n - m + k, db * shift(h * shift(da, k - m), n));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Operator-level bracket

RatOp bracket_operator(const DiffPoly& a, const DiffPoly& b,
                       const BracketTable& H) {
  RatOp acc;
  std::vector<FrechetRow> ra = frechet(a), rb = frechet(b);
  for (const FrechetRow& rowb : rb)
    for (const FrechetRow& rowa : ra) {
      RatOp h = H.op_entry(rowa.gen, rowb.gen);
      if (h.is_zero()) continue;
      RatOp term = rat_mul(RatOp::from_op(rowb.op), h);
      term = rat_mul(term, RatOp::from_op(op_adjoint(rowa.op)));
      acc = rat_add(acc, term);
    }
  return acc;
}

// ---------------------------------------------------------------------------
// Skewsymmetry

CheckReport check_skewsymmetry(const BracketTable& H) {
  CheckReport rep;
  for (int i : H.gens)
    for (int j : H.gens) {
      const BracketTable::Entry* eij = H.find(i, j);
      const BracketTable::Entry* eji = H.find(j, i);
      if (!eij && !eji) continue;
      bool local = (!eij || std::holds_alternative<LambdaPoly>(*eij)) &&
                   (!eji || std::holds_alternative<LambdaPoly>(*eji));
      bool ok;
      if (local) {
        ok = (H.local_entry(i, j) + lambda_adjoint(H.local_entry(j, i)))
                 .is_zero();
      } else {
        ok = rat_add(H.op_entry(i, j), rat_adjoint(H.op_entry(j, i)))
                 .is_zero();
      }
      if (!ok) {
        std::ostringstream msg;
        msg << "skewsymmetry fails on generator pair (" << i << ", " << j
            << ")";
        rep.passed = false;
        rep.violations.push_back(msg.str());
      }
    }
  return rep;
}

// ---------------------------------------------------------------------------
// Jacobi identity
//
// Both sides are bivariate Laurent polynomials in (L, M).  The right-hand
// side {{u_i L u_j}_{LM} u_k} is evaluated with the L-dependence of the
// inner bracket kept as a scalar prefactor: for {u_i L u_j} = sum q_n L^n,
//
//     RHS = sum_n L^n {q_n _nu u_k}|_{nu = LM} .

namespace {

// Fraction-coefficient bracket polynomial; used both for the exact local
// check (polynomials embed) and for the truncated rational oracle.
using FracLambda = std::map<long, DiffFrac>;

void fl_add(FracLambda& p, long k, const DiffFrac& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = p.try_emplace(k, c);
  if (!fresh) {
    it->second = it->second + c;
    if (it->second.is_zero()) p.erase(it);
  }
}

DiffFrac frac_partial(const DiffFrac& f, int gen, long n) {
  DiffPoly dn = partial(f.num(), gen, n);
  if (f.is_polynomial()) return DiffFrac(dn);
  DiffPoly dd = partial(f.den(), gen, n);
  // Quotient rule (n/d)' = (n' d - n d') / d^2.
  return DiffFrac(dn * f.den() - f.num() * dd, f.den() * f.den());
}

std::set<std::pair<int, long>> frac_support(const DiffFrac& f) {
  std::set<std::pair<int, long>> s = support_vars(f.num());
  auto sd = support_vars(f.den());
  s.insert(sd.begin(), sd.end());
  return s;
}

// Generator brackets for the Jacobi computation: exact Laurent-polynomial
// view of a local table, or a truncated directed expansion of a rational
// one.
struct TableView {
  std::vector<int> gens;
  std::map<std::pair<int, int>, FracLambda> entry;
  const FracLambda& at(int i, int j) const {
    static const FracLambda empty;
    auto it = entry.find({i, j});
    return it == entry.end() ? empty : it->second;
  }
};

TableView exact_view(const BracketTable& H) {
  TableView v;
  v.gens = H.gens;
  for (const auto& [ij, e] : H.entries()) {
    FracLambda f;
    for (const auto& [k, c] : std::get<LambdaPoly>(e).coeffs)
      f.emplace(k, DiffFrac(c));
    v.entry.emplace(ij, std::move(f));
  }
  return v;
}

// Rational entries stand for their bilateral (half-sum) symbols; a
// one-sided expansion would not even be skewsymmetric as a series, so the
// truncated oracle must use the symbol window.
TableView symbol_view(const BracketTable& H, long order) {
  TableView v;
  v.gens = H.gens;
  for (const auto& [ij, e] : H.entries())
    v.entry.emplace(ij, rat_symbol(H.op_entry(ij.first, ij.second), order));
  return v;
}

// Master formula over fraction coefficients against a table view.
FracLambda master_frac(const DiffFrac& a, const DiffFrac& b,
                       const TableView& T) {
  FracLambda out;
  for (const auto& [i, m] : frac_support(a)) {
    DiffFrac da = frac_partial(a, i, m);
    if (da.is_zero()) continue;
    for (const auto& [j, n] : frac_support(b)) {
      DiffFrac db = frac_partial(b, j, n);
      if (db.is_zero()) continue;
      for (const auto& [k, h] : T.at(i, j))
        fl_add(out, n - m + k, db * shift(h * shift(da, k - m), n));
    }
  }
  return out;
}

using BiFrac = std::map<std::pair<long, long>, DiffFrac>;  // (L, M) powers

void bi_add(BiFrac& p, long a, long b, const DiffFrac& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = p.try_emplace(std::make_pair(a, b), c);
  if (!fresh) {
    it->second = it->second + c;
    if (it->second.is_zero()) p.erase(it);
  }
}

// LHS1 - LHS2 - RHS of the Jacobi identity on generators (i, j, k).
BiFrac jacobi_residual(const TableView& T, int i, int j, int k) {
  DiffFrac ui = DiffFrac(DiffPoly::var(i, 0));
  DiffFrac uj = DiffFrac(DiffPoly::var(j, 0));
  DiffFrac uk = DiffFrac(DiffPoly::var(k, 0));
  BiFrac res;
  // {u_i L {u_j M u_k}}: inner exponent is the M power.
  for (const auto& [m, c] : T.at(j, k))
    for (const auto& [a, d] : master_frac(ui, c, T)) bi_add(res, a, m, d);
  // -{u_j M {u_i L u_k}}: inner exponent is the L power.
  for (const auto& [n, c] : T.at(i, k))
    for (const auto& [b, d] : master_frac(uj, c, T)) bi_add(res, n, b, -d);
  // -{{u_i L u_j}_{LM} u_k}.
  for (const auto& [n, q] : T.at(i, j))
    for (const auto& [p, d] : master_frac(q, uk, T))
      bi_add(res, n + p, p, -d);
  return res;
}

long table_order(const BracketTable& H) {
  long e = 1;
  for (const auto& [ij, ent] : H.entries()) {
    if (std::holds_alternative<LambdaPoly>(ent)) {
      for (const auto& [k, c] : std::get<LambdaPoly>(ent).coeffs)
        e = std::max(e, std::abs(k));
    } else {
      const RatOp& r = std::get<RatOp>(ent);
      long d = std::abs(r.prefactor());
      if (!r.num().is_zero()) d += std::abs(r.num().deg());
      d += std::abs(r.den().is_one() ? 0 : r.den().deg());
      e = std::max(e, d);
    }
  }
  return e;
}

}  // namespace

CheckReport check_jacobi(const BracketTable& H, long window) {
  CheckReport rep;
  bool local = H.all_local();
  if (!local && window < 1)
    throw std::domain_error(
        "check_jacobi: window >= 1 required for rational tables");

  TableView view =
      local ? exact_view(H)
            : symbol_view(H, 2 * window + 2 * table_order(H) + 2);

  for (int i : H.gens)
    for (int j : H.gens)
      for (int k : H.gens) {
        BiFrac res = jacobi_residual(view, i, j, k);
        bool ok = true;
        for (const auto& [ab, c] : res) {
          if (!local &&
              (std::abs(ab.first) > window || std::abs(ab.second) > window))
            continue;  // outside the certified window of the oracle
          if (!c.is_zero()) {
            ok = false;
            break;
          }
        }
        if (!ok) {
          std::ostringstream msg;
          msg << "jacobi fails on generators (" << i << ", " << j << ", "
              << k << ")";
          if (!local) msg << " [truncated symbol window]";
          rep.passed = false;
          rep.violations.push_back(msg.str());
        }
      }
  return rep;
}

CheckReport check_compatibility(const BracketTable& H, const BracketTable& K,
                                long window) {
  return check_jacobi(table_sum(H, K), window);
}

}  // namespace mpva
