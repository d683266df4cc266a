#include "mpva/dirac.hpp"

#include <map>
#include <set>

#include "mpva/errors.hpp"

namespace mpva {

namespace {

RatMatrix mat_zero(size_t r, size_t c) {
  return RatMatrix(r, std::vector<RatOp>(c));
}

RatMatrix mat_mul(const RatMatrix& a, const RatMatrix& b) {
  size_t r = a.size(), k = b.size(), c = b.empty() ? 0 : b[0].size();
  RatMatrix out = mat_zero(r, c);
  for (size_t i = 0; i < r; ++i)
    for (size_t t = 0; t < k; ++t) {
      if (a[i][t].is_zero()) continue;
      for (size_t j = 0; j < c; ++j) {
        if (b[t][j].is_zero()) continue;
        out[i][j] = rat_add(out[i][j], rat_mul(a[i][t], b[t][j]));
      }
    }
  return out;
}

RatMatrix mat_add(const RatMatrix& a, const RatMatrix& b) {
  RatMatrix out = a;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j)
      out[i][j] = rat_add(a[i][j], b[i][j]);
  return out;
}

RatMatrix mat_neg(const RatMatrix& a) {
  RatMatrix out = a;
  for (auto& row : out)
    for (auto& e : row) e = rat_neg(e);
  return out;
}

// Cheap size measure used to pick Gauss pivots.
size_t op_size(const RatOp& r) {
  return r.num().coeffs().size() + 4 * r.den().coeffs().size();
}

// H as the matrix with (a, b) entry the operator of {u_{gens[b]} L
// u_{gens[a]}}; bracket tables store the transposed orientation.
RatMatrix structure_matrix(const BracketTable& H) {
  size_t l = H.gens.size();
  RatMatrix M = mat_zero(l, l);
  for (size_t a = 0; a < l; ++a)
    for (size_t b = 0; b < l; ++b)
      M[a][b] = H.op_entry(H.gens[b], H.gens[a]);
  return M;
}

// Frechet derivative matrix of the constraints and its formal adjoint.
std::pair<RatMatrix, RatMatrix> frechet_matrices(const BracketTable& H,
                                                 const ConstraintSet& T) {
  size_t m = T.thetas.size(), l = H.gens.size();
  RatMatrix D = mat_zero(m, l), Dstar = mat_zero(l, m);
  for (size_t a = 0; a < m; ++a) {
    std::map<int, DiffOp> rows;
    for (const FrechetRow& fr : frechet(T.thetas[a])) rows[fr.gen] = fr.op;
    for (size_t i = 0; i < l; ++i) {
      auto it = rows.find(H.gens[i]);
      if (it == rows.end()) continue;
      D[a][i] = RatOp::from_op(it->second);
      Dstar[i][a] = rat_adjoint(D[a][i]);
    }
  }
  return {D, Dstar};
}

void set_reduced(BracketTable& T, int i, int j, const RatOp& r) {
  if (r.is_zero()) return;
  if (auto op = rat_is_polynomial(r)) {
    T.set(i, j, op_to_lambda(*op));
  } else {
    T.set(i, j, r);
  }
}

// Substitute the constant value for every shift of the generator.
DiffPoly subst_gen_const(const DiffPoly& p,
                         const std::map<int, Scalar>& vals) {
  DiffPoly out;
  for (const auto& [mon, c] : p.terms) {
    Scalar coeff = c;
    Monomial rest;
    bool dead = false;
    for (const auto& [v, e] : mon.factors) {
      auto it = vals.find(v.gen);
      if (it == vals.end()) {
        rest = rest * Monomial::var(v.gen, v.shift, e);
        continue;
      }
      if (scalar_is_zero(it->second)) {
        if (e < 0)
          throw NonlocalResult(
              "dirac_reduce: constrained variable inverted at value 0");
        dead = true;
        break;
      }
      Scalar f = it->second;
      for (int t = 0; t < (e < 0 ? -e : e); ++t) {
        if (e > 0)
          coeff *= f;
        else
          coeff /= f;
      }
    }
    if (!dead) out.add_term(rest, coeff);
  }
  return out;
}

DiffFrac subst_gen_const(const DiffFrac& f,
                         const std::map<int, Scalar>& vals) {
  DiffPoly num = subst_gen_const(f.num(), vals);
  DiffPoly den = subst_gen_const(f.den(), vals);
  if (den.is_zero())
    throw NonlocalResult("dirac_reduce: denominator vanished");
  return DiffFrac(num, den);
}

SkewPoly subst_gen_const(const SkewPoly& p,
                         const std::map<int, Scalar>& vals) {
  SkewPoly out;
  for (const auto& [n, c] : p.coeffs()) out.set(n, subst_gen_const(c, vals));
  return out;
}

RatOp subst_gen_const(const RatOp& r, const std::map<int, Scalar>& vals) {
  SkewPoly num = subst_gen_const(r.num(), vals);
  SkewPoly den = subst_gen_const(r.den(), vals);
  if (den.is_zero())
    throw NonlocalResult("dirac_reduce: operator denominator vanished");
  return RatOp::fraction(num, den, r.prefactor());
}

}  // namespace

std::optional<std::vector<std::pair<int, Scalar>>> ConstraintSet::block_form()
    const {
  std::vector<std::pair<int, Scalar>> out;
  for (const DiffPoly& th : thetas) {
    std::optional<std::pair<int, Scalar>> found;
    Scalar c(0);
    bool ok = true;
    for (const auto& [mon, coeff] : th.terms) {
      if (mon.is_one()) {
        c = coeff;
        continue;
      }
      if (mon.factors.size() != 1 || found.has_value()) {
        ok = false;
        break;
      }
      const auto& [v, e] = *mon.factors.begin();
      if (e != 1 || v.shift != 0 || coeff != Scalar(1)) {
        ok = false;
        break;
      }
      found = {v.gen, Scalar(0)};
    }
    if (!ok || !found) return std::nullopt;
    found->second = c;
    out.push_back(*found);
  }
  return out;
}

RatMatrix constraint_matrix(const BracketTable& H, const ConstraintSet& T) {
  auto [D, Dstar] = frechet_matrices(H, T);
  return mat_mul(mat_mul(D, structure_matrix(H)), Dstar);
}

RatMatrix rat_matrix_inverse(const RatMatrix& A) {
  size_t m = A.size();
  RatMatrix M = A, X = mat_zero(m, m);
  for (size_t i = 0; i < m; ++i) X[i][i] = RatOp(1);

  for (size_t col = 0; col < m; ++col) {
    size_t pivot = m;
    for (size_t r = col; r < m; ++r) {
      if (M[r][col].is_zero()) continue;
      if (pivot == m || op_size(M[r][col]) < op_size(M[pivot][col]))
        pivot = r;
    }
    if (pivot == m)
      throw SingularConstraintMatrix("constraint matrix is singular");
    std::swap(M[col], M[pivot]);
    std::swap(X[col], X[pivot]);
    RatOp pinv = rat_inv(M[col][col]);
    for (size_t j = 0; j < m; ++j) {
      M[col][j] = rat_mul(pinv, M[col][j]);
      X[col][j] = rat_mul(pinv, X[col][j]);
    }
    for (size_t r = 0; r < m; ++r) {
      if (r == col || M[r][col].is_zero()) continue;
      RatOp f = M[r][col];
      for (size_t j = 0; j < m; ++j) {
        M[r][j] = rat_sub(M[r][j], rat_mul(f, M[col][j]));
        X[r][j] = rat_sub(X[r][j], rat_mul(f, X[col][j]));
      }
    }
  }
  return X;
}

BracketTable dirac_modify(const BracketTable& H, const ConstraintSet& T) {
  RatMatrix Hm = structure_matrix(H);
  auto [D, Dstar] = frechet_matrices(H, T);
  RatMatrix C = mat_mul(mat_mul(D, Hm), Dstar);
  RatMatrix Cinv = rat_matrix_inverse(C);
  RatMatrix B = mat_mul(Hm, Dstar);
  RatMatrix Bstar = mat_neg(mat_mul(D, Hm));
  RatMatrix HD = mat_add(Hm, mat_mul(mat_mul(B, Cinv), Bstar));

  BracketTable out(H.gens);
  size_t l = H.gens.size();
  for (size_t a = 0; a < l; ++a)
    for (size_t b = 0; b < l; ++b)
      set_reduced(out, H.gens[b], H.gens[a], HD[a][b]);
  return out;
}

RatMatrix block_quasideterminant(const RatMatrix& H, int m) {
  size_t l = H.size(), mm = static_cast<size_t>(m);
  RatMatrix H1 = mat_zero(mm, mm), H2 = mat_zero(mm, l - mm);
  RatMatrix H3 = mat_zero(l - mm, mm), H4 = mat_zero(l - mm, l - mm);
  for (size_t i = 0; i < l; ++i)
    for (size_t j = 0; j < l; ++j) {
      if (i < mm && j < mm)
        H1[i][j] = H[i][j];
      else if (i < mm)
        H2[i][j - mm] = H[i][j];
      else if (j < mm)
        H3[i - mm][j] = H[i][j];
      else
        H4[i - mm][j - mm] = H[i][j];
    }
  return mat_add(H4, mat_neg(mat_mul(mat_mul(H3, rat_matrix_inverse(H1)),
                                     H2)));
}

BracketTable dirac_reduce(const BracketTable& H, const ConstraintSet& T) {
  auto bf = T.block_form();
  if (!bf)
    throw std::invalid_argument(
        "dirac_reduce: constraints must have the form u_g + c");

  BracketTable mod = dirac_modify(H, T);

  std::map<int, Scalar> vals;
  for (const auto& [g, c] : *bf) vals[g] = -c;

  std::vector<int> kept;
  for (int g : H.gens)
    if (!vals.count(g)) kept.push_back(g);

  BracketTable out(kept);
  for (int i : kept)
    for (int j : kept) {
      const BracketTable::Entry* e = mod.find(i, j);
      if (!e) continue;
      if (const auto* lp = std::get_if<LambdaPoly>(e)) {
        LambdaPoly sub;
        for (const auto& [k, c] : lp->coeffs)
          sub.add_term(k, subst_gen_const(c, vals));
        if (!sub.is_zero()) out.set(i, j, sub);
      } else {
        set_reduced(out, i, j, subst_gen_const(std::get<RatOp>(*e), vals));
      }
    }
  return out;
}

}  // namespace mpva
