#include <doctest.h>

#include <random>

#include "mpva/parser.hpp"
#include "mpva/psdo.hpp"

using namespace mpva;

namespace {

// Toda operator L = S + v + u S^-1 on generators v (index 0), u (index -1).
DiffOp toda_L() {
  DiffOp L;
  L.set_coeff(1, DiffFrac(1));
  L.set_coeff(0, DiffFrac(DiffPoly::var(0, 0)));
  L.set_coeff(-1, DiffFrac(DiffPoly::var(-1, 0)));
  return L;
}

// Modified Volterra operator L = S + 1/u - 1/u_1 - u^-2 S^-1, generator u.
DiffOp mvolterra_L() {
  DiffOp L;
  L.set_coeff(1, DiffFrac(1));
  L.set_coeff(0, DiffFrac(DiffPoly::var(1, 0, -1) - DiffPoly::var(1, 1, -1)));
  L.set_coeff(-1, DiffFrac(-DiffPoly::var(1, 0, -2)));
  return L;
}

DiffOp random_op(std::mt19937& rng) {
  std::uniform_int_distribution<int> coin(0, 2), expo(-2, 2), coeff(-3, 3),
      sh(-1, 1);
  DiffOp r;
  for (int t = 0; t < 3; ++t) {
    DiffPoly c(coeff(rng));
    if (coin(rng)) c = c * DiffPoly::var(1, sh(rng));
    r.set_coeff(expo(rng), DiffFrac(c));
  }
  return r;
}

}  // namespace

TEST_CASE("twist S o f = S(f) S") {
  DiffOp S = DiffOp::monomial(DiffFrac(1), 1);
  DiffOp f = DiffOp::constant(DiffFrac(DiffPoly::var(1, 0)));
  DiffOp prod = op_mul(S, f);
  CHECK(prod.coeff(1) == DiffFrac(DiffPoly::var(1, 1)));
}

TEST_CASE("Toda L^2") {
  RingCtx r = RingCtx::named({{0, "v"}, {-1, "u"}});
  DiffOp L2 = op_power(toda_L(), 2);
  CHECK(L2.coeff(2) == DiffFrac(1));
  CHECK(L2.coeff(1) == parse_frac("v + v[1]", r));
  CHECK(L2.coeff(0) == parse_frac("u + u[1] + v^2", r));
  CHECK(L2.coeff(-1) == parse_frac("u*v + u*v[-1]", r));
  CHECK(L2.coeff(-2) == parse_frac("u*u[-1]", r));
  auto [plus, minus] = op_parts(L2);
  CHECK(plus.coeffs().size() == 3);
  CHECK(minus.coeffs().size() == 2);
  CHECK(op_add(plus, minus) == L2);
}

TEST_CASE("Toda parts") {
  auto [plus, minus] = op_parts(toda_L());
  CHECK(plus.coeff(1) == DiffFrac(1));
  CHECK(plus.coeff(0) == DiffFrac(DiffPoly::var(0, 0)));
  CHECK(minus.coeff(-1) == DiffFrac(DiffPoly::var(-1, 0)));
}

TEST_CASE("modified Volterra residue of L^2") {
  RingCtx r = RingCtx::indexed("u", {1});
  DiffOp L2 = op_power(mvolterra_L(), 2);
  DiffFrac m = op_mres(L2);
  CHECK(m == parse_frac("-2/(u*u[1])", r));
  // int h1 = 1/2 int mres L^2 with h1 = -1/(u u1)
  Functional lhs = canonical_functional((m * DiffFrac(Scalar(1, 2))).as_poly());
  Functional rhs = canonical_functional(parse_poly("-u^-1*u[1]^-1", r));
  CHECK(lhs == rhs);
}

TEST_CASE("adjoint is an anti-involution") {
  DiffOp f_S = DiffOp::monomial(DiffFrac(DiffPoly::var(1, 0)), 1);
  DiffOp adj = op_adjoint(f_S);
  CHECK(adj.coeff(-1) == DiffFrac(DiffPoly::var(1, -1)));

  std::mt19937 rng(7);
  for (int it = 0; it < 50; ++it) {
    DiffOp A = random_op(rng), B = random_op(rng);
    CHECK(op_adjoint(op_adjoint(A)) == A);
    CHECK(op_adjoint(op_mul(A, B)) == op_mul(op_adjoint(B), op_adjoint(A)));
  }
}

TEST_CASE("associativity on random finite operators") {
  std::mt19937 rng(11);
  for (int it = 0; it < 50; ++it) {
    DiffOp A = random_op(rng), B = random_op(rng), C = random_op(rng);
    CHECK(op_mul(A, op_mul(B, C)) == op_mul(op_mul(A, B), C));
  }
}

TEST_CASE("trace identity: int mres [A,B] = 0") {
  std::mt19937 rng(13);
  for (int it = 0; it < 50; ++it) {
    DiffOp A = random_op(rng), B = random_op(rng);
    DiffFrac m = op_mres(commutator(A, B));
    REQUIRE(m.is_polynomial());
    CHECK(canonical_functional(m.as_poly()).is_zero());
  }
}

TEST_CASE("truncation propagates pessimistically") {
  DiffOp L = make_generic({.N = 1, .depth = 1, .monic = true});
  CHECK(L.coeff(1) == DiffFrac(1));
  CHECK(L.coeff(0) == DiffFrac(DiffPoly::var(0, 0)));
  CHECK(L.coeff(-1) == DiffFrac(DiffPoly::var(-1, 0)));
  CHECK(L.trunc() == -2);
  CHECK_THROWS_AS(L.coeff(-2), TruncationAmbiguity);

  DiffOp L2 = op_mul(L, L);
  // Tail O(S^-2) times leading S gives unknown order -1.
  CHECK(L2.trunc() == -1);
  CHECK(L2.coeff(2) == DiffFrac(1));
  CHECK_THROWS_AS(L2.coeff(-1), TruncationAmbiguity);
  // The positive part is still resolved; the ambiguity stays in the tail.
  auto [p2, m2] = op_parts(L2);
  CHECK(p2.coeff(0) == L2.coeff(0));
  CHECK(m2.trunc() == -1);
  CHECK_THROWS_AS(m2.coeff(-1), TruncationAmbiguity);
  // A marker at or above S^0 does make the positive part ambiguous.
  DiffOp L3 = op_mul(L2, L2);
  CHECK(L3.trunc() == 1);
  CHECK_THROWS_AS(op_parts(L3), TruncationAmbiguity);

  // Recomputing with a larger depth never changes resolved coefficients.
  DiffOp Ld = make_generic({.N = 1, .depth = 3, .monic = true});
  DiffOp Ld2 = op_mul(Ld, Ld);
  for (long n = 0; n <= 2; ++n) CHECK(Ld2.coeff(n) == L2.coeff(n));
}

TEST_CASE("generic operator, free gauge") {
  DiffOp L = make_generic({.N = 2, .depth = 1, .monic = false});
  CHECK(L.coeff(2) == DiffFrac(DiffPoly::var(2, 0)));
  CHECK(L.coeff(1) == DiffFrac(DiffPoly::var(1, 0)));
  CHECK(L.coeff(0) == DiffFrac(DiffPoly::var(0, 0)));
  CHECK(L.trunc() == -1);
}
