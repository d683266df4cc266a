// Constructors for the bracket tables attached to generic (truncated)
// Laurent difference operators: the 1-, 2- and 3-Adler coefficient
// brackets, their Dirac-reduced monic forms, the rational W-type pairs and
// their local images under the Miura change of variables, general-type and
// sandwich single-generator brackets, and a generating-series residual
// check tying every coefficient table back to its defining operator
// identity.
//
// Conventions shared by all constructors:
//   * the operator is L = sum_{a <= N} u_a S^a with coefficients indexed by
//     their S-power; "monic" means u_N = 1 and u_{k>N} = 0;
//   * "depth" keeps generators u_a for hi-depth <= a <= hi (hi = N-1 in
//     monic gauge, N in free gauge) and sets every lower coefficient to
//     zero, which again yields a Poisson structure on the smaller ring;
//   * the optional eps shifts the S^0 coefficient: u_0 -> u_0 + eps,
//     producing the tables of the shifted operator L + eps.

#pragma once

#include <utility>

#include "mpva/lambda.hpp"

namespace mpva {

// Which operator identity a table is meant to satisfy.
enum class AdlerKind { Adler1, Adler2, Adler2DiracMonic, Adler3DiracN1 };

enum class AdlerGauge { Monic, Free };

// First structure: {u_i L u_j} = eps_{ij} ((LS)^{-i} - L^j) u_{i+j} with
// eps_{ij} = 1 if i,j >= 1, -1 if i,j <= 0, and 0 otherwise; monic gauge.
BracketTable adler1_table(int N, int depth, const Scalar& eps = Scalar(0));

// Second structure (coefficient form of the quadratic operator identity):
//   {u_i L u_j} = sum_{n=0}^{N-i} ( u_{j-n} (LS)^{j-i-n} u_{i+n}
//                                   - u_{i+n} (LS)^n u_{j-n} )
//                 - 1/2 u_j ((LS)^j + 1)((LS)^{-i} - 1) u_i .
// Free gauge keeps u_N as a generator; monic gauge sets u_N = 1.
BracketTable adler2_table(int N, int depth, AdlerGauge gauge,
                          const Scalar& eps = Scalar(0));

// Dirac reduction of the free second structure by the constraint u_N = 1:
// same double sum plus the rational correction
//   u_j ((LS)^N - (LS)^j) ((LS)^N - 1)^{-1} (1 - (LS)^{-i}) u_i .
// Entries are stored locally whenever the correction reduces (always for
// N = 1).
BracketTable adler2_dirac_table(int N, int depth,
                                const Scalar& eps = Scalar(0));

// Dirac-reduced cubic structure for N = 1 (monic, u_1 = 1): explicit
// coefficient formula with two finite double sums and four rational
// correction terms carrying (LS - 1)^{-1} or ((LS)^{-1} - 1)^{-1}.
BracketTable adler3_dirac_N1_table(int depth, const Scalar& eps = Scalar(0));

// Entrywise scalar multiple (local and rational entries alike).
BracketTable table_scaled(const BracketTable& t, const Scalar& c);

// W-type pair on generators u_1..u_{N-1} (u_N = 1, u_0 eliminated against
// the central parameter c): first component the linear table
//   {u_i L u_j} = ((LS)^{-i} - L^j) u_{i+j},
// second component c * (first) plus the quadratic table
//   {u_i L u_j} = (sum_{n=1}^j - sum_{n=i}^{i+j-1}) u_n (LS)^{n-i} u_{i+j-n}
//                 + u_j ((LS)^N - (LS)^j)((LS)^N - 1)^{-1} (1 - (LS)^{-i}) u_i.
std::pair<BracketTable, BracketTable> wn_tables(int N,
                                                const Scalar& c = Scalar(0));

// Images of the local variables v_1..v_{N-1} as Laurent monomials in the
// u's:  v_1 = (u_1 S(u_1) ... S^{N-1}(u_1))^{-1},
//       v_i = u_i (u_1 S(u_1) ... S^{i-1}(u_1))^{-1}  for 2 <= i <= N-1.
struct MiuraImage {
  int N = 2;
  std::vector<std::pair<int, DiffPoly>> images;  // (generator i, v_i)
  const DiffPoly& image(int i) const;
};
MiuraImage miura_map(int N);

// Local pair on v_1..v_{N-1} (with v_N = v_1, v_{k>N} = 0): the closed
// forms of the W-type pair pushed through the Miura change of variables,
// with geometric quotients (1 - (LS)^k)/(1 - LS) expanded as the Laurent
// polynomials they denote.  Entries are stated in the v-variables; they
// match the operator-bracket pushforward after substituting the images.
std::pair<BracketTable, BracketTable> an_tables(int N);

// Single-generator bracket of general type,
//   {u L u} = sum_{j=1}^{N} c_j f(u) ( f(u_j) L^j - f(u_{-j}) L^{-j} ),
// where f is a difference polynomial in the generator `gen` only and
// c = (c_1..c_N).
BracketTable general_type_table(const DiffPoly& f,
                                const std::vector<Scalar>& c, int gen = 0);

// Single-generator sandwich bracket {u L u} = f(u) r(LS) f(u) for a
// constant-coefficient rational kernel r; requires r(S^{-1}) = -r(S)
// (throws SkewViolation otherwise).
BracketTable sandwich_table(const DiffPoly& f, const RatOp& r, int gen = 0);

struct ResidualReport {
  bool zero = true;
  // Largest w <= window such that every residual coefficient with
  // |L-power| <= w vanishes (== window when zero).
  long clean_window = 0;
  std::vector<std::string> violations;
};

// Expand both sides of the operator identity named by `kind` for the
// concrete operator L (coefficient at S^a of L is the ring element u_a)
// on the coefficient window: rows i, j from the table generators plus a
// two-row margin above, bracket powers |k| <= window.  The left side is
// read off the table entries (half-sum symbols for rational entries); the
// right side is assembled from truncated generating series with the
// rational kernels expanded as averaged two-sided geometric series.
ResidualReport adler_residual(const DiffOp& L, const BracketTable& H,
                              AdlerKind kind, long window);

}  // namespace mpva
