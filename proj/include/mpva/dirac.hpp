// Dirac modification and reduction of bracket tables by constraints: the
// general rational form H + B o C^{-1} o B* built from Frechet derivatives,
// the block-constraint quasideterminant shortcut H4 - H3 o H1^{-1} o H2,
// and the quotient by block-form constraints (substitution of constants
// for the constrained generators).

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "mpva/lambda.hpp"

namespace mpva {

using RatMatrix = std::vector<std::vector<RatOp>>;

// Constraints theta_1, ..., theta_m as ring elements.
struct ConstraintSet {
  std::vector<DiffPoly> thetas;

  // When every constraint has the block shape theta = u_g + c (a single
  // generator plus a constant), the list of (generator, constant) pairs;
  // nullopt otherwise.
  std::optional<std::vector<std::pair<int, Scalar>>> block_form() const;
};

// The m x m constraint matrix C with C_{ab} = operator of
// {theta_b L theta_a}, computed as D_Theta o H o D*_Theta from the
// Frechet derivative rows of the constraints.
RatMatrix constraint_matrix(const BracketTable& H, const ConstraintSet& T);

// Invert a square matrix over the skew field of rational operators by
// Gauss-Jordan elimination (row operations are left multiplications).
// Throws SingularConstraintMatrix when the matrix is singular.
RatMatrix rat_matrix_inverse(const RatMatrix& A);

// Dirac-modified structure H + B o C^{-1} o B* with B = H o D*_Theta and
// B* = -D_Theta o H.  The constraints become central: every entry pairing
// a generator with a constraint vanishes.  Entries that reduce to Laurent
// operators are stored locally.  Throws SingularConstraintMatrix when C
// is not invertible.
BracketTable dirac_modify(const BracketTable& H, const ConstraintSet& T);

// Lower-right block of the Dirac modification for block-form constraints
// on the first m rows/columns: H4 - H3 o H1^{-1} o H2, where H1 is the
// leading m x m block of H.  Throws SingularConstraintMatrix when H1 is
// not invertible.
RatMatrix block_quasideterminant(const RatMatrix& H, int m);

// Full reduction for block-form constraints theta = u_g + c: Dirac-modify,
// drop the constrained generators, and substitute u_g = -c into the
// surviving entries.  Throws NonlocalResult when a substitution leaves an
// entry undefined (constrained variable inverted, or a vanishing
// denominator).
BracketTable dirac_reduce(const BracketTable& H, const ConstraintSet& T);

}  // namespace mpva
