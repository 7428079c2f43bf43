#pragma once

#include <optional>
#include <vector>

#include "quasigrade/dense.hpp"
#include "quasigrade/normal_form.hpp"

namespace qg {

// Rational polyhedron in H-representation: ineqA*u >= ineqB and eqA*u = eqB.
// Constraint data is integral; the denoted set lives in Q^dim. The
// representation is unreduced: duplicate or redundant rows are permitted.
struct Polyhedron {
  IntMat ineqA;
  IntVec ineqB;
  IntMat eqA;
  IntVec eqB;

  explicit Polyhedron(Index dim = 0)
      : ineqA(0, dim), ineqB(0), eqA(0, dim), eqB(0) {}

  Index dim() const { return ineqA.cols(); }

  void addIneq(const IntVec& a, const Int& b);
  void addEq(const IntVec& a, const Int& b);

  bool contains(const RatVec& u) const;
  bool contains(const IntVec& u) const;

  // {u : ineqA*u >= 0, eqA*u = 0}.
  Polyhedron recessionCone() const;

  // Constraints of both polyhedra, same dimension.
  Polyhedron intersect(const Polyhedron& other) const;

  // Image of the constraints under u = x0 + basis^T * z, where basis rows are
  // directions in u-space; the result constrains z (dim = basis.rows()).
  Polyhedron pullback(const IntVec& x0, const IntMat& basis) const;

  // Substitutes u_j = value and drops the column.
  Polyhedron fixVariable(Index j, const Int& value) const;
};

// Fourier-Motzkin elimination of one variable; the returned system omits
// column j. Exact projection: the result is the shadow of the input.
Polyhedron eliminateVariable(const Polyhedron& P, Index j);

// Projects onto the listed coordinates (in their original order).
Polyhedron projectOnto(const Polyhedron& P, const std::vector<Index>& keep);

bool rationallyFeasible(const Polyhedron& P);

// A rational point of P, if one exists, via elimination + back-substitution.
std::optional<RatVec> rationalPoint(const Polyhedron& P);

struct OptResult {
  enum Kind { Infeasible, Unbounded, Finite } kind = Infeasible;
  Rat value;
};

// sup (maximize) or inf (minimize) of <c,u> over P, exactly.
OptResult rationalOptimum(const Polyhedron& P, const IntVec& c, bool maximize);

// Basis (rows) of the lineality space {u : ineqA*u = 0, eqA*u = 0}.
IntMat linealityBasis(const Polyhedron& P);

// Moves every inequality that holds with equality on all of P into the
// equality block. Requires P rationally feasible.
Polyhedron promoteImpliedEqualities(const Polyhedron& P);

// All lattice points of a bounded P, lexicographically ordered. Throws
// Internal if an unbounded direction is met and ResourceLimit past the cap.
std::vector<IntVec> enumerateIntegerPoints(const Polyhedron& P, long cap);

}  // namespace qg
