#pragma once

#include <optional>
#include <string>
#include <vector>

#include "quasigrade/cells.hpp"
#include "quasigrade/decompose.hpp"
#include "quasigrade/formula.hpp"

namespace qg {

// base + all nonnegative integer combinations of gens. Generators are kept
// nonzero and pairwise distinct; dependencies between them are allowed.
struct LinearSet {
  IntVec base;
  std::vector<IntVec> gens;

  Index dim() const { return base.size(); }
};

// LinearSet whose generators are linearly independent, so every member has
// a unique multiplier witness and membership needs no search.
struct SimpleSet {
  IntVec base;
  std::vector<IntVec> gens;

  Index dim() const { return base.size(); }
};

// Disjoint union of simple sets.
struct SemisimpleSet {
  std::vector<SimpleSet> pieces;
};

// Union of linear sets, overlaps allowed.
struct SemilinearSet {
  std::vector<LinearSet> pieces;

  Index dim() const { return pieces.empty() ? 0 : pieces[0].dim(); }
};

bool memberSimple(const SimpleSet& S, const IntVec& u);
bool memberLinear(const LinearSet& L, const IntVec& u, const Caps& caps);
bool memberSemisimple(const SemisimpleSet& S, const IntVec& u);
bool memberSemilinear(const SemilinearSet& M, const IntVec& u, const Caps& caps);

// Constraint form of a simple set: equalities cut the affine span,
// inequalities cut the cone sides, congruences cut the generator lattice
// inside the span.
CellSet simpleToCells(const SimpleSet& S, const std::vector<std::string>& vars);
CellSet semisimpleToCells(const SemisimpleSet& S,
                          const std::vector<std::string>& vars);

// Membership formula of a union of linear sets: one existential multiplier
// block per piece. This is the entry point for converting sets with
// dependent generators, via quantifier elimination.
FormulaPtr semilinearFormula(const SemilinearSet& M,
                             const std::vector<std::string>& vars);
CellSet semilinearToCells(const SemilinearSet& M,
                          const std::vector<std::string>& vars,
                          const Caps& caps);

// Disjoint simple decomposition with the same membership: disjoint cells
// first, then one simple piece per fundamental-parallelepiped point of each
// simplicial recession piece.
SemisimpleSet cellsToSemisimple(const CellSet& C, const Caps& caps);

SemilinearSet minkowskiSum(const SemilinearSet& A, const SemilinearSet& B);

// Componentwise image under u -> T u.
SemilinearSet linearImage(const SemilinearSet& A, const IntMat& T);

// Elements that are not sums of two nonzero elements (the identity is never
// an atom). M must be a submonoid of Z^d with trivial unit group; unless
// assumeMonoid is set this is spot-checked on a box and violations raise
// NotAMonoid with a witness.
SemisimpleSet atoms(const SemilinearSet& M, bool assumeMonoid, const Caps& caps);

// Slice queries: the first n.size() coordinates of S are parameters, the
// rest range. sliceCount counts the slice exactly or reports it infinite.
struct SliceCount {
  bool finite;
  Int count;
};
SliceCount sliceCount(const CellSet& S, const IntVec& n, const Caps& caps);

enum class ExtremeKind { Empty, Finite, Unbounded };
struct SliceExtreme {
  ExtremeKind kind;
  Int value;
};
SliceExtreme sliceExtreme(const CellSet& S, const IntVec& n,
                          const IntVec& lambda, bool maximize,
                          const Caps& caps);

}  // namespace qg
