#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "quasigrade/cells.hpp"
#include "quasigrade/polyhedron.hpp"
#include "quasigrade/semilinear.hpp"

namespace qg {

// Pointed affine semigroup Q_+ with full-rank difference group; the ring is
// k[Q_+]. Monomials are exponent vectors. The free case (standard N^d) is
// flagged because several operations have closed forms there.
struct SemigroupRing {
  Index d = 0;
  std::vector<IntVec> gens;
  bool isFree = false;
  CellSet cells;  // membership of Q_+ in coordinates u1..ud
};
using RingPtr = std::shared_ptr<const SemigroupRing>;

RingPtr makeFreeRing(Index d);

// Checks pointedness and full rank; builds the membership cells.
RingPtr makeRing(std::vector<IntVec> gens, const Caps& caps);

bool sameRing(const SemigroupRing& a, const SemigroupRing& b);
bool ringContains(const SemigroupRing& R, const IntVec& q);

// b - a in Q_+, the monomial divisibility order.
bool ringDivides(const SemigroupRing& R, const IntVec& a, const IntVec& b);

// Monomial ideal as its unique antichain of minimal generators, lex-sorted.
// No generators = zero ideal; the single generator 0 = unit ideal.
struct MonomialIdeal {
  RingPtr ring;
  std::vector<IntVec> gens;

  bool isZero() const { return gens.empty(); }
  bool isUnit() const { return gens.size() == 1 && isZeroVec(gens[0]); }
};

// Drops non-minimal exponents; every exponent must lie in Q_+.
MonomialIdeal reduceGenerators(const RingPtr& ring, std::vector<IntVec> exps);

bool member(const MonomialIdeal& I, const IntVec& q);

bool sameIdeal(const MonomialIdeal& I, const MonomialIdeal& J);

enum class CombineKind { Sum, Product, Intersection };
MonomialIdeal combine(CombineKind kind, const MonomialIdeal& I,
                      const MonomialIdeal& J, const Caps& caps);

MonomialIdeal power(const MonomialIdeal& I, const Int& e, const Caps& caps);

// I : K and I : K^infinity.
MonomialIdeal colon(const MonomialIdeal& I, const MonomialIdeal& K,
                    const Caps& caps);
MonomialIdeal saturate(const MonomialIdeal& I, const MonomialIdeal& K,
                       const Caps& caps);

// conv(gens) + cone(Q_+) as inequalities; exact facets, small dimensions.
Polyhedron newtonPolyhedron(const MonomialIdeal& I, const Caps& caps);

// Monomials with a kth power in I^k: the lattice upset of the Newton
// polyhedron, as an ideal.
MonomialIdeal integralClosure(const MonomialIdeal& I, const Caps& caps);

// Face prime of the free ring: the ideal of the variables listed in vars.
struct MonomialPrime {
  RingPtr ring;
  std::vector<Index> vars;
};

std::vector<MonomialPrime> minimalPrimes(const MonomialIdeal& I);

MonomialIdeal primeIdeal(const MonomialPrime& p);

// Intersection over the minimal primes of the localized powers, realized by
// saturation at the complementary variables. Free ring only.
MonomialIdeal symbolicPower(const MonomialIdeal& I, const Int& n,
                            const Caps& caps);

// x^q with r q + w strictly inside the scaled Newton polyhedron.
MonomialIdeal multiplierIdeal(const MonomialIdeal& I, const IntVec& w,
                              const Int& r, const Caps& caps);

// Minimal generators of a monomial upset given as a membership formula
// builder over arbitrary coordinate terms. Exact; the upset property makes
// "minimal" equivalent to "no ring generator steps down into the set".
using UpsetAt = std::function<FormulaPtr(const std::vector<LinTerm>&)>;
std::vector<IntVec> minimalUpsetGenerators(const SemigroupRing& R,
                                           const UpsetAt& upsetAt,
                                           const Caps& caps);

// Membership formulas at a point given coordinatewise by linear terms, so
// shifted and differenced points reuse the same construction.
FormulaPtr ringMemberFormula(const SemigroupRing& R,
                             const std::vector<LinTerm>& coords);
FormulaPtr idealMemberFormula(const MonomialIdeal& I,
                              const std::vector<LinTerm>& coords);

std::vector<LinTerm> coordTerms(const std::vector<std::string>& vars);

std::vector<std::string> ringCoordNames(Index d);

}  // namespace qg
