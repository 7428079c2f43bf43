#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "quasigrade/cells.hpp"
#include "quasigrade/monomial.hpp"

namespace qg {

// Coefficient field for rank computations: 0 means exact rationals, a prime
// p means the prime field GF(p). Betti numbers of monomial ideals can depend
// on the characteristic, so every table records the field it was computed
// over.
struct FieldConfig {
  unsigned long characteristic = 0;
};

// One graded piece k{shift + support}: dimension 1 exactly at the degrees b
// with b - shift in the support. Supports constructed here are differences
// of monomial upsets (possibly localized), so structure maps between alive
// degrees never factor through zero.
struct IndicatorSummand {
  IntVec shift;
  CellSet support;

  bool alive(const IntVec& b) const { return support.contains(b - shift); }
};

// Complex of indicator summands with integer scalar matrices. diffs[i] maps
// terms[i] to terms[i-1]; rows index the target summands, columns the
// source. Cohomological complexes are stored at negated indices so the one
// convention covers both directions.
struct GradedComplex {
  Index d = 0;
  std::map<int, std::vector<IndicatorSummand>> terms;
  std::map<int, IntMat> diffs;
};

// The differential at one degree: diffs[i] restricted to the summands alive
// at b on both sides.
IntMat degreewiseDiff(const GradedComplex& C, int i, const IntVec& b);

// Graded modules built from monomial ideals over one free ring.
struct ModuleExpr;
using ModulePtr = std::shared_ptr<const ModuleExpr>;

struct ModuleExpr {
  enum class Kind { Quotient, Ideal, SubQuotient, Shift, Sum };
  Kind kind = Kind::Quotient;
  MonomialIdeal I;  // Quotient: R/I; Ideal: I; SubQuotient: I/J
  MonomialIdeal J;
  ModulePtr inner;  // Shift
  IntVec shift;
  std::vector<ModulePtr> parts;  // Sum
};

ModulePtr quotientModule(MonomialIdeal I);
ModulePtr idealAsModule(MonomialIdeal I);
// Checks J subset of I generatorwise.
ModulePtr subquotientModule(MonomialIdeal I, MonomialIdeal J);
// Degree twist: shiftModule(M, a) has degree-b piece M_{b-a}.
ModulePtr shiftModule(ModulePtr M, IntVec a);
ModulePtr sumModule(std::vector<ModulePtr> parts);

RingPtr moduleRing(const ModuleExpr& M);

// One indicator summand per direct summand of M.
std::vector<IndicatorSummand> moduleSummands(const ModuleExpr& M,
                                             const Caps& caps);

// Exact k-dimension of M at one degree.
long hilbertDim(const ModuleExpr& M, const IntVec& b, const Caps& caps);

// Taylor resolution of R/I: the index-i term has one free summand R(-lcm S)
// per size-i subset S of the generators. Exact off degree 0 with homology
// R/I there.
GradedComplex taylorOfQuotient(const MonomialIdeal& I, const Caps& caps);

// Same complex with the rank-one degree-0 term removed and indices shifted
// down: a resolution of the ideal itself.
GradedComplex taylorComplex(const MonomialIdeal& I, const Caps& caps);

// Koszul complex on all ring variables, as the Taylor resolution of the
// maximal ideal.
GradedComplex koszulComplex(const RingPtr& R, const Caps& caps);

// C tensor M and graded Hom(C, M) for a complex C of free summands. The Hom
// complex lives at negated indices, so H^i is its homology at -i.
GradedComplex tensorComplex(const GradedComplex& C,
                            const std::vector<IndicatorSummand>& M);
GradedComplex homComplex(const GradedComplex& C,
                         const std::vector<IndicatorSummand>& M);

// Matlis dual of a summand list: degree-b piece of the dual is the dual of
// the degree(-b) piece.
std::vector<IndicatorSummand> dualSummands(
    const std::vector<IndicatorSummand>& M);

// Cech complex of M at the given monomials, stored at indices 0, -1, ...,
// -r; cohomological degree l sits at index -l. Localization supports are
// computed exactly: a degree survives when its forward ray along the
// inverted variables eventually stays inside the support.
GradedComplex cechComplex(const ModuleExpr& M,
                          const std::vector<IntVec>& monomials,
                          const Caps& caps);

struct Box {
  IntVec low, high;
};

enum class Certificate { ShellStable, UserBox, ExactSupport, Inconclusive };

const char* certificateName(Certificate c);

// Nonzero homology dimensions keyed by homological index and degree.
struct DegreewiseTable {
  std::map<int, std::map<IntVec, long, LexLess>> dims;
  Certificate certificate = Certificate::UserBox;
  FieldConfig field;

  Int total() const;
  long at(int i, const IntVec& b) const;
};

// Homology dimensions of C at every degree of the box; certificate user-box.
DegreewiseTable degreewiseHomology(const GradedComplex& C, const Box& box,
                                   const FieldConfig& field, const Caps& caps);

// Optional restriction to lo <= sum of coordinates <= hi.
struct Window {
  std::optional<Int> lo, hi;
};

struct LengthReport {
  bool finite = true;
  Int length = 0;
  DegreewiseTable table;
};

// length of Tor_i(M, N), degreewise over a shell-stabilized box. Whichever
// argument is Taylor-resolvable gets resolved; Tor is symmetric.
LengthReport torLengths(int i, const ModuleExpr& M, const ModuleExpr& N,
                        const FieldConfig& field, const Caps& caps);

// length of Ext^i(M, N) via graded Hom of the Taylor resolution of M into N.
LengthReport extLengths(int i, const ModuleExpr& M, const ModuleExpr& N,
                        const FieldConfig& field, const Caps& caps);

// i-th Betti number: length of Tor_i(M, R/m).
LengthReport betti(int i, const ModuleExpr& M, const FieldConfig& field,
                   const Caps& caps);

// Degrees negated, dimensions kept.
DegreewiseTable matlisDual(const DegreewiseTable& T);

// Lengths of H^i_m(M) for i = 0..d from the Cech complex on all variables,
// each with its own stabilization verdict; an optional window restricts to
// degrees with bounded coordinate sum.
std::map<int, LengthReport> localCohomologyLengths(const ModuleExpr& M,
                                                   const Window& window,
                                                   const FieldConfig& field,
                                                   const Caps& caps);

// Cohomology supported at an arbitrary monomial set, indices 0..r.
std::map<int, LengthReport> localCohomologyLengths(
    const ModuleExpr& M, const std::vector<IntVec>& monomials,
    const Window& window, const FieldConfig& field, const Caps& caps);

// Exact count of the nonzero degrees, no value when it is infinite. The
// windowed variant restricts to lo <= coordinate sum <= hi.
std::optional<Int> moduleLength(const ModuleExpr& M, const Caps& caps);
std::optional<Int> moduleLength(const ModuleExpr& M, const Window& window,
                                const Caps& caps);

// a-invariants (max coordinate sum of nonzero H^i_m, absent when H^i = 0),
// regularity, depth, and dimension.
struct StdInvariants {
  std::vector<std::optional<Int>> a;
  Int reg = 0;
  int depth = 0;
  int dim = 0;
};

StdInvariants stdInvariants(const ModuleExpr& M, const FieldConfig& field,
                            const Caps& caps);

// Bass number mu_i(p, M): rank of Ext^i(R/p, M) localized at the face
// complementary to p, read off on the degrees supported on p's variables.
long bassNumber(int i, const MonomialPrime& p, const ModuleExpr& M,
                const FieldConfig& field, const Caps& caps);

// min of lambda . u over the nonzero degrees of (0 :_M p)/(0 :_M (p+J^inf)),
// J the product of the monomial primes properly containing p. present is
// false when that subquotient is zero (p is not associated to M).
struct VInvariantReport {
  bool present = false;
  Int value = 0;
  IntVec witness;
};

VInvariantReport vInvariant(const MonomialPrime& p, const IntVec& lambda,
                            const ModuleExpr& M, const Caps& caps);

// Exact lengths of M/I^m M for m in [mLow, mHigh]; I must contain a pure
// power of every variable.
std::vector<Int> hilbertSamuel(const MonomialIdeal& I, const ModuleExpr& M,
                               long mLow, long mHigh, const Caps& caps);

// Multiplicity e_0(m, M): stabilized dim(M)-th difference of the
// Hilbert-Samuel function.
Int multiplicityDeg(const ModuleExpr& M, const FieldConfig& field,
                    const Caps& caps);

// Hilbert-Samuel coefficient e_j(I, M) in the expansion
//   len(M / I^m M) = sum_j (-1)^j e_j binom(m - 1 + delta - j, delta - j)
// for m large, delta = dim(M). The polynomial is interpolated from sample
// lengths and accepted once two further samples confirm it.
Int hilbertCoefficient(int j, const MonomialIdeal& I, const ModuleExpr& M,
                       const FieldConfig& field, const Caps& caps);

// Homological degree: deg(M) plus binomially weighted homological degrees
// of the Ext modules Ext^i(M, R) for i past the codimension. Ext layers
// must have finite length (their hdeg is then their length); otherwise the
// computation refuses rather than approximating.
Rat hdeg(const ModuleExpr& M, const FieldConfig& field, const Caps& caps);

}  // namespace qg
