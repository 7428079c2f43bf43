#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quasigrade/homology.hpp"
#include "quasigrade/monomial.hpp"

namespace qg {

// Affine exponent a.n + b over the parameter vector n.
struct AffineForm {
  IntVec coeffs;
  Int constant = 0;

  Int at(const IntVec& n) const;
};

struct FamilyExpr;
using FamilyPtr = std::shared_ptr<const FamilyExpr>;

// Ideal- or module-valued family over parameter points in Z^k, evaluated
// lazily one point at a time. Exponent forms at a nonpositive value yield
// the unit ideal.
struct FamilyExpr {
  enum class Kind {
    Base,              // constant ideal
    Power,             // child(n) ^ form(n)
    Symbolic,          // symbolic power I ^ (form(n))
    Closure,           // integral closure of child(n)
    Multiplier,        // multiplier ideal of child(n) at (weight, thickening)
    Colon,             // child(n) : K^form(n), or : K^inf
    Saturate,          // child(n) : K^inf
    Sum,
    Product,
    Intersect,
    QuotientModule,    // module a(n)/b(n); containment checked per point
    IdealTimesModule,  // module a(n) * module
  };

  Kind kind = Kind::Base;
  Index arity = 0;
  MonomialIdeal I;          // Base/Symbolic ideal, Colon/Saturate divisor
  FamilyPtr a, b;
  AffineForm form;          // Power/Symbolic/Colon exponent
  bool toInfinity = false;  // Colon with an infinite exponent
  IntVec weight;            // Multiplier w
  Int thickening = 1;       // Multiplier r
  ModulePtr module;         // IdealTimesModule right factor
};

// Constructors check ring and arity consistency once, up front.
FamilyPtr baseFamily(MonomialIdeal I, Index arity);
FamilyPtr powerFamily(FamilyPtr F, AffineForm form);
FamilyPtr symbolicFamily(MonomialIdeal I, AffineForm form);
FamilyPtr closureFamily(FamilyPtr F);
FamilyPtr multiplierFamily(FamilyPtr F);
FamilyPtr multiplierFamily(FamilyPtr F, IntVec w, Int r);
FamilyPtr colonFamily(FamilyPtr F, MonomialIdeal K,
                      std::optional<AffineForm> form);
FamilyPtr saturateFamily(FamilyPtr F, MonomialIdeal K);
FamilyPtr combineFamily(CombineKind kind, FamilyPtr F, FamilyPtr G);
FamilyPtr quotientFamily(FamilyPtr F, FamilyPtr G);
FamilyPtr idealTimesModuleFamily(FamilyPtr F, ModulePtr M);

RingPtr familyRing(const FamilyExpr& F);
bool familyIsModuleValued(const FamilyExpr& F);

// Ideal value at a parameter point; module-valued nodes are rejected.
// Kernel errors are rethrown annotated with the constructor path.
MonomialIdeal evaluateIdeal(const FamilyExpr& F, const IntVec& n,
                            const Caps& caps);

// Module value at a parameter point; an ideal-valued family becomes the
// cyclic quotient R/I(n).
ModulePtr evaluateModule(const FamilyExpr& F, const IntVec& n,
                         const Caps& caps);

// I * M, summand by summand.
ModulePtr idealTimesModule(const MonomialIdeal& I, const ModulePtr& M,
                           const Caps& caps);

// Name environment for the family DSL. vars are the coordinate names of
// ring, in order; params fix the parameter order.
struct FamilyEnv {
  RingPtr ring;
  std::vector<std::string> vars;
  std::vector<std::string> params;
  std::map<std::string, MonomialIdeal> ideals;
  std::map<std::string, FamilyPtr> families;
  std::map<std::string, ModulePtr> modules;
};

// Comma-separated monomials over the named variables, e.g. "x^2*y, y^3".
// "1" is the unit ideal, an empty list the zero ideal.
MonomialIdeal parseIdealGens(const std::string& text, const RingPtr& ring,
                             const std::vector<std::string>& vars);

// Family expression syntax:
//   power(F, 2*n-1) | symbolic(I, n) | closure(F) | mult(F [, x*y^2, 3])
//   | colon(F, K, n+1 | inf) | sat(F, K) | sum(F,G) | prod(F,G) | cap(F,G)
//   | quot(F,G) | idealmod(F, M) | ideal(x^2, y) | NAME
FamilyPtr parseFamily(const std::string& text, const FamilyEnv& env);

// Rees consistency data: one ideal per parameter direction.
struct ReesSpec {
  std::vector<MonomialIdeal> J;
};

struct ReesFailure {
  IntVec point;
  Index param = 0;
  IntVec witness;  // exponent of a product generator missing from F(n+e_i)
};

struct ReesReport {
  bool pass = true;
  long checks = 0;
  std::vector<ReesFailure> failures;
};

// Verifies J_i * F(n) inside F(n + e_i) generatorwise for every n in the
// box [lo, hi]. Failures are report content, not errors.
ReesReport reesCheck(const FamilyExpr& F, const ReesSpec& spec,
                     const IntVec& lo, const IntVec& hi, const Caps& caps);

struct TopPoint {
  IntVec point;
  IntVec exponent;
};

// Minimal-generator locations of F over the sampled points, in point order
// and lex generator order within a point.
std::vector<TopPoint> topSetSample(const FamilyExpr& F,
                                   const std::vector<IntVec>& points,
                                   const Caps& caps);

// Checks the sample against a membership predicate phi over paramVars then
// coordVars: every sampled generator satisfies phi, and inside the hull of
// the sampled generators (margin one) every phi-point is a generator.
bool topSetMatches(const FamilyExpr& F, const std::vector<IntVec>& points,
                   const FormulaPtr& phi,
                   const std::vector<std::string>& paramVars,
                   const std::vector<std::string>& coordVars, const Caps& caps);

// One numeric invariant of the evaluated family, computed per sweep point.
struct InvariantSpec {
  enum class Kind {
    Length,        // degree count of the module
    HilbertDim,    // degree count inside the window
    Betti,         // betti(i)
    TorLen,        // length of Tor_i(-, other)
    ExtLen,        // length of Ext^i(-, other)
    LocCohLen,     // length of H^i supported at ideal, inside window
    AInv,          // a_i from the maximal-support cohomology
    Reg,
    Depth,
    Dim,
    Bass,          // bass number mu_i at prime
    VInv,          // v-invariant at prime along lambda
    Mu,            // number of minimal generators of the ideal value
    HsLength,      // length of M / ideal^m M
    HilbertCoeff,  // e_i(ideal, M)
    Deg,           // multiplicity
    Hdeg,          // homological degree
  };

  Kind kind = Kind::Length;
  int i = 0;
  ModulePtr other;
  std::optional<MonomialIdeal> ideal;
  Window window;
  std::optional<MonomialPrime> prime;
  IntVec lambda;
  long m = 1;
  FieldConfig field;
};

std::string invariantName(const InvariantSpec& spec);

struct SweepEntry {
  enum class Status { Value, Infinite, Inconclusive, Error };
  Status status = Status::Value;
  Rat value = 0;     // exact for Value; the stabilized part for Inconclusive
  std::string note;  // error text or certificate remark
};

struct SweepResult {
  std::string invariant;
  FieldConfig field;
  std::vector<std::pair<IntVec, SweepEntry>> samples;  // input order
};

// Evaluates the invariant at every point. Per-point failures become Error
// entries; the sweep itself never throws past a point.
SweepResult sweep(const InvariantSpec& spec, const FamilyExpr& F,
                  const std::vector<IntVec>& points, const Caps& caps);

}  // namespace qg
