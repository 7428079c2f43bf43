#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "quasigrade/dense.hpp"
#include "quasigrade/errors.hpp"

namespace qg {

// Linear term over named integer variables: sum of coeff*var plus a constant.
// Variables with coefficient zero are not stored.
struct LinTerm {
  std::map<std::string, Int> coeffs;
  Int constant = 0;

  static LinTerm var(const std::string& name) {
    LinTerm t;
    t.coeffs[name] = 1;
    return t;
  }
  static LinTerm lit(const Int& k) {
    LinTerm t;
    t.constant = k;
    return t;
  }

  bool isGround() const { return coeffs.empty(); }
  bool mentions(const std::string& name) const { return coeffs.count(name) > 0; }
  Int coeffOf(const std::string& name) const {
    auto it = coeffs.find(name);
    return it == coeffs.end() ? Int(0) : it->second;
  }

  LinTerm& operator+=(const LinTerm& o);
  LinTerm& operator-=(const LinTerm& o);
  LinTerm& operator*=(const Int& k);
  friend LinTerm operator+(LinTerm a, const LinTerm& b) { return a += b; }
  friend LinTerm operator-(LinTerm a, const LinTerm& b) { return a -= b; }
  friend LinTerm operator*(const Int& k, LinTerm t) { return t *= k; }
  friend LinTerm operator-(LinTerm t) { return t *= Int(-1); }
  bool operator==(const LinTerm& o) const {
    return coeffs == o.coeffs && constant == o.constant;
  }

  // Replaces the variable by a term (the variable must not occur in it).
  LinTerm substituted(const std::string& name, const LinTerm& repl) const;
  Int eval(const std::map<std::string, Int>& env) const;
  std::string str() const;
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Presburger formulas. Comparisons are lowered at construction to the
// canonical atoms t < 0, t = 0, t != 0, m | t, !(m | t), so everything past
// the parser works with five atom shapes.
struct Formula {
  enum class Kind {
    True,
    False,
    Lt,       // term < 0
    Eq,       // term = 0
    Ne,       // term != 0
    Dvd,      // modulus | term
    Ndvd,     // !(modulus | term)
    Not,
    And,
    Or,
    Implies,  // args[0] -> args[1]
    Exists,
    Forall,
  };

  Kind kind;
  LinTerm term;                       // Lt, Eq, Ne, Dvd, Ndvd
  Int modulus;                        // Dvd, Ndvd; always >= 1
  std::vector<FormulaPtr> args;       // Not, And, Or, Implies
  std::vector<std::string> binders;   // Exists, Forall
  FormulaPtr body;                    // Exists, Forall
};

FormulaPtr mkTrue();
FormulaPtr mkFalse();
FormulaPtr mkBool(bool b);
FormulaPtr mkLt(LinTerm t);              // t < 0
FormulaPtr mkEq(LinTerm t);              // t = 0
FormulaPtr mkNe(LinTerm t);              // t != 0
FormulaPtr mkDvd(Int m, LinTerm t);      // m | t, m >= 1 after normalization
FormulaPtr mkNdvd(Int m, LinTerm t);
FormulaPtr mkNot(FormulaPtr f);
FormulaPtr mkAnd(std::vector<FormulaPtr> fs);
FormulaPtr mkOr(std::vector<FormulaPtr> fs);
FormulaPtr mkImplies(FormulaPtr a, FormulaPtr b);
FormulaPtr mkExists(std::vector<std::string> vars, FormulaPtr body);
FormulaPtr mkForall(std::vector<std::string> vars, FormulaPtr body);

// Comparison sugar; lowers to Lt/Eq/Ne over integers.
enum class CmpOp { Le, Lt, Eq, Ne, Ge, Gt };
FormulaPtr mkCmp(const LinTerm& lhs, CmpOp op, const LinTerm& rhs);

// Free variables, sorted by name. The sorted order is the coordinate order
// used whenever a formula meets a tuple.
std::vector<std::string> freeVariables(const FormulaPtr& f);

// Capture-avoiding substitution of a term for a free variable.
FormulaPtr substitute(const FormulaPtr& f, const std::string& name,
                      const LinTerm& repl);

bool isQuantifierFree(const FormulaPtr& f);

// Exact evaluation; rejects quantifiers.
bool evalQuantifierFree(const FormulaPtr& f,
                        const std::map<std::string, Int>& env);

// Negation normal form over the canonical atoms; neither Not nor Implies
// survives, and quantifiers are rejected.
FormulaPtr toNnf(const FormulaPtr& f, bool negate = false);

// Ground-atom evaluation, gcd reduction of atoms, flattening, short
// circuits. Counts created atoms against caps.qeAtoms.
FormulaPtr simplifyFormula(const FormulaPtr& f, const Caps& caps, long& atomBudget);

std::string toString(const FormulaPtr& f);

// Concrete syntax described in the CLI help; throws Error(Syntax, ...) with
// position information on malformed input.
FormulaPtr parseFormula(const std::string& text);

// Cooper quantifier elimination: an equivalent quantifier-free formula over
// the same free variables.
FormulaPtr eliminateQuantifiers(const FormulaPtr& f, const Caps& caps);

}  // namespace qg
