#include <functional>

#include "quasigrade/formula.hpp"

namespace qg {
namespace {

bool isAtom(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Lt:
    case Formula::Kind::Eq:
    case Formula::Kind::Ne:
    case Formula::Kind::Dvd:
    case Formula::Kind::Ndvd:
      return true;
    default:
      return false;
  }
}

// Structural map over an NNF, quantifier-free formula.
FormulaPtr mapAtoms(const FormulaPtr& f,
                    const std::function<FormulaPtr(const FormulaPtr&)>& fn) {
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return f;
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<FormulaPtr> out;
      for (const auto& a : f->args) out.push_back(mapAtoms(a, fn));
      return f->kind == Formula::Kind::And ? mkAnd(std::move(out))
                                           : mkOr(std::move(out));
    }
    default:
      if (isAtom(f)) return fn(f);
      fail(ErrorKind::Internal, "mapAtoms expects an NNF formula");
  }
}

LinTerm withCoeff(LinTerm t, const std::string& x, const Int& c) {
  t.coeffs.erase(x);
  if (c != 0) t.coeffs[x] = c;
  return t;
}

FormulaPtr rebuildAtom(const FormulaPtr& f, LinTerm t, const Int& m) {
  switch (f->kind) {
    case Formula::Kind::Lt: return mkLt(std::move(t));
    case Formula::Kind::Eq: return mkEq(std::move(t));
    case Formula::Kind::Ne: return mkNe(std::move(t));
    case Formula::Kind::Dvd: return mkDvd(m, std::move(t));
    case Formula::Kind::Ndvd: return mkNdvd(m, std::move(t));
    default: fail(ErrorKind::Internal, "rebuildAtom on non-atom");
  }
}

// Least common multiple of |coeff(x)| over atoms mentioning x; 0 if absent.
Int coeffLcm(const FormulaPtr& f, const std::string& x) {
  Int l = 0;
  std::function<void(const FormulaPtr&)> go = [&](const FormulaPtr& g) {
    if (isAtom(g)) {
      Int c = abs(g->term.coeffOf(x));
      if (c != 0) l = (l == 0) ? c : intLcm(l, c);
      return;
    }
    for (const auto& a : g->args) go(a);
  };
  if (f->kind != Formula::Kind::True && f->kind != Formula::Kind::False) go(f);
  return l;
}

Int moduliLcm(const FormulaPtr& f, const std::string& x) {
  Int l = 1;
  std::function<void(const FormulaPtr&)> go = [&](const FormulaPtr& g) {
    if (isAtom(g)) {
      if ((g->kind == Formula::Kind::Dvd || g->kind == Formula::Kind::Ndvd) &&
          g->term.mentions(x))
        l = intLcm(l, g->modulus);
      return;
    }
    for (const auto& a : g->args) go(a);
  };
  if (f->kind != Formula::Kind::True && f->kind != Formula::Kind::False) go(f);
  return l;
}

// Lower-bound terms: values b such that x ranges over b + j near the
// constraint boundary. Upper bounds are counted to decide on mirroring.
void collectBounds(const FormulaPtr& f, const std::string& x,
                   std::map<std::string, LinTerm>& lower, long& upperCount) {
  std::function<void(const FormulaPtr&)> go = [&](const FormulaPtr& g) {
    if (isAtom(g)) {
      Int c = g->term.coeffOf(x);
      if (c == 0) return;
      LinTerm r = withCoeff(g->term, x, 0);
      auto add = [&](LinTerm b) { lower.emplace(b.str(), std::move(b)); };
      switch (g->kind) {
        case Formula::Kind::Lt:
          if (c < 0)
            add(r);  // r < x
          else
            ++upperCount;  // x < -r
          break;
        case Formula::Kind::Eq: {
          LinTerm b = (c < 0) ? r : -r;
          b.constant -= 1;
          add(std::move(b));
          ++upperCount;
          break;
        }
        case Formula::Kind::Ne:
          add(c < 0 ? r : -r);
          ++upperCount;
          break;
        default:
          break;
      }
      return;
    }
    if (g->kind == Formula::Kind::And || g->kind == Formula::Kind::Or)
      for (const auto& a : g->args) go(a);
  };
  go(f);
}

FormulaPtr minusInfinity(const FormulaPtr& f, const std::string& x) {
  return mapAtoms(f, [&](const FormulaPtr& g) -> FormulaPtr {
    Int c = g->term.coeffOf(x);
    if (c == 0) return g;
    switch (g->kind) {
      case Formula::Kind::Lt: return mkBool(c > 0);
      case Formula::Kind::Eq: return mkFalse();
      case Formula::Kind::Ne: return mkTrue();
      default: return g;  // divisibility atoms are periodic in x
    }
  });
}

// One Cooper step: eliminate x from a quantifier-free body.
FormulaPtr eliminateOne(const std::string& x, const FormulaPtr& body,
                        const Caps& caps, long& budget) {
  FormulaPtr f = simplifyFormula(toNnf(body), caps, budget);
  Int delta = coeffLcm(f, x);
  if (delta == 0) return f;

  // Scale every atom so the coefficient of x is +-delta, then read delta*x
  // as a fresh unknown constrained by delta | x.
  f = mapAtoms(f, [&](const FormulaPtr& g) -> FormulaPtr {
    Int c = g->term.coeffOf(x);
    if (c == 0) return g;
    Int k = delta / abs(c);
    LinTerm t = g->term;
    t *= k;
    t = withCoeff(t, x, c > 0 ? Int(1) : Int(-1));
    Int m = g->modulus * k;
    return rebuildAtom(g, std::move(t), m);
  });
  f = mkAnd({f, mkDvd(delta, LinTerm::var(x))});

  // Mirror when upper bounds are fewer: x -> -x preserves satisfiability.
  {
    std::map<std::string, LinTerm> lower;
    long upperCount = 0;
    collectBounds(f, x, lower, upperCount);
    if (upperCount < static_cast<long>(lower.size())) {
      f = mapAtoms(f, [&](const FormulaPtr& g) -> FormulaPtr {
        Int c = g->term.coeffOf(x);
        if (c == 0) return g;
        return rebuildAtom(g, withCoeff(g->term, x, -c), g->modulus);
      });
    }
  }

  Int D = moduliLcm(f, x);
  std::map<std::string, LinTerm> lower;
  long upperCount = 0;
  collectBounds(f, x, lower, upperCount);
  FormulaPtr fInf = minusInfinity(f, x);

  std::vector<FormulaPtr> disjuncts;
  for (Int j = 1; j <= D; j += 1) {
    FormulaPtr inf =
        simplifyFormula(substitute(fInf, x, LinTerm::lit(j)), caps, budget);
    if (inf->kind == Formula::Kind::True) return mkTrue();
    if (inf->kind != Formula::Kind::False) disjuncts.push_back(inf);
    for (const auto& [key, b] : lower) {
      LinTerm bj = b;
      bj.constant += j;
      FormulaPtr g = simplifyFormula(substitute(f, x, bj), caps, budget);
      if (g->kind == Formula::Kind::True) return mkTrue();
      if (g->kind != Formula::Kind::False) disjuncts.push_back(g);
    }
  }
  return simplifyFormula(mkOr(std::move(disjuncts)), caps, budget);
}

FormulaPtr qe(const FormulaPtr& f, const Caps& caps, long& budget) {
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::Lt:
    case Formula::Kind::Eq:
    case Formula::Kind::Ne:
    case Formula::Kind::Dvd:
    case Formula::Kind::Ndvd:
      return f;
    case Formula::Kind::Not:
      return mkNot(qe(f->args[0], caps, budget));
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<FormulaPtr> out;
      for (const auto& a : f->args) out.push_back(qe(a, caps, budget));
      return f->kind == Formula::Kind::And ? mkAnd(std::move(out))
                                           : mkOr(std::move(out));
    }
    case Formula::Kind::Implies:
      return mkImplies(qe(f->args[0], caps, budget), qe(f->args[1], caps, budget));
    case Formula::Kind::Exists: {
      FormulaPtr body = qe(f->body, caps, budget);
      for (auto it = f->binders.rbegin(); it != f->binders.rend(); ++it)
        body = eliminateOne(*it, body, caps, budget);
      return body;
    }
    case Formula::Kind::Forall: {
      FormulaPtr body = qe(f->body, caps, budget);
      for (auto it = f->binders.rbegin(); it != f->binders.rend(); ++it)
        body = toNnf(eliminateOne(*it, toNnf(body, true), caps, budget), true);
      return body;
    }
  }
  fail(ErrorKind::Internal, "qe fell through");
}

}  // namespace

FormulaPtr eliminateQuantifiers(const FormulaPtr& f, const Caps& caps) {
  long budget = 0;
  FormulaPtr out = qe(f, caps, budget);
  return simplifyFormula(toNnf(out), caps, budget);
}

}  // namespace qg
