#include "quasigrade/formula.hpp"

#include <algorithm>
#include <sstream>

namespace qg {

LinTerm& LinTerm::operator+=(const LinTerm& o) {
  for (const auto& [v, c] : o.coeffs) {
    Int& mine = coeffs[v];
    mine += c;
    if (mine == 0) coeffs.erase(v);
  }
  constant += o.constant;
  return *this;
}

LinTerm& LinTerm::operator-=(const LinTerm& o) {
  for (const auto& [v, c] : o.coeffs) {
    Int& mine = coeffs[v];
    mine -= c;
    if (mine == 0) coeffs.erase(v);
  }
  constant -= o.constant;
  return *this;
}

LinTerm& LinTerm::operator*=(const Int& k) {
  if (k == 0) {
    coeffs.clear();
    constant = 0;
    return *this;
  }
  for (auto& [v, c] : coeffs) c *= k;
  constant *= k;
  return *this;
}

LinTerm LinTerm::substituted(const std::string& name, const LinTerm& repl) const {
  auto it = coeffs.find(name);
  if (it == coeffs.end()) return *this;
  LinTerm out = *this;
  Int c = it->second;
  out.coeffs.erase(name);
  LinTerm scaled = repl;
  scaled *= c;
  out += scaled;
  return out;
}

Int LinTerm::eval(const std::map<std::string, Int>& env) const {
  Int v = constant;
  for (const auto& [name, c] : coeffs) {
    auto it = env.find(name);
    if (it == env.end()) fail(ErrorKind::UnboundVariable, name);
    v += c * it->second;
  }
  return v;
}

std::string LinTerm::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [name, c] : coeffs) {
    if (first) {
      if (c == -1)
        os << "-";
      else if (c != 1)
        os << c.get_str() << "*";
    } else {
      os << (c > 0 ? " + " : " - ");
      Int a = abs(c);
      if (a != 1) os << a.get_str() << "*";
    }
    os << name;
    first = false;
  }
  if (first) {
    os << constant.get_str();
  } else if (constant != 0) {
    Int a = abs(constant);
    os << (constant > 0 ? " + " : " - ") << a.get_str();
  }
  return os.str();
}

namespace {

FormulaPtr node(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

}  // namespace

FormulaPtr mkTrue() {
  static FormulaPtr t = node({Formula::Kind::True});
  return t;
}

FormulaPtr mkFalse() {
  static FormulaPtr f = node({Formula::Kind::False});
  return f;
}

FormulaPtr mkBool(bool b) { return b ? mkTrue() : mkFalse(); }

FormulaPtr mkLt(LinTerm t) {
  if (t.isGround()) return mkBool(t.constant < 0);
  Formula f{Formula::Kind::Lt};
  f.term = std::move(t);
  return node(std::move(f));
}

FormulaPtr mkEq(LinTerm t) {
  if (t.isGround()) return mkBool(t.constant == 0);
  Formula f{Formula::Kind::Eq};
  f.term = std::move(t);
  return node(std::move(f));
}

FormulaPtr mkNe(LinTerm t) {
  if (t.isGround()) return mkBool(t.constant != 0);
  Formula f{Formula::Kind::Ne};
  f.term = std::move(t);
  return node(std::move(f));
}

FormulaPtr mkDvd(Int m, LinTerm t) {
  if (m == 0) return mkEq(std::move(t));
  m = abs(m);
  if (m == 1) return mkTrue();
  if (t.isGround()) return mkBool(floorMod(t.constant, m) == 0);
  Formula f{Formula::Kind::Dvd};
  f.modulus = std::move(m);
  f.term = std::move(t);
  return node(std::move(f));
}

FormulaPtr mkNdvd(Int m, LinTerm t) {
  if (m == 0) return mkNe(std::move(t));
  m = abs(m);
  if (m == 1) return mkFalse();
  if (t.isGround()) return mkBool(floorMod(t.constant, m) != 0);
  Formula f{Formula::Kind::Ndvd};
  f.modulus = std::move(m);
  f.term = std::move(t);
  return node(std::move(f));
}

FormulaPtr mkNot(FormulaPtr f) {
  if (f->kind == Formula::Kind::True) return mkFalse();
  if (f->kind == Formula::Kind::False) return mkTrue();
  if (f->kind == Formula::Kind::Not) return f->args[0];
  Formula g{Formula::Kind::Not};
  g.args = {std::move(f)};
  return node(std::move(g));
}

FormulaPtr mkAnd(std::vector<FormulaPtr> fs) {
  std::vector<FormulaPtr> flat;
  for (auto& f : fs) {
    if (f->kind == Formula::Kind::False) return mkFalse();
    if (f->kind == Formula::Kind::True) continue;
    if (f->kind == Formula::Kind::And) {
      for (auto& g : f->args) flat.push_back(g);
    } else {
      flat.push_back(std::move(f));
    }
  }
  if (flat.empty()) return mkTrue();
  if (flat.size() == 1) return flat[0];
  Formula g{Formula::Kind::And};
  g.args = std::move(flat);
  return node(std::move(g));
}

FormulaPtr mkOr(std::vector<FormulaPtr> fs) {
  std::vector<FormulaPtr> flat;
  for (auto& f : fs) {
    if (f->kind == Formula::Kind::True) return mkTrue();
    if (f->kind == Formula::Kind::False) continue;
    if (f->kind == Formula::Kind::Or) {
      for (auto& g : f->args) flat.push_back(g);
    } else {
      flat.push_back(std::move(f));
    }
  }
  if (flat.empty()) return mkFalse();
  if (flat.size() == 1) return flat[0];
  Formula g{Formula::Kind::Or};
  g.args = std::move(flat);
  return node(std::move(g));
}

FormulaPtr mkImplies(FormulaPtr a, FormulaPtr b) {
  Formula g{Formula::Kind::Implies};
  g.args = {std::move(a), std::move(b)};
  return node(std::move(g));
}

FormulaPtr mkExists(std::vector<std::string> vars, FormulaPtr body) {
  if (vars.empty()) return body;
  Formula g{Formula::Kind::Exists};
  g.binders = std::move(vars);
  g.body = std::move(body);
  return node(std::move(g));
}

FormulaPtr mkForall(std::vector<std::string> vars, FormulaPtr body) {
  if (vars.empty()) return body;
  Formula g{Formula::Kind::Forall};
  g.binders = std::move(vars);
  g.body = std::move(body);
  return node(std::move(g));
}

FormulaPtr mkCmp(const LinTerm& lhs, CmpOp op, const LinTerm& rhs) {
  LinTerm d = lhs - rhs;
  switch (op) {
    case CmpOp::Lt: return mkLt(d);
    case CmpOp::Le: {
      LinTerm t = d;
      t.constant -= 1;
      // lhs <= rhs iff lhs - rhs - 1 < 0 over the integers.
      return mkLt(t);
    }
    case CmpOp::Gt: return mkLt(-d);
    case CmpOp::Ge: {
      LinTerm t = -d;
      t.constant -= 1;
      return mkLt(t);
    }
    case CmpOp::Eq: return mkEq(d);
    case CmpOp::Ne: return mkNe(d);
  }
  fail(ErrorKind::Internal, "comparison operator");
}

namespace {

void collectFree(const FormulaPtr& f, std::vector<std::string>& bound,
                 std::map<std::string, bool>& free) {
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return;
    case Formula::Kind::Lt:
    case Formula::Kind::Eq:
    case Formula::Kind::Ne:
    case Formula::Kind::Dvd:
    case Formula::Kind::Ndvd:
      for (const auto& [v, c] : f->term.coeffs) {
        if (std::find(bound.begin(), bound.end(), v) == bound.end())
          free[v] = true;
      }
      return;
    case Formula::Kind::Not:
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      for (const auto& a : f->args) collectFree(a, bound, free);
      return;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      size_t mark = bound.size();
      for (const auto& v : f->binders) bound.push_back(v);
      collectFree(f->body, bound, free);
      bound.resize(mark);
      return;
    }
  }
}

}  // namespace

std::vector<std::string> freeVariables(const FormulaPtr& f) {
  std::vector<std::string> bound;
  std::map<std::string, bool> free;
  collectFree(f, bound, free);
  std::vector<std::string> out;
  for (const auto& [v, _] : free) out.push_back(v);
  return out;
}

FormulaPtr substitute(const FormulaPtr& f, const std::string& name,
                      const LinTerm& repl) {
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return f;
    case Formula::Kind::Lt:
      return f->term.mentions(name) ? mkLt(f->term.substituted(name, repl)) : f;
    case Formula::Kind::Eq:
      return f->term.mentions(name) ? mkEq(f->term.substituted(name, repl)) : f;
    case Formula::Kind::Ne:
      return f->term.mentions(name) ? mkNe(f->term.substituted(name, repl)) : f;
    case Formula::Kind::Dvd:
      return f->term.mentions(name)
                 ? mkDvd(f->modulus, f->term.substituted(name, repl))
                 : f;
    case Formula::Kind::Ndvd:
      return f->term.mentions(name)
                 ? mkNdvd(f->modulus, f->term.substituted(name, repl))
                 : f;
    case Formula::Kind::Not:
      return mkNot(substitute(f->args[0], name, repl));
    case Formula::Kind::And: {
      std::vector<FormulaPtr> out;
      for (const auto& a : f->args) out.push_back(substitute(a, name, repl));
      return mkAnd(std::move(out));
    }
    case Formula::Kind::Or: {
      std::vector<FormulaPtr> out;
      for (const auto& a : f->args) out.push_back(substitute(a, name, repl));
      return mkOr(std::move(out));
    }
    case Formula::Kind::Implies:
      return mkImplies(substitute(f->args[0], name, repl),
                       substitute(f->args[1], name, repl));
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      for (const auto& b : f->binders)
        if (b == name) return f;  // shadowed
      for (const auto& b : f->binders)
        if (repl.mentions(b))
          fail(ErrorKind::Internal, "substitution would capture " + b);
      FormulaPtr body = substitute(f->body, name, repl);
      Formula g{f->kind};
      g.binders = f->binders;
      g.body = std::move(body);
      return node(std::move(g));
    }
  }
  fail(ErrorKind::Internal, "substitute fell through");
}

bool isQuantifierFree(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      return false;
    case Formula::Kind::Not:
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      for (const auto& a : f->args)
        if (!isQuantifierFree(a)) return false;
      return true;
    default:
      return true;
  }
}

bool evalQuantifierFree(const FormulaPtr& f,
                        const std::map<std::string, Int>& env) {
  switch (f->kind) {
    case Formula::Kind::True: return true;
    case Formula::Kind::False: return false;
    case Formula::Kind::Lt: return f->term.eval(env) < 0;
    case Formula::Kind::Eq: return f->term.eval(env) == 0;
    case Formula::Kind::Ne: return f->term.eval(env) != 0;
    case Formula::Kind::Dvd: return floorMod(f->term.eval(env), f->modulus) == 0;
    case Formula::Kind::Ndvd: return floorMod(f->term.eval(env), f->modulus) != 0;
    case Formula::Kind::Not: return !evalQuantifierFree(f->args[0], env);
    case Formula::Kind::And:
      for (const auto& a : f->args)
        if (!evalQuantifierFree(a, env)) return false;
      return true;
    case Formula::Kind::Or:
      for (const auto& a : f->args)
        if (evalQuantifierFree(a, env)) return true;
      return false;
    case Formula::Kind::Implies:
      return !evalQuantifierFree(f->args[0], env) ||
             evalQuantifierFree(f->args[1], env);
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      fail(ErrorKind::Internal, "evalQuantifierFree met a quantifier");
  }
  fail(ErrorKind::Internal, "eval fell through");
}

FormulaPtr toNnf(const FormulaPtr& f, bool negate) {
  switch (f->kind) {
    case Formula::Kind::True: return mkBool(!negate);
    case Formula::Kind::False: return mkBool(negate);
    case Formula::Kind::Lt: {
      if (!negate) return f;
      // !(t < 0) iff -t - 1 < 0.
      LinTerm t = -f->term;
      t.constant -= 1;
      return mkLt(t);
    }
    case Formula::Kind::Eq: return negate ? mkNe(f->term) : f;
    case Formula::Kind::Ne: return negate ? mkEq(f->term) : f;
    case Formula::Kind::Dvd:
      return negate ? mkNdvd(f->modulus, f->term) : f;
    case Formula::Kind::Ndvd:
      return negate ? mkDvd(f->modulus, f->term) : f;
    case Formula::Kind::Not: return toNnf(f->args[0], !negate);
    case Formula::Kind::And: {
      std::vector<FormulaPtr> out;
      for (const auto& a : f->args) out.push_back(toNnf(a, negate));
      return negate ? mkOr(std::move(out)) : mkAnd(std::move(out));
    }
    case Formula::Kind::Or: {
      std::vector<FormulaPtr> out;
      for (const auto& a : f->args) out.push_back(toNnf(a, negate));
      return negate ? mkAnd(std::move(out)) : mkOr(std::move(out));
    }
    case Formula::Kind::Implies: {
      FormulaPtr a = f->args[0], b = f->args[1];
      if (negate) return mkAnd({toNnf(a, false), toNnf(b, true)});
      return mkOr({toNnf(a, true), toNnf(b, false)});
    }
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      fail(ErrorKind::Internal, "toNnf expects a quantifier-free formula");
  }
  fail(ErrorKind::Internal, "toNnf fell through");
}

namespace {

// Canonical key for structural deduplication inside And/Or.
std::string formulaKey(const FormulaPtr& f);

std::string termKey(const LinTerm& t) {
  std::ostringstream os;
  for (const auto& [v, c] : t.coeffs) os << v << ":" << c.get_str() << ",";
  os << "#" << t.constant.get_str();
  return os.str();
}

std::string formulaKey(const FormulaPtr& f) {
  std::ostringstream os;
  switch (f->kind) {
    case Formula::Kind::True: return "T";
    case Formula::Kind::False: return "F";
    case Formula::Kind::Lt: return "L(" + termKey(f->term) + ")";
    case Formula::Kind::Eq: return "E(" + termKey(f->term) + ")";
    case Formula::Kind::Ne: return "N(" + termKey(f->term) + ")";
    case Formula::Kind::Dvd:
      return "D" + f->modulus.get_str() + "(" + termKey(f->term) + ")";
    case Formula::Kind::Ndvd:
      return "d" + f->modulus.get_str() + "(" + termKey(f->term) + ")";
    case Formula::Kind::Not: return "!(" + formulaKey(f->args[0]) + ")";
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      os << (f->kind == Formula::Kind::And ? "&[" : "|[");
      for (const auto& a : f->args) os << formulaKey(a) << ";";
      os << "]";
      return os.str();
    }
    case Formula::Kind::Implies:
      return ">(" + formulaKey(f->args[0]) + "," + formulaKey(f->args[1]) + ")";
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      os << (f->kind == Formula::Kind::Exists ? "Ex[" : "Al[");
      for (const auto& b : f->binders) os << b << ",";
      os << "](" << formulaKey(f->body) << ")";
      return os.str();
    }
  }
  return "?";
}

void chargeAtom(const Caps& caps, long& atomBudget) {
  if (++atomBudget > caps.qeAtoms)
    fail(ErrorKind::ResourceLimit, "quantifier elimination atom cap");
}

// gcd reduction of one atom, preserving integer semantics.
FormulaPtr reduceAtom(const FormulaPtr& f, const Caps& caps, long& atomBudget) {
  chargeAtom(caps, atomBudget);
  LinTerm t = f->term;
  Int g = 0;
  for (const auto& [v, c] : t.coeffs) g = intGcd(g, c);
  switch (f->kind) {
    case Formula::Kind::Lt: {
      if (g <= 1) return f;
      // g*s + c < 0 iff s <= floor((-c-1)/g) iff s - floor((-c-1)/g) - 1 < 0.
      LinTerm s;
      for (const auto& [v, c] : t.coeffs) s.coeffs[v] = c / g;
      s.constant = -floorDiv(-t.constant - 1, g) - 1;
      return mkLt(s);
    }
    case Formula::Kind::Eq: {
      if (g <= 1) return f;
      if (t.constant % g != 0) return mkFalse();
      LinTerm s;
      for (const auto& [v, c] : t.coeffs) s.coeffs[v] = c / g;
      s.constant = t.constant / g;
      return mkEq(s);
    }
    case Formula::Kind::Ne: {
      if (g <= 1) return f;
      if (t.constant % g != 0) return mkTrue();
      LinTerm s;
      for (const auto& [v, c] : t.coeffs) s.coeffs[v] = c / g;
      s.constant = t.constant / g;
      return mkNe(s);
    }
    case Formula::Kind::Dvd:
    case Formula::Kind::Ndvd: {
      Int m = f->modulus;
      // Coefficients act modulo m; reduce them and drop vanished variables.
      LinTerm s;
      for (const auto& [v, c] : t.coeffs) {
        Int r = floorMod(c, m);
        if (r != 0) s.coeffs[v] = r;
      }
      s.constant = floorMod(t.constant, m);
      Int gg = m;
      for (const auto& [v, c] : s.coeffs) gg = intGcd(gg, c);
      gg = intGcd(gg, s.constant);
      if (gg > 1) {
        for (auto& [v, c] : s.coeffs) c /= gg;
        s.constant /= gg;
        m /= gg;
      }
      return f->kind == Formula::Kind::Dvd ? mkDvd(m, s) : mkNdvd(m, s);
    }
    default:
      fail(ErrorKind::Internal, "reduceAtom on non-atom");
  }
}

}  // namespace

FormulaPtr simplifyFormula(const FormulaPtr& f, const Caps& caps,
                           long& atomBudget) {
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return f;
    case Formula::Kind::Lt:
    case Formula::Kind::Eq:
    case Formula::Kind::Ne:
    case Formula::Kind::Dvd:
    case Formula::Kind::Ndvd:
      return reduceAtom(f, caps, atomBudget);
    case Formula::Kind::Not:
      return mkNot(simplifyFormula(f->args[0], caps, atomBudget));
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<FormulaPtr> out;
      std::vector<std::string> seen;
      for (const auto& a : f->args) {
        FormulaPtr s = simplifyFormula(a, caps, atomBudget);
        std::string key = formulaKey(s);
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
        seen.push_back(std::move(key));
        out.push_back(std::move(s));
      }
      return f->kind == Formula::Kind::And ? mkAnd(std::move(out))
                                           : mkOr(std::move(out));
    }
    case Formula::Kind::Implies:
      return mkImplies(simplifyFormula(f->args[0], caps, atomBudget),
                       simplifyFormula(f->args[1], caps, atomBudget));
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      Formula g{f->kind};
      g.binders = f->binders;
      g.body = simplifyFormula(f->body, caps, atomBudget);
      return node(std::move(g));
    }
  }
  fail(ErrorKind::Internal, "simplify fell through");
}

std::string toString(const FormulaPtr& f) {
  // Precedence: ! binds tightest, then &, then |, then ->.
  std::function<std::string(const FormulaPtr&, int)> go =
      [&](const FormulaPtr& g, int parentPrec) -> std::string {
    auto wrap = [&](int prec, const std::string& s) {
      return prec < parentPrec ? "(" + s + ")" : s;
    };
    switch (g->kind) {
      case Formula::Kind::True: return "true";
      case Formula::Kind::False: return "false";
      case Formula::Kind::Lt: return g->term.str() + " < 0";
      case Formula::Kind::Eq: return g->term.str() + " = 0";
      case Formula::Kind::Ne: return g->term.str() + " != 0";
      case Formula::Kind::Dvd:
        return g->modulus.get_str() + " | " + g->term.str();
      case Formula::Kind::Ndvd:
        return "!(" + g->modulus.get_str() + " | " + g->term.str() + ")";
      case Formula::Kind::Not: return wrap(4, "!" + go(g->args[0], 5));
      case Formula::Kind::And: {
        std::string s;
        for (size_t i = 0; i < g->args.size(); ++i) {
          if (i) s += " & ";
          s += go(g->args[i], 4);
        }
        return wrap(3, s);
      }
      case Formula::Kind::Or: {
        std::string s;
        for (size_t i = 0; i < g->args.size(); ++i) {
          if (i) s += " | ";
          s += go(g->args[i], 3);
        }
        return wrap(2, s);
      }
      case Formula::Kind::Implies:
        return wrap(1, go(g->args[0], 2) + " -> " + go(g->args[1], 1));
      case Formula::Kind::Exists:
      case Formula::Kind::Forall: {
        std::string s = g->kind == Formula::Kind::Exists ? "E " : "A ";
        for (size_t i = 0; i < g->binders.size(); ++i) {
          if (i) s += ",";
          s += g->binders[i];
        }
        s += ". " + go(g->body, 1);
        return wrap(1, s);
      }
    }
    return "?";
  };
  return go(f, 0);
}

}  // namespace qg
