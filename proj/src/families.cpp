#include "quasigrade/families.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace qg {
namespace {

const char* kindLabel(FamilyExpr::Kind k) {
  switch (k) {
    case FamilyExpr::Kind::Base: return "ideal";
    case FamilyExpr::Kind::Power: return "power";
    case FamilyExpr::Kind::Symbolic: return "symbolic";
    case FamilyExpr::Kind::Closure: return "closure";
    case FamilyExpr::Kind::Multiplier: return "mult";
    case FamilyExpr::Kind::Colon: return "colon";
    case FamilyExpr::Kind::Saturate: return "sat";
    case FamilyExpr::Kind::Sum: return "sum";
    case FamilyExpr::Kind::Product: return "prod";
    case FamilyExpr::Kind::Intersect: return "cap";
    case FamilyExpr::Kind::QuotientModule: return "quot";
    case FamilyExpr::Kind::IdealTimesModule: return "idealmod";
  }
  return "?";
}

void checkIdeal(const MonomialIdeal& I, const char* where) {
  if (!I.ring) fail(ErrorKind::Internal, std::string(where) + ": ideal has no ring");
}

void checkSameRing(const RingPtr& a, const RingPtr& b, const char* where) {
  if (!a || !b || !sameRing(*a, *b))
    fail(ErrorKind::RingMismatch,
         std::string(where) + ": operands live in different rings");
}

void checkArity(Index a, Index b, const char* where) {
  if (a != b)
    fail(ErrorKind::ArityMismatch,
         std::string(where) + ": parameter arity mismatch");
}

FamilyPtr node(FamilyExpr e) {
  return std::make_shared<FamilyExpr>(std::move(e));
}

IntVec unitPoint(Index k, Index i) {
  IntVec e = IntVec::Zero(k);
  e[i] = 1;
  return e;
}

}  // namespace

Int AffineForm::at(const IntVec& n) const {
  if (n.size() != coeffs.size())
    fail(ErrorKind::ArityMismatch, "parameter point has the wrong arity");
  Int v = constant;
  for (Index i = 0; i < coeffs.size(); ++i) v += coeffs[i] * n[i];
  return v;
}

FamilyPtr baseFamily(MonomialIdeal I, Index arity) {
  checkIdeal(I, "ideal");
  FamilyExpr e;
  e.kind = FamilyExpr::Kind::Base;
  e.arity = arity;
  e.I = std::move(I);
  return node(std::move(e));
}

FamilyPtr powerFamily(FamilyPtr F, AffineForm form) {
  checkArity(F->arity, form.coeffs.size(), "power");
  FamilyExpr e;
  e.kind = FamilyExpr::Kind::Power;
  e.arity = F->arity;
  e.a = std::move(F);
  e.form = std::move(form);
  return node(std::move(e));
}

FamilyPtr symbolicFamily(MonomialIdeal I, AffineForm form) {
  checkIdeal(I, "symbolic");
  FamilyExpr e;
  e.kind = FamilyExpr::Kind::Symbolic;
  e.arity = form.coeffs.size();
  e.I = std::move(I);
  e.form = std::move(form);
  return node(std::move(e));
}

FamilyPtr closureFamily(FamilyPtr F) {
  FamilyExpr e;
  e.kind = FamilyExpr::Kind::Closure;
  e.arity = F->arity;
  e.a = std::move(F);
  return node(std::move(e));
}

FamilyPtr multiplierFamily(FamilyPtr F) {
  RingPtr ring = familyRing(*F);
  if (!ring->isFree)
    fail(ErrorKind::UnsupportedRing,
         "mult needs an explicit weight and thickening off the free ring");
  return multiplierFamily(std::move(F), IntVec::Constant(ring->d, 1), 1);
}

FamilyPtr multiplierFamily(FamilyPtr F, IntVec w, Int r) {
  RingPtr ring = familyRing(*F);
  if (w.size() != ring->d)
    fail(ErrorKind::DimMismatch, "mult: weight needs one entry per variable");
  if (r <= 0) fail(ErrorKind::OutOfDomain, "mult: thickening must be positive");
  FamilyExpr e;
  e.kind = FamilyExpr::Kind::Multiplier;
  e.arity = F->arity;
  e.a = std::move(F);
  e.weight = std::move(w);
  e.thickening = std::move(r);
  return node(std::move(e));
}

FamilyPtr colonFamily(FamilyPtr F, MonomialIdeal K,
                      std::optional<AffineForm> form) {
  checkIdeal(K, "colon");
  checkSameRing(familyRing(*F), K.ring, "colon");
  FamilyExpr e;
  e.kind = FamilyExpr::Kind::Colon;
  e.arity = F->arity;
  if (form) {
    checkArity(F->arity, form->coeffs.size(), "colon");
    e.form = std::move(*form);
  } else {
    e.toInfinity = true;
  }
  e.a = std::move(F);
  e.I = std::move(K);
  return node(std::move(e));
}

FamilyPtr saturateFamily(FamilyPtr F, MonomialIdeal K) {
  checkIdeal(K, "sat");
  checkSameRing(familyRing(*F), K.ring, "sat");
  FamilyExpr e;
  e.kind = FamilyExpr::Kind::Saturate;
  e.arity = F->arity;
  e.a = std::move(F);
  e.I = std::move(K);
  return node(std::move(e));
}

FamilyPtr combineFamily(CombineKind kind, FamilyPtr F, FamilyPtr G) {
  checkSameRing(familyRing(*F), familyRing(*G), "combine");
  checkArity(F->arity, G->arity, "combine");
  FamilyExpr e;
  switch (kind) {
    case CombineKind::Sum: e.kind = FamilyExpr::Kind::Sum; break;
    case CombineKind::Product: e.kind = FamilyExpr::Kind::Product; break;
    case CombineKind::Intersection: e.kind = FamilyExpr::Kind::Intersect; break;
  }
  e.arity = F->arity;
  e.a = std::move(F);
  e.b = std::move(G);
  return node(std::move(e));
}

FamilyPtr quotientFamily(FamilyPtr F, FamilyPtr G) {
  checkSameRing(familyRing(*F), familyRing(*G), "quot");
  checkArity(F->arity, G->arity, "quot");
  FamilyExpr e;
  e.kind = FamilyExpr::Kind::QuotientModule;
  e.arity = F->arity;
  e.a = std::move(F);
  e.b = std::move(G);
  return node(std::move(e));
}

FamilyPtr idealTimesModuleFamily(FamilyPtr F, ModulePtr M) {
  if (!M) fail(ErrorKind::Internal, "idealmod: missing module");
  checkSameRing(familyRing(*F), moduleRing(*M), "idealmod");
  FamilyExpr e;
  e.kind = FamilyExpr::Kind::IdealTimesModule;
  e.arity = F->arity;
  e.a = std::move(F);
  e.module = std::move(M);
  return node(std::move(e));
}

RingPtr familyRing(const FamilyExpr& F) {
  switch (F.kind) {
    case FamilyExpr::Kind::Base:
    case FamilyExpr::Kind::Symbolic:
      return F.I.ring;
    default:
      return familyRing(*F.a);
  }
}

bool familyIsModuleValued(const FamilyExpr& F) {
  return F.kind == FamilyExpr::Kind::QuotientModule ||
         F.kind == FamilyExpr::Kind::IdealTimesModule;
}

namespace {

MonomialIdeal unitIdeal(const RingPtr& ring) {
  return MonomialIdeal{ring, {IntVec::Zero(ring->d)}};
}

[[noreturn]] void rethrowAt(const FamilyExpr& F, const Error& e) {
  fail(e.kind(), std::string(kindLabel(F.kind)) + ": " + e.what());
}

MonomialIdeal evalIdealRec(const FamilyExpr& F, const IntVec& n,
                           const Caps& caps) {
  if (F.arity != n.size())
    fail(ErrorKind::ArityMismatch, "parameter point has the wrong arity");
  try {
    switch (F.kind) {
      case FamilyExpr::Kind::Base:
        return F.I;
      case FamilyExpr::Kind::Power: {
        Int e = F.form.at(n);
        if (e <= 0) return unitIdeal(familyRing(F));
        return power(evalIdealRec(*F.a, n, caps), e, caps);
      }
      case FamilyExpr::Kind::Symbolic: {
        Int e = F.form.at(n);
        if (e <= 0) return unitIdeal(F.I.ring);
        return symbolicPower(F.I, e, caps);
      }
      case FamilyExpr::Kind::Closure:
        return integralClosure(evalIdealRec(*F.a, n, caps), caps);
      case FamilyExpr::Kind::Multiplier:
        return multiplierIdeal(evalIdealRec(*F.a, n, caps), F.weight,
                               F.thickening, caps);
      case FamilyExpr::Kind::Colon: {
        MonomialIdeal I = evalIdealRec(*F.a, n, caps);
        if (F.toInfinity) return saturate(I, F.I, caps);
        Int e = F.form.at(n);
        if (e <= 0) return I;  // K^0 = R and I : R = I
        return colon(I, power(F.I, e, caps), caps);
      }
      case FamilyExpr::Kind::Saturate:
        return saturate(evalIdealRec(*F.a, n, caps), F.I, caps);
      case FamilyExpr::Kind::Sum:
        return combine(CombineKind::Sum, evalIdealRec(*F.a, n, caps),
                       evalIdealRec(*F.b, n, caps), caps);
      case FamilyExpr::Kind::Product:
        return combine(CombineKind::Product, evalIdealRec(*F.a, n, caps),
                       evalIdealRec(*F.b, n, caps), caps);
      case FamilyExpr::Kind::Intersect:
        return combine(CombineKind::Intersection, evalIdealRec(*F.a, n, caps),
                       evalIdealRec(*F.b, n, caps), caps);
      case FamilyExpr::Kind::QuotientModule:
      case FamilyExpr::Kind::IdealTimesModule:
        fail(ErrorKind::Unsupported,
             "module-valued family where an ideal is required");
    }
  } catch (const Error& e) {
    rethrowAt(F, e);
  }
  fail(ErrorKind::Internal, "unhandled family constructor");
}

}  // namespace

MonomialIdeal evaluateIdeal(const FamilyExpr& F, const IntVec& n,
                            const Caps& caps) {
  return evalIdealRec(F, n, caps);
}

ModulePtr idealTimesModule(const MonomialIdeal& I, const ModulePtr& M,
                           const Caps& caps) {
  switch (M->kind) {
    case ModuleExpr::Kind::Quotient: {
      // I * (R/J) = (I + J)/J.
      MonomialIdeal num = combine(CombineKind::Sum, I, M->I, caps);
      return subquotientModule(num, M->I);
    }
    case ModuleExpr::Kind::Ideal:
      return idealAsModule(combine(CombineKind::Product, I, M->I, caps));
    case ModuleExpr::Kind::SubQuotient: {
      // I * (J1/J2) = (I J1 + J2)/J2.
      MonomialIdeal num =
          combine(CombineKind::Sum,
                  combine(CombineKind::Product, I, M->I, caps), M->J, caps);
      return subquotientModule(num, M->J);
    }
    case ModuleExpr::Kind::Shift:
      return shiftModule(idealTimesModule(I, M->inner, caps), M->shift);
    case ModuleExpr::Kind::Sum: {
      std::vector<ModulePtr> parts;
      for (const auto& p : M->parts)
        parts.push_back(idealTimesModule(I, p, caps));
      return sumModule(std::move(parts));
    }
  }
  fail(ErrorKind::Internal, "unhandled module kind");
}

ModulePtr evaluateModule(const FamilyExpr& F, const IntVec& n,
                         const Caps& caps) {
  if (F.arity != n.size())
    fail(ErrorKind::ArityMismatch, "parameter point has the wrong arity");
  switch (F.kind) {
    case FamilyExpr::Kind::QuotientModule:
      try {
        MonomialIdeal top = evalIdealRec(*F.a, n, caps);
        MonomialIdeal bottom = evalIdealRec(*F.b, n, caps);
        return subquotientModule(std::move(top), std::move(bottom));
      } catch (const Error& e) {
        rethrowAt(F, e);
      }
    case FamilyExpr::Kind::IdealTimesModule:
      try {
        return idealTimesModule(evalIdealRec(*F.a, n, caps), F.module, caps);
      } catch (const Error& e) {
        rethrowAt(F, e);
      }
    default:
      return quotientModule(evalIdealRec(F, n, caps));
  }
}

namespace {

// Shared token stream for the ideal and family grammars.
struct Lexer {
  enum class Type { Name, Number, Sym, End };

  explicit Lexer(const std::string& text) : text(text) { advance(); }

  Type type = Type::End;
  std::string name;
  Int number = 0;
  char sym = 0;
  size_t pos = 0;

  const std::string& text;
  size_t i = 0;

  void advance() {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
    pos = i;
    if (i >= text.size()) {
      type = Type::End;
      return;
    }
    char c = text[i];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) ||
              text[j] == '_'))
        ++j;
      type = Type::Name;
      name = text.substr(i, j - i);
      i = j;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[j])))
        ++j;
      type = Type::Number;
      number = Int(text.substr(i, j - i));
      i = j;
      return;
    }
    type = Type::Sym;
    sym = c;
    i += 1;
  }

  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorKind::Syntax,
         what + " at position " + std::to_string(pos + 1));
  }

  bool atSym(char c) const { return type == Type::Sym && sym == c; }

  void expectSym(char c) {
    if (!atSym(c)) error(std::string("expected '") + c + "'");
    advance();
  }

  std::string expectName(const char* what) {
    if (type != Type::Name) error(std::string("expected ") + what);
    std::string n = name;
    advance();
    return n;
  }

  Int expectNumber(const char* what) {
    if (type != Type::Number) error(std::string("expected ") + what);
    Int v = number;
    advance();
    return v;
  }
};

// monomial := factor ('*' factor)*; factor := VAR ['^' NUM] | '1'.
IntVec parseMonomial(Lexer& lx, const std::vector<std::string>& vars,
                     Index d) {
  IntVec exp = IntVec::Zero(d);
  while (true) {
    if (lx.type == Lexer::Type::Number) {
      if (lx.number != 1) lx.error("only the monomial 1 may be numeric");
      lx.advance();
    } else {
      std::string v = lx.expectName("a variable");
      auto it = std::find(vars.begin(), vars.end(), v);
      if (it == vars.end()) lx.error("unknown variable '" + v + "'");
      Int e = 1;
      if (lx.atSym('^')) {
        lx.advance();
        e = lx.expectNumber("an exponent");
      }
      exp[it - vars.begin()] += e;
    }
    if (!lx.atSym('*')) break;
    lx.advance();
  }
  return exp;
}

// Comma-separated monomials between the current position and ')'.
std::vector<IntVec> parseMonomialList(Lexer& lx,
                                      const std::vector<std::string>& vars,
                                      Index d) {
  std::vector<IntVec> exps;
  if (lx.atSym(')')) return exps;
  while (true) {
    exps.push_back(parseMonomial(lx, vars, d));
    if (!lx.atSym(',')) break;
    lx.advance();
  }
  return exps;
}

// form := ['+'|'-'] term (('+'|'-') term)*;
// term := NUM ['*' PARAM] | PARAM ['*' NUM].
AffineForm parseAffine(Lexer& lx, const std::vector<std::string>& params) {
  AffineForm form;
  form.coeffs = IntVec::Zero(static_cast<Index>(params.size()));
  bool first = true;
  while (true) {
    Int sign = 1;
    if (lx.atSym('+') || lx.atSym('-')) {
      if (lx.sym == '-') sign = -1;
      lx.advance();
    } else if (!first) {
      break;
    }
    if (lx.type == Lexer::Type::Number) {
      Int v = lx.number;
      lx.advance();
      if (lx.atSym('*')) {
        lx.advance();
        std::string p = lx.expectName("a parameter");
        auto it = std::find(params.begin(), params.end(), p);
        if (it == params.end()) lx.error("unknown parameter '" + p + "'");
        form.coeffs[it - params.begin()] += sign * v;
      } else {
        form.constant += sign * v;
      }
    } else if (lx.type == Lexer::Type::Name) {
      std::string p = lx.name;
      lx.advance();
      auto it = std::find(params.begin(), params.end(), p);
      if (it == params.end()) lx.error("unknown parameter '" + p + "'");
      Int v = 1;
      if (lx.atSym('*')) {
        lx.advance();
        v = lx.expectNumber("a coefficient");
      }
      form.coeffs[it - params.begin()] += sign * v;
    } else {
      lx.error("expected an affine form");
    }
    first = false;
  }
  return form;
}

MonomialIdeal parseIdealArg(Lexer& lx, const FamilyEnv& env);
FamilyPtr parseFamilyExpr(Lexer& lx, const FamilyEnv& env);

// 'ideal' was just consumed; parses '(' monomials ')'.
MonomialIdeal parseIdealLiteral(Lexer& lx, const FamilyEnv& env) {
  lx.expectSym('(');
  auto exps = parseMonomialList(lx, env.vars, env.ring->d);
  lx.expectSym(')');
  return reduceGenerators(env.ring, std::move(exps));
}

MonomialIdeal parseIdealArg(Lexer& lx, const FamilyEnv& env) {
  std::string n = lx.expectName("an ideal");
  if (n == "ideal") return parseIdealLiteral(lx, env);
  auto it = env.ideals.find(n);
  if (it != env.ideals.end()) return it->second;
  auto fit = env.families.find(n);
  if (fit != env.families.end() &&
      fit->second->kind == FamilyExpr::Kind::Base)
    return fit->second->I;
  lx.error("unknown ideal '" + n + "'");
}

FamilyPtr parseFamilyExpr(Lexer& lx, const FamilyEnv& env) {
  std::string n = lx.expectName("a family expression");
  Index arity = static_cast<Index>(env.params.size());

  if (n == "ideal")
    return baseFamily(parseIdealLiteral(lx, env), arity);

  if (n == "power") {
    lx.expectSym('(');
    FamilyPtr F = parseFamilyExpr(lx, env);
    lx.expectSym(',');
    AffineForm form = parseAffine(lx, env.params);
    lx.expectSym(')');
    return powerFamily(std::move(F), std::move(form));
  }
  if (n == "symbolic") {
    lx.expectSym('(');
    MonomialIdeal I = parseIdealArg(lx, env);
    lx.expectSym(',');
    AffineForm form = parseAffine(lx, env.params);
    lx.expectSym(')');
    return symbolicFamily(std::move(I), std::move(form));
  }
  if (n == "closure") {
    lx.expectSym('(');
    FamilyPtr F = parseFamilyExpr(lx, env);
    lx.expectSym(')');
    return closureFamily(std::move(F));
  }
  if (n == "mult") {
    lx.expectSym('(');
    FamilyPtr F = parseFamilyExpr(lx, env);
    if (lx.atSym(',')) {
      lx.advance();
      IntVec w = parseMonomial(lx, env.vars, env.ring->d);
      lx.expectSym(',');
      Int r = lx.expectNumber("a thickening");
      lx.expectSym(')');
      return multiplierFamily(std::move(F), std::move(w), std::move(r));
    }
    lx.expectSym(')');
    return multiplierFamily(std::move(F));
  }
  if (n == "colon") {
    lx.expectSym('(');
    FamilyPtr F = parseFamilyExpr(lx, env);
    lx.expectSym(',');
    MonomialIdeal K = parseIdealArg(lx, env);
    lx.expectSym(',');
    std::optional<AffineForm> form;
    if (lx.type == Lexer::Type::Name && lx.name == "inf") {
      lx.advance();
    } else {
      form = parseAffine(lx, env.params);
    }
    lx.expectSym(')');
    return colonFamily(std::move(F), std::move(K), std::move(form));
  }
  if (n == "sat") {
    lx.expectSym('(');
    FamilyPtr F = parseFamilyExpr(lx, env);
    lx.expectSym(',');
    MonomialIdeal K = parseIdealArg(lx, env);
    lx.expectSym(')');
    return saturateFamily(std::move(F), std::move(K));
  }
  if (n == "sum" || n == "prod" || n == "cap") {
    lx.expectSym('(');
    FamilyPtr F = parseFamilyExpr(lx, env);
    lx.expectSym(',');
    FamilyPtr G = parseFamilyExpr(lx, env);
    lx.expectSym(')');
    CombineKind kind = n == "sum" ? CombineKind::Sum
                       : n == "prod" ? CombineKind::Product
                                     : CombineKind::Intersection;
    return combineFamily(kind, std::move(F), std::move(G));
  }
  if (n == "quot") {
    lx.expectSym('(');
    FamilyPtr F = parseFamilyExpr(lx, env);
    lx.expectSym(',');
    FamilyPtr G = parseFamilyExpr(lx, env);
    lx.expectSym(')');
    return quotientFamily(std::move(F), std::move(G));
  }
  if (n == "idealmod") {
    lx.expectSym('(');
    FamilyPtr F = parseFamilyExpr(lx, env);
    lx.expectSym(',');
    std::string m = lx.expectName("a module name");
    auto it = env.modules.find(m);
    if (it == env.modules.end()) lx.error("unknown module '" + m + "'");
    lx.expectSym(')');
    return idealTimesModuleFamily(std::move(F), it->second);
  }

  auto fit = env.families.find(n);
  if (fit != env.families.end()) {
    if (fit->second->arity != arity)
      lx.error("family '" + n + "' has a different parameter arity");
    return fit->second;
  }
  auto iit = env.ideals.find(n);
  if (iit != env.ideals.end()) return baseFamily(iit->second, arity);
  lx.error("unknown name '" + n + "'");
}

}  // namespace

MonomialIdeal parseIdealGens(const std::string& text, const RingPtr& ring,
                             const std::vector<std::string>& vars) {
  if (!ring) fail(ErrorKind::Internal, "parseIdealGens: missing ring");
  if (static_cast<Index>(vars.size()) != ring->d)
    fail(ErrorKind::ArityMismatch, "one variable name per coordinate required");
  Lexer lx(text);
  std::vector<IntVec> exps;
  if (lx.type != Lexer::Type::End) {
    while (true) {
      exps.push_back(parseMonomial(lx, vars, ring->d));
      if (!lx.atSym(',')) break;
      lx.advance();
    }
  }
  if (lx.type != Lexer::Type::End) lx.error("trailing input");
  return reduceGenerators(ring, std::move(exps));
}

FamilyPtr parseFamily(const std::string& text, const FamilyEnv& env) {
  if (!env.ring) fail(ErrorKind::Internal, "parseFamily: missing ring");
  if (static_cast<Index>(env.vars.size()) != env.ring->d)
    fail(ErrorKind::ArityMismatch, "one variable name per coordinate required");
  Lexer lx(text);
  FamilyPtr F = parseFamilyExpr(lx, env);
  if (lx.type != Lexer::Type::End) lx.error("trailing input");
  return F;
}

ReesReport reesCheck(const FamilyExpr& F, const ReesSpec& spec,
                     const IntVec& lo, const IntVec& hi, const Caps& caps) {
  Index k = F.arity;
  if (static_cast<Index>(spec.J.size()) != k)
    fail(ErrorKind::ArityMismatch, "one Rees ideal per parameter required");
  for (const auto& J : spec.J)
    if (J.isZero()) fail(ErrorKind::ZeroIdeal, "Rees ideals must be nonzero");
  if (lo.size() != k || hi.size() != k)
    fail(ErrorKind::ArityMismatch, "sample box has the wrong arity");
  if (familyIsModuleValued(F))
    fail(ErrorKind::Unsupported, "Rees check needs an ideal-valued family");

  ReesReport report;
  IntVec n = lo;
  while (true) {
    MonomialIdeal here = evaluateIdeal(F, n, caps);
    for (Index i = 0; i < k; ++i) {
      MonomialIdeal next = evaluateIdeal(F, n + unitPoint(k, i), caps);
      for (const auto& g : spec.J[static_cast<size_t>(i)].gens) {
        for (const auto& h : here.gens) {
          ++report.checks;
          IntVec prod = g + h;
          if (!member(next, prod)) {
            report.pass = false;
            report.failures.push_back({n, i, prod});
          }
        }
      }
    }
    Index j = 0;
    while (j < k) {
      n[j] += 1;
      if (n[j] <= hi[j]) break;
      n[j] = lo[j];
      ++j;
    }
    if (j == k) break;
  }
  return report;
}

std::vector<TopPoint> topSetSample(const FamilyExpr& F,
                                   const std::vector<IntVec>& points,
                                   const Caps& caps) {
  std::vector<TopPoint> out;
  for (const auto& n : points) {
    MonomialIdeal I = evaluateIdeal(F, n, caps);
    for (const auto& g : I.gens) out.push_back({n, g});
  }
  return out;
}

bool topSetMatches(const FamilyExpr& F, const std::vector<IntVec>& points,
                   const FormulaPtr& phi,
                   const std::vector<std::string>& paramVars,
                   const std::vector<std::string>& coordVars,
                   const Caps& caps) {
  RingPtr ring = familyRing(F);
  Index d = ring->d;
  if (static_cast<Index>(coordVars.size()) != d)
    fail(ErrorKind::ArityMismatch, "one coordinate name per variable required");
  if (static_cast<Index>(paramVars.size()) != F.arity)
    fail(ErrorKind::ArityMismatch, "one parameter name per parameter required");

  std::vector<std::string> vars = paramVars;
  vars.insert(vars.end(), coordVars.begin(), coordVars.end());
  std::sort(vars.begin(), vars.end());
  CellSet cs = toCells(phi, vars, caps);

  // The formula meets tuples in sorted-name order.
  auto tupleAt = [&](const IntVec& n, const IntVec& u) {
    IntVec t(vars.size());
    for (size_t i = 0; i < vars.size(); ++i) {
      auto pit = std::find(paramVars.begin(), paramVars.end(), vars[i]);
      if (pit != paramVars.end()) {
        t[static_cast<Index>(i)] = n[pit - paramVars.begin()];
      } else {
        auto cit = std::find(coordVars.begin(), coordVars.end(), vars[i]);
        t[static_cast<Index>(i)] = u[cit - coordVars.begin()];
      }
    }
    return t;
  };

  IntVec hull = IntVec::Zero(d);
  std::vector<std::pair<IntVec, MonomialIdeal>> values;
  for (const auto& n : points) {
    MonomialIdeal I = evaluateIdeal(F, n, caps);
    for (const auto& g : I.gens) hull = hull.cwiseMax(g);
    values.emplace_back(n, std::move(I));
  }
  hull.array() += 1;

  for (const auto& [n, I] : values) {
    for (const auto& g : I.gens)
      if (!cs.contains(tupleAt(n, g))) return false;
    IntVec u = IntVec::Zero(d);
    while (true) {
      bool isGen = false;
      for (const auto& g : I.gens) isGen = isGen || g == u;
      if (cs.contains(tupleAt(n, u)) != isGen) return false;
      Index j = 0;
      while (j < d) {
        u[j] += 1;
        if (u[j] <= hull[j]) break;
        u[j] = 0;
        ++j;
      }
      if (j == d) break;
    }
  }
  return true;
}

std::string invariantName(const InvariantSpec& spec) {
  std::ostringstream s;
  switch (spec.kind) {
    case InvariantSpec::Kind::Length: return "length";
    case InvariantSpec::Kind::HilbertDim: return "hilbert_dim";
    case InvariantSpec::Kind::Betti: s << "betti(" << spec.i << ")"; break;
    case InvariantSpec::Kind::TorLen: s << "tor_len(" << spec.i << ")"; break;
    case InvariantSpec::Kind::ExtLen: s << "ext_len(" << spec.i << ")"; break;
    case InvariantSpec::Kind::LocCohLen:
      s << "loc_coh_len(" << spec.i << ")";
      break;
    case InvariantSpec::Kind::AInv: s << "a(" << spec.i << ")"; break;
    case InvariantSpec::Kind::Reg: return "reg";
    case InvariantSpec::Kind::Depth: return "depth";
    case InvariantSpec::Kind::Dim: return "dim";
    case InvariantSpec::Kind::Bass: s << "bass(" << spec.i << ")"; break;
    case InvariantSpec::Kind::VInv: s << "v(" << spec.i << ")"; break;
    case InvariantSpec::Kind::Mu: return "mu";
    case InvariantSpec::Kind::HsLength:
      s << "hs_length(" << spec.m << ")";
      break;
    case InvariantSpec::Kind::HilbertCoeff: s << "e(" << spec.i << ")"; break;
    case InvariantSpec::Kind::Deg: return "deg";
    case InvariantSpec::Kind::Hdeg: return "hdeg";
  }
  return s.str();
}

namespace {

SweepEntry fromLengthReport(const LengthReport& rep) {
  SweepEntry e;
  if (rep.finite) {
    e.status = SweepEntry::Status::Value;
    e.value = Rat(rep.length);
  } else {
    e.status = SweepEntry::Status::Inconclusive;
    e.value = Rat(rep.length);
    e.note = "did not stabilize";
  }
  return e;
}

SweepEntry valueEntry(const Int& v) {
  SweepEntry e;
  e.value = Rat(v);
  return e;
}

const MonomialIdeal& requireIdealArg(const InvariantSpec& spec) {
  if (!spec.ideal)
    fail(ErrorKind::ArityMismatch, "this invariant needs an ideal argument");
  return *spec.ideal;
}

const MonomialPrime& requirePrimeArg(const InvariantSpec& spec) {
  if (!spec.prime)
    fail(ErrorKind::ArityMismatch, "this invariant needs a prime argument");
  return *spec.prime;
}

SweepEntry evalInvariant(const InvariantSpec& spec, const FamilyExpr& F,
                         const IntVec& n, const Caps& caps) {
  using K = InvariantSpec::Kind;
  if (spec.kind == K::Mu) {
    MonomialIdeal I = evaluateIdeal(F, n, caps);
    return valueEntry(Int(static_cast<long>(I.gens.size())));
  }
  ModulePtr M = evaluateModule(F, n, caps);
  switch (spec.kind) {
    case K::Length: {
      auto len = moduleLength(*M, caps);
      if (len) return valueEntry(*len);
      SweepEntry e;
      e.status = SweepEntry::Status::Infinite;
      return e;
    }
    case K::HilbertDim: {
      auto len = moduleLength(*M, spec.window, caps);
      if (len) return valueEntry(*len);
      SweepEntry e;
      e.status = SweepEntry::Status::Infinite;
      return e;
    }
    case K::Betti:
      return fromLengthReport(betti(spec.i, *M, spec.field, caps));
    case K::TorLen:
      if (!spec.other)
        fail(ErrorKind::ArityMismatch, "tor_len needs a second module");
      return fromLengthReport(
          torLengths(spec.i, *M, *spec.other, spec.field, caps));
    case K::ExtLen:
      if (!spec.other)
        fail(ErrorKind::ArityMismatch, "ext_len needs a second module");
      return fromLengthReport(
          extLengths(spec.i, *M, *spec.other, spec.field, caps));
    case K::LocCohLen: {
      auto reps = localCohomologyLengths(*M, requireIdealArg(spec).gens,
                                         spec.window, spec.field, caps);
      auto it = reps.find(spec.i);
      if (it == reps.end())
        fail(ErrorKind::OutOfDomain, "cohomological index out of range");
      return fromLengthReport(it->second);
    }
    case K::AInv: {
      StdInvariants inv = stdInvariants(*M, spec.field, caps);
      if (spec.i < 0 || static_cast<size_t>(spec.i) >= inv.a.size())
        fail(ErrorKind::OutOfDomain, "cohomological index out of range");
      auto a = inv.a[static_cast<size_t>(spec.i)];
      if (!a)
        fail(ErrorKind::OutOfDomain,
             "local cohomology vanishes at that index");
      return valueEntry(*a);
    }
    case K::Reg:
      return valueEntry(stdInvariants(*M, spec.field, caps).reg);
    case K::Depth:
      return valueEntry(Int(stdInvariants(*M, spec.field, caps).depth));
    case K::Dim:
      return valueEntry(Int(stdInvariants(*M, spec.field, caps).dim));
    case K::Bass:
      return valueEntry(
          Int(bassNumber(spec.i, requirePrimeArg(spec), *M, spec.field, caps)));
    case K::VInv: {
      VInvariantReport rep =
          vInvariant(requirePrimeArg(spec), spec.lambda, *M, caps);
      if (!rep.present)
        fail(ErrorKind::OutOfDomain, "prime is not associated to the module");
      return valueEntry(rep.value);
    }
    case K::HsLength:
      return valueEntry(
          hilbertSamuel(requireIdealArg(spec), *M, spec.m, spec.m, caps)[0]);
    case K::HilbertCoeff:
      return valueEntry(
          hilbertCoefficient(spec.i, requireIdealArg(spec), *M, spec.field, caps));
    case K::Deg:
      return valueEntry(multiplicityDeg(*M, spec.field, caps));
    case K::Hdeg: {
      SweepEntry e;
      e.value = hdeg(*M, spec.field, caps);
      return e;
    }
    case K::Mu:
      break;
  }
  fail(ErrorKind::Internal, "unhandled invariant kind");
}

}  // namespace

SweepResult sweep(const InvariantSpec& spec, const FamilyExpr& F,
                  const std::vector<IntVec>& points, const Caps& caps) {
  SweepResult result;
  result.invariant = invariantName(spec);
  result.field = spec.field;
  for (const auto& n : points) {
    SweepEntry entry;
    try {
      entry = evalInvariant(spec, F, n, caps);
    } catch (const Error& e) {
      entry.status = SweepEntry::Status::Error;
      entry.note = e.what();
    }
    result.samples.emplace_back(n, entry);
  }
  return result;
}

}  // namespace qg
