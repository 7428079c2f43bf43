#include "quasigrade/homology.hpp"

#include <algorithm>

#include "quasigrade/normal_form.hpp"
#include "quasigrade/semilinear.hpp"

namespace qg {
namespace {

bool isPrime(unsigned long p) {
  if (p < 2) return false;
  for (unsigned long q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

void checkField(const FieldConfig& F) {
  if (F.characteristic != 0 && !isPrime(F.characteristic))
    fail(ErrorKind::Unsupported, "field characteristic must be zero or prime");
}

long modInverse(long a, long p) {
  long t = 0, newT = 1, r = p, newR = a % p;
  while (newR != 0) {
    long q = r / newR;
    t -= q * newT;
    std::swap(t, newT);
    r -= q * newR;
    std::swap(r, newR);
  }
  return ((t % p) + p) % p;
}

long rankModP(const IntMat& A, unsigned long p) {
  Index rows = A.rows(), cols = A.cols();
  std::vector<std::vector<long>> m(static_cast<size_t>(rows),
                                   std::vector<long>(static_cast<size_t>(cols)));
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j)
      m[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          floorMod(A(i, j), Int(static_cast<long>(p))).get_si();
  long rank = 0;
  long lp = static_cast<long>(p);
  for (Index c = 0; c < cols && rank < rows; ++c) {
    Index piv = rank;
    while (piv < rows && m[static_cast<size_t>(piv)][static_cast<size_t>(c)] == 0)
      ++piv;
    if (piv == rows) continue;
    std::swap(m[static_cast<size_t>(piv)], m[static_cast<size_t>(rank)]);
    auto& pivot = m[static_cast<size_t>(rank)];
    long inv = modInverse(pivot[static_cast<size_t>(c)], lp);
    for (Index j = c; j < cols; ++j)
      pivot[static_cast<size_t>(j)] = pivot[static_cast<size_t>(j)] * inv % lp;
    for (Index r = 0; r < rows; ++r) {
      if (r == rank) continue;
      long f = m[static_cast<size_t>(r)][static_cast<size_t>(c)];
      if (f == 0) continue;
      for (Index j = c; j < cols; ++j) {
        long& x = m[static_cast<size_t>(r)][static_cast<size_t>(j)];
        x = ((x - f * pivot[static_cast<size_t>(j)]) % lp + lp) % lp;
      }
    }
    ++rank;
  }
  return rank;
}

// Fraction-free elimination; the divisions are exact.
long intRank(IntMat A) {
  Index rows = A.rows(), cols = A.cols();
  long rank = 0;
  Int prev = 1;
  for (Index c = 0; c < cols && rank < rows; ++c) {
    Index piv = -1;
    for (Index r = rank; r < rows; ++r)
      if (A(r, c) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    if (piv != rank) A.row(piv).swap(A.row(rank));
    for (Index r = rank + 1; r < rows; ++r) {
      for (Index j = c + 1; j < cols; ++j)
        A(r, j) = (A(rank, c) * A(r, j) - A(r, c) * A(rank, j)) / prev;
      A(r, c) = 0;
    }
    prev = A(rank, c);
    ++rank;
  }
  return rank;
}

long fieldRank(const IntMat& A, const FieldConfig& F) {
  if (A.rows() == 0 || A.cols() == 0) return 0;
  if (F.characteristic == 0) return intRank(A);
  return rankModP(A, F.characteristic);
}

Int binomInt(long n, long k) {
  if (k < 0 || k > n) return 0;
  Int r = 1;
  for (long i = 0; i < k; ++i) {
    r *= Int(n - i);
    r /= Int(i + 1);
  }
  return r;
}

void requireFree(const RingPtr& ring, const char* what) {
  if (!ring || !ring->isFree)
    fail(ErrorKind::UnsupportedRing, std::string(what) + " needs the free ring");
}

std::vector<LinTerm> shiftedCoords(const std::vector<std::string>& vars,
                                   const IntVec& shift) {
  std::vector<LinTerm> t;
  for (size_t i = 0; i < vars.size(); ++i)
    t.push_back(LinTerm::var(vars[i]) - LinTerm::lit(shift[static_cast<Index>(i)]));
  return t;
}

// Membership of the summand at the actual degree variables: the shift is
// folded into the coordinates.
FormulaPtr aliveFormula(const IndicatorSummand& s,
                        const std::vector<std::string>& vars) {
  return cellsFormulaAt(s.support, shiftedCoords(vars, s.shift));
}

std::vector<char> aliveMask(const GradedComplex& C, int i, const IntVec& b) {
  auto it = C.terms.find(i);
  if (it == C.terms.end()) return {};
  std::vector<char> mask(it->second.size());
  for (size_t k = 0; k < mask.size(); ++k) mask[k] = it->second[k].alive(b);
  return mask;
}

IntMat restrictDiff(const GradedComplex& C, int i,
                    const std::vector<char>& tgt, const std::vector<char>& src) {
  Index rows = 0, cols = 0;
  for (char a : tgt) rows += a != 0;
  for (char a : src) cols += a != 0;
  IntMat sub = IntMat::Zero(rows, cols);
  auto it = C.diffs.find(i);
  if (it == C.diffs.end() || rows == 0 || cols == 0) return sub;
  const IntMat& full = it->second;
  Index r = 0;
  for (size_t t = 0; t < tgt.size(); ++t) {
    if (!tgt[t]) continue;
    Index c = 0;
    for (size_t s = 0; s < src.size(); ++s) {
      if (!src[s]) continue;
      sub(r, c) = full(static_cast<Index>(t), static_cast<Index>(s));
      ++c;
    }
    ++r;
  }
  return sub;
}

long countAlive(const std::vector<char>& m) {
  long n = 0;
  for (char a : m) n += a != 0;
  return n;
}

// The dimension depends on the degree only through the three alive masks,
// which take few distinct values over a box; cache on them.
using DimCache = std::map<std::string, long>;

const std::vector<char>& maskOrEmpty(
    const std::map<int, std::vector<char>>& masks, int i) {
  static const std::vector<char> empty;
  auto it = masks.find(i);
  return it == masks.end() ? empty : it->second;
}

long dimFromMasks(const GradedComplex& C, int i,
                  const std::map<int, std::vector<char>>& masks,
                  const FieldConfig& F, DimCache* cache) {
  const auto& here = maskOrEmpty(masks, i);
  long alive = countAlive(here);
  if (alive == 0) return 0;
  const auto& below = maskOrEmpty(masks, i - 1);
  const auto& above = maskOrEmpty(masks, i + 1);
  std::string key;
  if (cache) {
    key = std::to_string(i);
    for (auto m : {&below, &here, &above}) {
      key += '|';
      for (char a : *m) key += static_cast<char>('0' + a);
    }
    auto it = cache->find(key);
    if (it != cache->end()) return it->second;
  }
  long rOut = fieldRank(restrictDiff(C, i, below, here), F);
  long rIn = fieldRank(restrictDiff(C, i + 1, here, above), F);
  long dim = alive - rOut - rIn;
  if (cache) (*cache)[key] = dim;
  return dim;
}

// Alive masks at every index the requested indices can touch, one summand
// scan per index.
std::map<int, std::vector<char>> masksAround(const GradedComplex& C,
                                             const std::vector<int>& indices,
                                             const IntVec& b) {
  std::map<int, std::vector<char>> masks;
  for (int i : indices)
    for (int j : {i - 1, i, i + 1})
      if (!masks.count(j) && C.terms.count(j)) masks[j] = aliveMask(C, j, b);
  return masks;
}

// dim of H_i(C) at one degree.
long homologyAtIndex(const GradedComplex& C, int i, const IntVec& b,
                     const FieldConfig& F, DimCache* cache = nullptr) {
  return dimFromMasks(C, i, masksAround(C, {i}, b), F, cache);
}

IntVec onesVec(Index d) {
  IntVec v(d);
  for (Index i = 0; i < d; ++i) v[i] = 1;
  return v;
}

bool inBox(const IntVec& b, const Box& box) {
  for (Index i = 0; i < b.size(); ++i)
    if (b[i] < box.low[i] || b[i] > box.high[i]) return false;
  return true;
}

bool inWindow(const IntVec& b, const Window& w) {
  if (!w.lo && !w.hi) return true;
  Int s = 0;
  for (Index i = 0; i < b.size(); ++i) s += b[i];
  if (w.lo && s < *w.lo) return false;
  if (w.hi && s > *w.hi) return false;
  return true;
}

// Hull of the summand shifts with a unit margin; a degenerate complex gets
// the unit box around the origin.
Box shiftHull(const GradedComplex& C) {
  Box box;
  box.low = IntVec::Zero(C.d);
  box.high = IntVec::Zero(C.d);
  bool seen = false;
  for (const auto& [i, list] : C.terms)
    for (const auto& s : list) {
      if (!seen) {
        box.low = s.shift;
        box.high = s.shift;
        seen = true;
        continue;
      }
      for (Index k = 0; k < C.d; ++k) {
        box.low[k] = std::min(box.low[k], s.shift[k]);
        box.high[k] = std::max(box.high[k], s.shift[k]);
      }
    }
  box.low -= onesVec(C.d);
  box.high += onesVec(C.d);
  return box;
}

// Componentwise max over the generators of every ideal in the expression,
// plus accumulated shifts; a crude reach bound for where homology can live.
void gensHullInto(const ModuleExpr& M, IntVec& hull) {
  auto fold = [&](const std::vector<IntVec>& gens) {
    for (const auto& g : gens)
      for (Index i = 0; i < hull.size(); ++i)
        hull[i] = std::max(hull[i], g[i] < 0 ? -g[i] : g[i]);
  };
  switch (M.kind) {
    case ModuleExpr::Kind::Quotient:
    case ModuleExpr::Kind::Ideal:
      fold(M.I.gens);
      break;
    case ModuleExpr::Kind::SubQuotient:
      fold(M.I.gens);
      fold(M.J.gens);
      break;
    case ModuleExpr::Kind::Shift: {
      gensHullInto(*M.inner, hull);
      for (Index i = 0; i < hull.size(); ++i) {
        Int a = M.shift[i] < 0 ? -M.shift[i] : Int(M.shift[i]);
        hull[i] = std::max(hull[i], a);
      }
      break;
    }
    case ModuleExpr::Kind::Sum:
      for (const auto& p : M.parts) gensHullInto(*p, hull);
      break;
  }
}

IntVec exprGensHull(const ModuleExpr& M, Index d) {
  IntVec hull = IntVec::Zero(d);
  gensHullInto(M, hull);
  return hull;
}

enum class StabilizeOn { Entries, MaxSum };

struct ShellOutcome {
  DegreewiseTable table;
  std::map<int, bool> stable;
  std::map<int, std::optional<Int>> maxSum;  // over nonzero entries per index
};

// Evaluates homology degreewise over an expanding box. Per index, the run is
// stable once two successive expansion rounds bring no news (new nonzero
// entries, or for MaxSum mode a larger coordinate sum). expandMask freezes
// coordinates that must not grow, both directions.
ShellOutcome shellHomology(const GradedComplex& C,
                           const std::vector<int>& indices, Box box,
                           const std::vector<bool>& expandMask,
                           const Window& window, StabilizeOn mode,
                           const FieldConfig& F, const Caps& caps) {
  checkField(F);
  ShellOutcome out;
  out.table.field = F;
  std::map<int, int> quiet;
  for (int i : indices) quiet[i] = 0;

  DimCache cache;
  std::map<int, bool> news;
  auto evaluate = [&](const IntVec& b) {
    if (!inWindow(b, window)) return true;
    auto masks = masksAround(C, indices, b);
    for (int i : indices) {
      long dim = dimFromMasks(C, i, masks, F, &cache);
      if (dim == 0) continue;
      out.table.dims[i][b] = dim;
      Int s = 0;
      for (Index k = 0; k < b.size(); ++k) s += b[k];
      auto& ms = out.maxSum[i];
      if (mode == StabilizeOn::Entries) {
        news[i] = true;
      } else if (!ms || s > *ms) {
        news[i] = true;
      }
      if (!ms || s > *ms) ms = s;
    }
    return true;
  };

  forEachBoxPoint(box.low, box.high, evaluate);
  for (int round = 0; round < caps.shellRounds; ++round) {
    bool allQuiet = true;
    for (int i : indices) allQuiet = allQuiet && quiet[i] >= 2;
    if (allQuiet) break;
    Box wider = box;
    for (Index k = 0; k < C.d; ++k) {
      if (!expandMask[static_cast<size_t>(k)]) continue;
      wider.low[k] -= 2;
      wider.high[k] += 2;
    }
    news.clear();
    forEachBoxPoint(wider.low, wider.high, [&](const IntVec& b) {
      if (!inBox(b, box)) evaluate(b);
      return true;
    });
    for (int i : indices) quiet[i] = news.count(i) ? 0 : quiet[i] + 1;
    box = wider;
  }

  bool allStable = true;
  for (int i : indices) {
    out.stable[i] = quiet[i] >= 2;
    allStable = allStable && out.stable[i];
  }
  out.table.certificate =
      allStable ? Certificate::ShellStable : Certificate::Inconclusive;
  return out;
}

CellSet freeOrthant(Index d) {
  CellSet cs;
  cs.vars = ringCoordNames(d);
  Cell c;
  c.poly.ineqA = IntMat::Identity(d, d);
  c.poly.ineqB = IntVec::Zero(d);
  c.poly.eqA.resize(0, d);
  c.poly.eqB.resize(0);
  cs.cells.push_back(std::move(c));
  return cs;
}

void summandsInto(const ModuleExpr& M, const IntVec& shift,
                  std::vector<IndicatorSummand>& out, const Caps& caps) {
  RingPtr ring = moduleRing(M);
  Index d = ring->d;
  auto vars = ringCoordNames(d);
  auto coords = coordTerms(vars);
  switch (M.kind) {
    case ModuleExpr::Kind::Quotient: {
      FormulaPtr f = mkAnd({ringMemberFormula(*ring, coords),
                            mkNot(idealMemberFormula(M.I, coords))});
      out.push_back({shift, toCells(f, vars, caps)});
      break;
    }
    case ModuleExpr::Kind::Ideal: {
      out.push_back({shift, toCells(idealMemberFormula(M.I, coords), vars, caps)});
      break;
    }
    case ModuleExpr::Kind::SubQuotient: {
      FormulaPtr f = mkAnd({idealMemberFormula(M.I, coords),
                            mkNot(idealMemberFormula(M.J, coords))});
      out.push_back({shift, toCells(f, vars, caps)});
      break;
    }
    case ModuleExpr::Kind::Shift:
      summandsInto(*M.inner, IntVec(shift + M.shift), out, caps);
      break;
    case ModuleExpr::Kind::Sum:
      for (const auto& p : M.parts) summandsInto(*p, shift, out, caps);
      break;
  }
}

// Direct sum of complexes: summands concatenate per index, differentials sit
// in diagonal blocks.
GradedComplex complexDirectSum(const std::vector<GradedComplex>& parts) {
  GradedComplex out;
  out.d = parts.empty() ? 0 : parts[0].d;
  for (const auto& P : parts)
    for (const auto& [i, list] : P.terms) {
      auto& t = out.terms[i];
      t.insert(t.end(), list.begin(), list.end());
    }
  for (const auto& [i, list] : out.terms) {
    auto below = out.terms.find(i - 1);
    if (below != out.terms.end() && !below->second.empty() && !list.empty())
      out.diffs[i] = IntMat::Zero(static_cast<Index>(below->second.size()),
                                  static_cast<Index>(list.size()));
  }
  std::map<int, Index> off;  // summands of earlier parts per index
  for (const auto& P : parts) {
    for (const auto& [i, D] : P.diffs)
      out.diffs[i].block(off[i - 1], off[i], D.rows(), D.cols()) = D;
    for (const auto& [i, list] : P.terms)
      off[i] += static_cast<Index>(list.size());
  }
  return out;
}

GradedComplex shiftedComplex(GradedComplex C, const IntVec& a) {
  for (auto& [i, list] : C.terms)
    for (auto& s : list) s.shift += a;
  return C;
}

std::optional<GradedComplex> resolveExpr(const ModuleExpr& M, const Caps& caps) {
  switch (M.kind) {
    case ModuleExpr::Kind::Quotient:
      return taylorOfQuotient(M.I, caps);
    case ModuleExpr::Kind::Ideal:
      return taylorComplex(M.I, caps);
    case ModuleExpr::Kind::Shift: {
      auto inner = resolveExpr(*M.inner, caps);
      if (!inner) return std::nullopt;
      return shiftedComplex(std::move(*inner), M.shift);
    }
    case ModuleExpr::Kind::Sum: {
      std::vector<GradedComplex> parts;
      for (const auto& p : M.parts) {
        auto r = resolveExpr(*p, caps);
        if (!r) return std::nullopt;
        parts.push_back(std::move(*r));
      }
      return complexDirectSum(parts);
    }
    case ModuleExpr::Kind::SubQuotient:
      return std::nullopt;
  }
  return std::nullopt;
}

// Localization support: degrees whose forward ray along the inverted
// coordinates eventually stays inside the support. For a difference of
// upsets that set is invariant under translation by each inverted
// coordinate, so those coordinates are pinned to the ray parameter and drop
// out of the elimination entirely.
CellSet localizeSupport(const CellSet& support, const std::vector<bool>& inT,
                        const Caps& caps) {
  bool any = false;
  for (bool t : inT) any = any || t;
  if (!any) return support;
  auto vars = support.vars;
  std::vector<LinTerm> coords;
  for (size_t i = 0; i < vars.size(); ++i)
    coords.push_back(inT[i] ? LinTerm::var("locn") : LinTerm::var(vars[i]));
  FormulaPtr far = cellsFormulaAt(support, coords);
  FormulaPtr tail = mkForall(
      {"locn"}, mkImplies(mkCmp(LinTerm::var("locn"), CmpOp::Ge,
                                LinTerm::var("locN")),
                          far));
  FormulaPtr f = mkExists(
      {"locN"}, mkAnd({mkCmp(LinTerm::var("locN"), CmpOp::Ge, LinTerm::lit(0)),
                       tail}));
  return toCells(f, vars, caps);
}

IndicatorSummand localizeSummand(const IndicatorSummand& s,
                                 const std::vector<bool>& inT,
                                 const Caps& caps) {
  return {s.shift, localizeSupport(s.support, inT, caps)};
}

MonomialIdeal maximalIdeal(const RingPtr& ring) {
  std::vector<IntVec> gens;
  for (Index i = 0; i < ring->d; ++i) {
    IntVec e = IntVec::Zero(ring->d);
    e[i] = 1;
    gens.push_back(e);
  }
  return reduceGenerators(ring, std::move(gens));
}

// Count of a finite cell set, or nullopt when the decomposition shows an
// infinite direction.
std::optional<Int> lengthOfCells(const CellSet& cs, const Caps& caps) {
  SemisimpleSet pieces = cellsToSemisimple(cs, caps);
  Int n = 0;
  for (const auto& p : pieces.pieces) {
    if (!p.gens.empty()) return std::nullopt;
    n += 1;
  }
  return n;
}

}  // namespace

IntMat degreewiseDiff(const GradedComplex& C, int i, const IntVec& b) {
  return restrictDiff(C, i, aliveMask(C, i - 1, b), aliveMask(C, i, b));
}

ModulePtr quotientModule(MonomialIdeal I) {
  auto M = std::make_shared<ModuleExpr>();
  M->kind = ModuleExpr::Kind::Quotient;
  M->I = std::move(I);
  return M;
}

ModulePtr idealAsModule(MonomialIdeal I) {
  auto M = std::make_shared<ModuleExpr>();
  M->kind = ModuleExpr::Kind::Ideal;
  M->I = std::move(I);
  return M;
}

ModulePtr subquotientModule(MonomialIdeal I, MonomialIdeal J) {
  if (!I.ring || !J.ring || !sameRing(*I.ring, *J.ring))
    fail(ErrorKind::RingMismatch, "subquotient ideals live in different rings");
  for (const auto& g : J.gens)
    if (!member(I, g))
      fail(ErrorKind::Unsupported,
           "subquotient needs the second ideal inside the first");
  auto M = std::make_shared<ModuleExpr>();
  M->kind = ModuleExpr::Kind::SubQuotient;
  M->I = std::move(I);
  M->J = std::move(J);
  return M;
}

ModulePtr shiftModule(ModulePtr M, IntVec a) {
  if (moduleRing(*M)->d != a.size())
    fail(ErrorKind::DimMismatch, "shift dimension does not match the module");
  auto S = std::make_shared<ModuleExpr>();
  S->kind = ModuleExpr::Kind::Shift;
  S->inner = std::move(M);
  S->shift = std::move(a);
  return S;
}

ModulePtr sumModule(std::vector<ModulePtr> parts) {
  if (parts.empty())
    fail(ErrorKind::Unsupported, "a direct sum needs at least one part");
  RingPtr ring = moduleRing(*parts[0]);
  for (const auto& p : parts)
    if (!sameRing(*moduleRing(*p), *ring))
      fail(ErrorKind::RingMismatch, "direct summands live in different rings");
  auto S = std::make_shared<ModuleExpr>();
  S->kind = ModuleExpr::Kind::Sum;
  S->parts = std::move(parts);
  return S;
}

RingPtr moduleRing(const ModuleExpr& M) {
  switch (M.kind) {
    case ModuleExpr::Kind::Quotient:
    case ModuleExpr::Kind::Ideal:
    case ModuleExpr::Kind::SubQuotient:
      return M.I.ring;
    case ModuleExpr::Kind::Shift:
      return moduleRing(*M.inner);
    case ModuleExpr::Kind::Sum:
      return moduleRing(*M.parts[0]);
  }
  fail(ErrorKind::Internal, "module expression fell through");
}

std::vector<IndicatorSummand> moduleSummands(const ModuleExpr& M,
                                             const Caps& caps) {
  std::vector<IndicatorSummand> out;
  summandsInto(M, IntVec::Zero(moduleRing(M)->d), out, caps);
  return out;
}

long hilbertDim(const ModuleExpr& M, const IntVec& b, const Caps& caps) {
  long n = 0;
  for (const auto& s : moduleSummands(M, caps)) n += s.alive(b);
  return n;
}

GradedComplex taylorOfQuotient(const MonomialIdeal& I, const Caps& caps) {
  requireFree(I.ring, "a Taylor complex");
  size_t g = I.gens.size();
  if (g > static_cast<size_t>(caps.taylorGens))
    fail(ErrorKind::GeneratorCap,
         "Taylor complex capped at " + std::to_string(caps.taylorGens) +
             " generators");
  Index d = I.ring->d;
  GradedComplex C;
  C.d = d;
  CellSet orthant = freeOrthant(d);

  // Level i holds the size-i generator subsets in ascending mask order.
  std::vector<std::vector<unsigned>> levels(g + 1);
  std::vector<IntVec> lcm(static_cast<size_t>(1) << g, IntVec::Zero(d));
  for (unsigned mask = 0; mask < (1u << g); ++mask) {
    unsigned bits = static_cast<unsigned>(__builtin_popcount(mask));
    levels[bits].push_back(mask);
    IntVec m = IntVec::Zero(d);
    for (size_t j = 0; j < g; ++j)
      if (mask & (1u << j)) m = m.cwiseMax(I.gens[j]);
    lcm[mask] = std::move(m);
  }
  std::vector<std::map<unsigned, Index>> pos(g + 1);
  for (size_t i = 0; i <= g; ++i) {
    for (size_t k = 0; k < levels[i].size(); ++k)
      pos[i][levels[i][k]] = static_cast<Index>(k);
    std::vector<IndicatorSummand>& t = C.terms[static_cast<int>(i)];
    for (unsigned mask : levels[i]) t.push_back({lcm[mask], orthant});
  }
  for (size_t i = 1; i <= g; ++i) {
    IntMat D = IntMat::Zero(static_cast<Index>(levels[i - 1].size()),
                            static_cast<Index>(levels[i].size()));
    for (size_t k = 0; k < levels[i].size(); ++k) {
      unsigned mask = levels[i][k];
      int sign = 1;
      for (size_t j = 0; j < g; ++j) {
        if (!(mask & (1u << j))) continue;
        D(pos[i - 1][mask & ~(1u << j)], static_cast<Index>(k)) = sign;
        sign = -sign;
      }
    }
    C.diffs[static_cast<int>(i)] = std::move(D);
  }
  return C;
}

GradedComplex taylorComplex(const MonomialIdeal& I, const Caps& caps) {
  GradedComplex q = taylorOfQuotient(I, caps);
  GradedComplex C;
  C.d = q.d;
  for (const auto& [i, list] : q.terms)
    if (i >= 1) C.terms[i - 1] = list;
  for (const auto& [i, D] : q.diffs)
    if (i >= 2) C.diffs[i - 1] = D;
  return C;
}

GradedComplex koszulComplex(const RingPtr& R, const Caps& caps) {
  requireFree(R, "a Koszul complex");
  return taylorOfQuotient(maximalIdeal(R), caps);
}

GradedComplex tensorComplex(const GradedComplex& C,
                            const std::vector<IndicatorSummand>& M) {
  GradedComplex out;
  out.d = C.d;
  Index n = static_cast<Index>(M.size());
  for (const auto& [i, list] : C.terms) {
    auto& t = out.terms[i];
    for (const auto& s : list)
      for (const auto& m : M)
        t.push_back({IntVec(s.shift + m.shift), m.support});
  }
  for (const auto& [i, D] : C.diffs) {
    IntMat B = IntMat::Zero(D.rows() * n, D.cols() * n);
    for (Index r = 0; r < D.rows(); ++r)
      for (Index c = 0; c < D.cols(); ++c) {
        if (D(r, c) == 0) continue;
        for (Index k = 0; k < n; ++k) B(r * n + k, c * n + k) = D(r, c);
      }
    out.diffs[i] = std::move(B);
  }
  return out;
}

GradedComplex homComplex(const GradedComplex& C,
                         const std::vector<IndicatorSummand>& M) {
  GradedComplex out;
  out.d = C.d;
  Index n = static_cast<Index>(M.size());
  for (const auto& [i, list] : C.terms) {
    auto& t = out.terms[-i];
    for (const auto& s : list)
      for (const auto& m : M)
        t.push_back({IntVec(m.shift - s.shift), m.support});
  }
  // Hom(d_{i+1}) maps Hom(F_i, M) to Hom(F_{i+1}, M): the stored matrix at
  // index -i is the blockwise transpose.
  for (const auto& [i, D] : C.diffs) {
    IntMat B = IntMat::Zero(D.cols() * n, D.rows() * n);
    for (Index r = 0; r < D.rows(); ++r)
      for (Index c = 0; c < D.cols(); ++c) {
        if (D(r, c) == 0) continue;
        for (Index k = 0; k < n; ++k) B(c * n + k, r * n + k) = D(r, c);
      }
    out.diffs[-(i - 1)] = std::move(B);
  }
  return out;
}

std::vector<IndicatorSummand> dualSummands(
    const std::vector<IndicatorSummand>& M) {
  std::vector<IndicatorSummand> out;
  for (const auto& s : M) {
    CellSet neg;
    neg.vars = s.support.vars;
    for (const auto& c : s.support.cells) {
      Cell nc;
      nc.poly.ineqA = -c.poly.ineqA;
      nc.poly.ineqB = c.poly.ineqB;
      nc.poly.eqA = -c.poly.eqA;
      nc.poly.eqB = c.poly.eqB;
      for (const auto& g : c.congs)
        nc.congs.push_back({g.modulus, IntVec(-g.coeffs), g.rhs});
      neg.cells.push_back(std::move(nc));
    }
    out.push_back({IntVec(-s.shift), std::move(neg)});
  }
  return out;
}

GradedComplex cechComplex(const ModuleExpr& M,
                          const std::vector<IntVec>& monomials,
                          const Caps& caps) {
  RingPtr ring = moduleRing(M);
  requireFree(ring, "a Cech complex");
  Index d = ring->d;
  size_t r = monomials.size();
  if (r > 20) fail(ErrorKind::GeneratorCap, "too many Cech monomials");
  for (const auto& m : monomials) {
    if (m.size() != d)
      fail(ErrorKind::DimMismatch, "Cech monomial of the wrong dimension");
    for (Index i = 0; i < d; ++i)
      if (m[i] < 0)
        fail(ErrorKind::OutOfDomain, "Cech monomials need nonnegative exponents");
  }
  auto base = moduleSummands(M, caps);
  GradedComplex C;
  C.d = d;

  std::vector<std::vector<unsigned>> levels(r + 1);
  for (unsigned mask = 0; mask < (1u << r); ++mask)
    levels[static_cast<unsigned>(__builtin_popcount(mask))].push_back(mask);
  std::vector<std::map<unsigned, Index>> pos(r + 1);
  Index n = static_cast<Index>(base.size());

  // Localized supports per inverted-variable set; equal sets share the work.
  std::map<std::vector<bool>, std::vector<IndicatorSummand>> memo;
  auto localized = [&](unsigned mask) -> const std::vector<IndicatorSummand>& {
    std::vector<bool> inT(static_cast<size_t>(d), false);
    for (size_t j = 0; j < r; ++j)
      if (mask & (1u << j))
        for (Index i = 0; i < d; ++i)
          if (monomials[j][i] > 0) inT[static_cast<size_t>(i)] = true;
    auto it = memo.find(inT);
    if (it != memo.end()) return it->second;
    std::vector<IndicatorSummand> loc;
    for (const auto& s : base) loc.push_back(localizeSummand(s, inT, caps));
    return memo.emplace(std::move(inT), std::move(loc)).first->second;
  };

  for (size_t l = 0; l <= r; ++l) {
    auto& t = C.terms[-static_cast<int>(l)];
    for (size_t k = 0; k < levels[l].size(); ++k) {
      pos[l][levels[l][k]] = static_cast<Index>(k);
      const auto& loc = localized(levels[l][k]);
      t.insert(t.end(), loc.begin(), loc.end());
    }
  }
  for (size_t l = 0; l + 1 <= r; ++l) {
    IntMat D = IntMat::Zero(static_cast<Index>(levels[l + 1].size()) * n,
                            static_cast<Index>(levels[l].size()) * n);
    for (unsigned mask : levels[l]) {
      for (size_t j = 0; j < r; ++j) {
        if (mask & (1u << j)) continue;
        unsigned up = mask | (1u << j);
        int sign = __builtin_popcount(mask & ((1u << j) - 1)) % 2 ? -1 : 1;
        for (Index k = 0; k < n; ++k)
          D(pos[l + 1][up] * n + k, pos[l][mask] * n + k) = sign;
      }
    }
    C.diffs[-static_cast<int>(l)] = std::move(D);
  }
  return C;
}

const char* certificateName(Certificate c) {
  switch (c) {
    case Certificate::ShellStable: return "shell-stable";
    case Certificate::UserBox: return "user-box";
    case Certificate::ExactSupport: return "exact-support";
    case Certificate::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

Int DegreewiseTable::total() const {
  Int n = 0;
  for (const auto& [i, byDeg] : dims)
    for (const auto& [b, dim] : byDeg) n += dim;
  return n;
}

long DegreewiseTable::at(int i, const IntVec& b) const {
  auto it = dims.find(i);
  if (it == dims.end()) return 0;
  auto jt = it->second.find(b);
  return jt == it->second.end() ? 0 : jt->second;
}

DegreewiseTable degreewiseHomology(const GradedComplex& C, const Box& box,
                                   const FieldConfig& field, const Caps& caps) {
  checkField(field);
  (void)caps;
  DegreewiseTable T;
  T.field = field;
  T.certificate = Certificate::UserBox;
  std::vector<int> indices;
  for (const auto& [i, list] : C.terms) indices.push_back(i);
  DimCache cache;
  forEachBoxPoint(box.low, box.high, [&](const IntVec& b) {
    auto masks = masksAround(C, indices, b);
    for (int i : indices) {
      long dim = dimFromMasks(C, i, masks, field, &cache);
      if (dim != 0) T.dims[i][b] = dim;
    }
    return true;
  });
  return T;
}

DegreewiseTable matlisDual(const DegreewiseTable& T) {
  DegreewiseTable out;
  out.certificate = T.certificate;
  out.field = T.field;
  for (const auto& [i, byDeg] : T.dims)
    for (const auto& [b, dim] : byDeg) out.dims[i][IntVec(-b)] = dim;
  return out;
}

LengthReport torLengths(int i, const ModuleExpr& M, const ModuleExpr& N,
                        const FieldConfig& field, const Caps& caps) {
  RingPtr ring = moduleRing(M);
  requireFree(ring, "Tor");
  if (!sameRing(*ring, *moduleRing(N)))
    fail(ErrorKind::RingMismatch, "Tor arguments live in different rings");
  if (i < 0) fail(ErrorKind::OutOfDomain, "Tor wants a nonnegative index");

  auto res = resolveExpr(M, caps);
  const ModuleExpr* other = &N;
  if (!res) {
    res = resolveExpr(N, caps);
    other = &M;
  }
  if (!res)
    fail(ErrorKind::Unsupported, "Tor needs a Taylor-resolvable argument");
  GradedComplex C = tensorComplex(*res, moduleSummands(*other, caps));

  Box box = shiftHull(C);
  IntVec reachM = exprGensHull(M, C.d), reachN = exprGensHull(N, C.d);
  box.high += reachM.cwiseMax(reachN);
  for (Index k = 0; k < C.d; ++k) box.low[k] = std::min(box.low[k], Int(0));

  auto shell = shellHomology(C, {i}, box, std::vector<bool>(C.d, true), {},
                             StabilizeOn::Entries, field, caps);
  LengthReport rep;
  rep.finite = shell.stable[i];
  rep.table = std::move(shell.table);
  rep.length = rep.table.total();
  return rep;
}

LengthReport extLengths(int i, const ModuleExpr& M, const ModuleExpr& N,
                        const FieldConfig& field, const Caps& caps) {
  RingPtr ring = moduleRing(M);
  requireFree(ring, "Ext");
  if (!sameRing(*ring, *moduleRing(N)))
    fail(ErrorKind::RingMismatch, "Ext arguments live in different rings");
  if (i < 0) fail(ErrorKind::OutOfDomain, "Ext wants a nonnegative index");

  auto res = resolveExpr(M, caps);
  if (!res)
    fail(ErrorKind::Unsupported, "Ext needs a Taylor-resolvable first argument");
  GradedComplex C = homComplex(*res, moduleSummands(N, caps));

  Box box = shiftHull(C);
  IntVec reach = exprGensHull(M, C.d).cwiseMax(exprGensHull(N, C.d));
  box.high += reach;
  box.low -= reach;

  auto shell = shellHomology(C, {-i}, box, std::vector<bool>(C.d, true), {},
                             StabilizeOn::Entries, field, caps);
  LengthReport rep;
  rep.finite = shell.stable[-i];
  rep.table = std::move(shell.table);
  rep.length = rep.table.total();
  return rep;
}

LengthReport betti(int i, const ModuleExpr& M, const FieldConfig& field,
                   const Caps& caps) {
  RingPtr ring = moduleRing(M);
  return torLengths(i, M, *quotientModule(maximalIdeal(ring)), field, caps);
}

std::map<int, LengthReport> localCohomologyLengths(const ModuleExpr& M,
                                                   const Window& window,
                                                   const FieldConfig& field,
                                                   const Caps& caps) {
  RingPtr ring = moduleRing(M);
  requireFree(ring, "local cohomology");
  Index d = ring->d;
  std::vector<IntVec> vars;
  for (Index j = 0; j < d; ++j) {
    IntVec e = IntVec::Zero(d);
    e[j] = 1;
    vars.push_back(e);
  }
  return localCohomologyLengths(M, vars, window, field, caps);
}

std::map<int, LengthReport> localCohomologyLengths(
    const ModuleExpr& M, const std::vector<IntVec>& monomials,
    const Window& window, const FieldConfig& field, const Caps& caps) {
  RingPtr ring = moduleRing(M);
  requireFree(ring, "local cohomology");
  Index d = ring->d;
  int r = static_cast<int>(monomials.size());
  GradedComplex C = cechComplex(M, monomials, caps);
  Box box = shiftHull(C);
  IntVec reach = exprGensHull(M, d) + onesVec(d);
  for (const auto& m : monomials) reach = reach.cwiseMax(m);
  box.high += reach;
  box.low -= reach;

  std::vector<int> indices;
  for (int l = 0; l <= r; ++l) indices.push_back(-l);
  auto shell = shellHomology(C, indices, box, std::vector<bool>(d, true),
                             window, StabilizeOn::Entries, field, caps);
  std::map<int, LengthReport> out;
  for (int l = 0; l <= r; ++l) {
    LengthReport rep;
    rep.finite = shell.stable[-l];
    rep.table.field = field;
    rep.table.certificate = rep.finite ? Certificate::ShellStable
                                       : Certificate::Inconclusive;
    auto it = shell.table.dims.find(-l);
    if (it != shell.table.dims.end()) rep.table.dims[-l] = it->second;
    rep.length = rep.table.total();
    out[l] = std::move(rep);
  }
  return out;
}

std::optional<Int> moduleLength(const ModuleExpr& M, const Caps& caps) {
  return moduleLength(M, Window{}, caps);
}

std::optional<Int> moduleLength(const ModuleExpr& M, const Window& window,
                                const Caps& caps) {
  RingPtr ring = moduleRing(M);
  Index d = ring->d;
  auto vars = ringCoordNames(d);
  Int total = 0;
  for (const auto& s : moduleSummands(M, caps)) {
    CellSet cs = s.support;
    if (window.lo || window.hi) {
      // The window bounds the degree sum; degrees are summand coordinates
      // plus the shift.
      LinTerm sum = LinTerm::lit(0);
      for (Index k = 0; k < d; ++k) {
        sum += LinTerm::var(vars[static_cast<size_t>(k)]);
        sum += LinTerm::lit(s.shift[k]);
      }
      std::vector<FormulaPtr> conj;
      conj.push_back(cellsFormulaAt(cs, coordTerms(vars)));
      if (window.lo)
        conj.push_back(mkCmp(sum, CmpOp::Ge, LinTerm::lit(*window.lo)));
      if (window.hi)
        conj.push_back(mkCmp(LinTerm::lit(*window.hi), CmpOp::Ge, sum));
      cs = toCells(mkAnd(conj), vars, caps);
    }
    auto len = lengthOfCells(cs, caps);
    if (!len) return std::nullopt;
    total += *len;
  }
  return total;
}

StdInvariants stdInvariants(const ModuleExpr& M, const FieldConfig& field,
                            const Caps& caps) {
  RingPtr ring = moduleRing(M);
  requireFree(ring, "standard invariants");
  Index d = ring->d;
  std::vector<IntVec> vars;
  for (Index j = 0; j < d; ++j) {
    IntVec e = IntVec::Zero(d);
    e[j] = 1;
    vars.push_back(e);
  }
  GradedComplex C = cechComplex(M, vars, caps);
  Box box = shiftHull(C);
  IntVec reach = exprGensHull(M, d) + onesVec(d);
  box.high += reach;
  box.low -= reach;

  std::vector<int> indices;
  for (int l = 0; l <= static_cast<int>(d); ++l) indices.push_back(-l);
  auto shell = shellHomology(C, indices, box, std::vector<bool>(d, true), {},
                             StabilizeOn::MaxSum, field, caps);

  StdInvariants inv;
  inv.a.assign(static_cast<size_t>(d) + 1, std::nullopt);
  int depth = -1, dim = -1;
  for (int l = 0; l <= static_cast<int>(d); ++l) {
    auto it = shell.table.dims.find(-l);
    if (it == shell.table.dims.end() || it->second.empty()) continue;
    if (!shell.stable[-l])
      fail(ErrorKind::ResourceLimit,
           "a-invariant did not stabilize at cohomological degree " +
               std::to_string(l));
    inv.a[static_cast<size_t>(l)] = shell.maxSum[-l];
    if (depth < 0) depth = l;
    dim = l;
  }
  if (dim < 0)
    fail(ErrorKind::Unsupported, "invariants of the zero module");
  inv.depth = depth;
  inv.dim = dim;
  bool haveReg = false;
  for (size_t l = 0; l < inv.a.size(); ++l) {
    if (!inv.a[l]) continue;
    Int cand = *inv.a[l] + Int(static_cast<long>(l));
    if (!haveReg || cand > inv.reg) inv.reg = cand;
    haveReg = true;
  }
  return inv;
}

long bassNumber(int i, const MonomialPrime& p, const ModuleExpr& M,
                const FieldConfig& field, const Caps& caps) {
  RingPtr ring = moduleRing(M);
  requireFree(ring, "Bass numbers");
  if (!sameRing(*ring, *p.ring))
    fail(ErrorKind::RingMismatch, "prime and module live in different rings");
  if (i < 0) fail(ErrorKind::OutOfDomain, "Bass numbers want a nonnegative index");
  Index d = ring->d;
  std::vector<bool> inT(static_cast<size_t>(d), true);
  for (Index j : p.vars) inT[static_cast<size_t>(j)] = false;

  GradedComplex K = taylorOfQuotient(primeIdeal(p), caps);
  std::vector<IndicatorSummand> loc;
  for (const auto& s : moduleSummands(M, caps))
    loc.push_back(localizeSummand(s, inT, caps));
  GradedComplex C = homComplex(K, loc);

  // Degrees are read on the sublattice supported on p's variables; the
  // localized dimensions are constant along the complementary directions.
  Box box = shiftHull(C);
  IntVec reach = exprGensHull(M, d) + onesVec(d);
  std::vector<bool> expand(static_cast<size_t>(d), false);
  for (Index k = 0; k < d; ++k) {
    if (inT[static_cast<size_t>(k)]) {
      box.low[k] = 0;
      box.high[k] = 0;
    } else {
      box.low[k] -= reach[k];
      box.high[k] += reach[k];
      expand[static_cast<size_t>(k)] = true;
    }
  }
  auto shell = shellHomology(C, {-i}, box, expand, {}, StabilizeOn::Entries,
                             field, caps);
  if (!shell.stable[-i])
    fail(ErrorKind::ResourceLimit, "Bass number did not stabilize");
  Int n = shell.table.total();
  return static_cast<long>(n.get_si());
}

VInvariantReport vInvariant(const MonomialPrime& p, const IntVec& lambda,
                            const ModuleExpr& M, const Caps& caps) {
  RingPtr ring = moduleRing(M);
  requireFree(ring, "v-invariants");
  if (!sameRing(*ring, *p.ring))
    fail(ErrorKind::RingMismatch, "prime and module live in different rings");
  Index d = ring->d;
  if (lambda.size() != d)
    fail(ErrorKind::DimMismatch, "direction dimension does not match the ring");

  // Product of the monomial primes properly containing p.
  std::vector<Index> inP(p.vars.begin(), p.vars.end());
  std::sort(inP.begin(), inP.end());
  std::vector<Index> outside;
  for (Index j = 0; j < d; ++j)
    if (!std::binary_search(inP.begin(), inP.end(), j)) outside.push_back(j);
  MonomialIdeal Jp = reduceGenerators(ring, {IntVec::Zero(d)});
  for (unsigned mask = 1; mask < (1u << outside.size()); ++mask) {
    std::vector<Index> vars = inP;
    for (size_t k = 0; k < outside.size(); ++k)
      if (mask & (1u << k)) vars.push_back(outside[k]);
    std::sort(vars.begin(), vars.end());
    Jp = combine(CombineKind::Product, Jp, primeIdeal({ring, vars}), caps);
  }

  auto vars = ringCoordNames(d);
  VInvariantReport rep;
  for (const auto& s : moduleSummands(M, caps)) {
    auto aliveAt = [&](const IntVec& offset) {
      std::vector<LinTerm> c = shiftedCoords(vars, IntVec(s.shift - offset));
      return cellsFormulaAt(s.support, c);
    };
    std::vector<FormulaPtr> ann = {aliveAt(IntVec::Zero(d))};
    for (Index j : p.vars) {
      IntVec e = IntVec::Zero(d);
      e[j] = 1;
      ann.push_back(mkNot(aliveAt(e)));
    }
    // Not every power of Jp survives: some generator ray eventually leaves
    // the support. The complement keeps the degrees where one ray stays in.
    std::vector<FormulaPtr> sat;
    for (const auto& h : Jp.gens) {
      std::vector<LinTerm> c;
      for (Index k = 0; k < d; ++k)
        c.push_back(LinTerm::var(vars[static_cast<size_t>(k)]) +
                    h[k] * LinTerm::var("vn") - LinTerm::lit(s.shift[k]));
      FormulaPtr inside = cellsFormulaAt(s.support, c);
      sat.push_back(mkExists(
          {"vn"}, mkAnd({mkCmp(LinTerm::var("vn"), CmpOp::Ge, LinTerm::lit(0)),
                         mkNot(inside)})));
    }
    FormulaPtr live = mkAnd({mkAnd(std::move(ann)), mkNot(mkAnd(std::move(sat)))});
    CellSet cs = toCells(live, vars, caps);
    for (const auto& piece : cellsToSemisimple(cs, caps).pieces) {
      for (const auto& g : piece.gens) {
        Int v = 0;
        for (Index k = 0; k < d; ++k) v += lambda[k] * g[k];
        if (v < 0)
          fail(ErrorKind::Unsupported,
               "v-invariant is unbounded in that direction");
      }
      Int v = 0;
      for (Index k = 0; k < d; ++k) v += lambda[k] * piece.base[k];
      if (!rep.present || v < rep.value) {
        rep.present = true;
        rep.value = v;
        rep.witness = piece.base;
      }
    }
  }
  return rep;
}

std::vector<Int> hilbertSamuel(const MonomialIdeal& I, const ModuleExpr& M,
                               long mLow, long mHigh, const Caps& caps) {
  RingPtr ring = moduleRing(M);
  requireFree(ring, "Hilbert-Samuel lengths");
  if (!sameRing(*ring, *I.ring))
    fail(ErrorKind::RingMismatch, "ideal and module live in different rings");
  Index d = ring->d;
  for (Index j = 0; j < d; ++j) {
    bool pure = false;
    for (const auto& g : I.gens) {
      bool onlyJ = g[j] > 0;
      for (Index k = 0; k < d && onlyJ; ++k)
        if (k != j && g[k] != 0) onlyJ = false;
      pure = pure || onlyJ;
    }
    if (!pure)
      fail(ErrorKind::NotPrimary,
           "every variable needs a pure power in the ideal");
  }
  if (mLow < 0 || mLow > mHigh)
    fail(ErrorKind::OutOfDomain, "bad Hilbert-Samuel range");

  auto summands = moduleSummands(M, caps);
  auto vars = ringCoordNames(d);
  auto coords = coordTerms(vars);
  auto wVars = vars;
  for (auto& v : wVars) v = "hs" + v;

  std::vector<Int> lengths;
  for (long m = mLow; m <= mHigh; ++m) {
    if (m == 0) {
      lengths.push_back(0);
      continue;
    }
    MonomialIdeal Im = power(I, Int(m), caps);
    Int total = 0;
    for (const auto& s : summands) {
      // Degrees of the summand not reached from another summand degree by an
      // I^m shift; shifts cancel, so work in summand-local coordinates.
      FormulaPtr aliveU = cellsFormulaAt(s.support, coords);
      std::vector<LinTerm> w, diff;
      for (size_t k = 0; k < wVars.size(); ++k) {
        w.push_back(LinTerm::var(wVars[k]));
        diff.push_back(LinTerm::var(vars[k]) - LinTerm::var(wVars[k]));
      }
      FormulaPtr reached = mkExists(
          wVars,
          mkAnd({cellsFormulaAt(s.support, w), idealMemberFormula(Im, diff)}));
      CellSet cs = toCells(mkAnd({aliveU, mkNot(reached)}), vars, caps);
      auto len = lengthOfCells(cs, caps);
      if (!len)
        fail(ErrorKind::Internal, "Hilbert-Samuel length came out infinite");
      total += *len;
    }
    lengths.push_back(total);
  }
  return lengths;
}

Int multiplicityDeg(const ModuleExpr& M, const FieldConfig& field,
                    const Caps& caps) {
  RingPtr ring = moduleRing(M);
  StdInvariants inv = stdInvariants(M, field, caps);
  long delta = inv.dim;
  MonomialIdeal mI = maximalIdeal(ring);

  // The delta-th difference of length(M/m^n M) stabilizes at e_0.
  long upTo = delta + 3;
  std::vector<Int> H;
  for (int round = 0; round <= caps.shellRounds; ++round) {
    auto more = hilbertSamuel(mI, M, H.empty() ? 1 : static_cast<long>(H.size()) + 1,
                              upTo, caps);
    H.insert(H.end(), more.begin(), more.end());
    std::vector<Int> diff = H;
    for (long k = 0; k < delta; ++k)
      for (size_t j = diff.size() - 1; j > 0; --j) diff[j] -= diff[j - 1];
    size_t n = diff.size();
    if (n >= static_cast<size_t>(delta) + 2 && diff[n - 1] == diff[n - 2])
      return diff[n - 1];
    upTo += 2;
  }
  fail(ErrorKind::ResourceLimit, "Hilbert-Samuel differences did not stabilize");
}

Int hilbertCoefficient(int j, const MonomialIdeal& I, const ModuleExpr& M,
                       const FieldConfig& field, const Caps& caps) {
  StdInvariants inv = stdInvariants(M, field, caps);
  long delta = inv.dim;
  if (j < 0 || j > delta)
    fail(ErrorKind::OutOfDomain,
         "Hilbert coefficient index must lie in [0, dim]");

  // Slide a window of delta+3 samples until the (delta+1)-th differences
  // vanish on it; the length function is then polynomial there.
  long width = delta + 3;
  std::vector<Int> H;
  long base = 1;
  for (int round = 0; round <= caps.shellRounds; ++round) {
    long upTo = base + width - 1;
    if (static_cast<long>(H.size()) < upTo) {
      auto more =
          hilbertSamuel(I, M, static_cast<long>(H.size()) + 1, upTo, caps);
      H.insert(H.end(), more.begin(), more.end());
    }
    std::vector<Int> diff(H.begin() + (base - 1), H.begin() + upTo);
    for (long k = 0; k <= delta; ++k)
      for (size_t t = diff.size() - 1; t > 0; --t) diff[t] -= diff[t - 1];
    bool flat = true;
    for (size_t t = static_cast<size_t>(delta) + 1; t < diff.size(); ++t)
      flat = flat && diff[t] == 0;
    if (!flat) {
      base += 1;
      continue;
    }

    // Interpolate in the binomial basis on m = base .. base+delta.
    long n = delta + 1;
    RatMat A(n, n);
    RatVec rhs(n);
    for (long r = 0; r < n; ++r) {
      long m = base + r;
      for (long c = 0; c < n; ++c) {
        Int v = binomInt(m - 1 + delta - c, delta - c);
        A(r, c) = Rat((c % 2 == 0) ? v : Int(-v));
      }
      rhs[r] = Rat(H[static_cast<size_t>(m - 1)]);
    }
    auto sol = rationalSolve(A, rhs);
    if (!sol)
      fail(ErrorKind::Internal, "Hilbert coefficient system is singular");
    Rat e = (*sol)[j];
    if (e.get_den() != 1)
      fail(ErrorKind::Internal, "Hilbert coefficient came out fractional");
    return e.get_num();
  }
  fail(ErrorKind::ResourceLimit,
       "Hilbert-Samuel lengths did not reach their polynomial range");
}

Rat hdeg(const ModuleExpr& M, const FieldConfig& field, const Caps& caps) {
  RingPtr ring = moduleRing(M);
  requireFree(ring, "homological degree");
  long d = static_cast<long>(ring->d);
  StdInvariants inv = stdInvariants(M, field, caps);
  long delta = inv.dim;
  Int deg = multiplicityDeg(M, field, caps);
  if (inv.depth == inv.dim) return Rat(deg);

  // Correction layers must be finite length; their homological degree is
  // then their length.
  ModulePtr R = quotientModule(MonomialIdeal{ring, {}});
  Int acc = deg;
  for (long i = d - delta + 1; i <= d; ++i) {
    LengthReport rep = extLengths(static_cast<int>(i), M, *R, field, caps);
    if (rep.length == 0) continue;
    if (!rep.finite)
      fail(ErrorKind::Unsupported,
           "homological degree needs finite-length Ext corrections");
    acc += binomInt(delta - 1, i - d + delta - 1) * rep.length;
  }
  return Rat(acc);
}

}  // namespace qg
