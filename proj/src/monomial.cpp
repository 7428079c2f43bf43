#include "quasigrade/monomial.hpp"

#include <algorithm>

#include "quasigrade/cone.hpp"

namespace qg {
namespace {

void requireSameRing(const MonomialIdeal& I, const MonomialIdeal& J) {
  if (!I.ring || !J.ring || !sameRing(*I.ring, *J.ring))
    fail(ErrorKind::RingMismatch, "ideals live in different rings");
}

std::vector<IntVec> sortedUnique(std::vector<IntVec> v) {
  std::sort(v.begin(), v.end(), LexLess{});
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

MonomialIdeal fromUpset(const RingPtr& ring, const UpsetAt& upsetAt,
                        const Caps& caps) {
  return reduceGenerators(ring, minimalUpsetGenerators(*ring, upsetAt, caps));
}

MonomialIdeal unitIdeal(const RingPtr& ring) {
  MonomialIdeal I;
  I.ring = ring;
  I.gens = {IntVec::Zero(ring->d)};
  return I;
}

// Newton polyhedron facets as rows a.u >= b.
std::vector<std::pair<IntVec, Int>> newtonRows(const MonomialIdeal& I,
                                               const Caps& caps) {
  const SemigroupRing& R = *I.ring;
  if (I.isZero()) fail(ErrorKind::ZeroIdeal, "zero ideal has no Newton polyhedron");
  if (R.d > caps.newtonDim)
    fail(ErrorKind::DimensionCap, "Newton polyhedron capped at dimension " +
                                      std::to_string(caps.newtonDim));
  // Homogenize: generators at height 1, recession rays at height 0.
  IntMat rays(static_cast<Index>(I.gens.size() + R.gens.size()), R.d + 1);
  Index r = 0;
  for (const auto& g : I.gens) {
    rays.row(r).head(R.d) = g.transpose();
    rays(r, R.d) = 1;
    ++r;
  }
  for (const auto& g : R.gens) {
    rays.row(r).head(R.d) = g.transpose();
    rays(r, R.d) = 0;
    ++r;
  }
  std::vector<std::pair<IntVec, Int>> rows;
  for (const auto& f : facetsFromRays(rays)) {
    IntVec a = f.normal.head(R.d);
    Int b = -f.normal[R.d];
    rows.emplace_back(std::move(a), std::move(b));
  }
  return rows;
}

}  // namespace

std::vector<std::string> ringCoordNames(Index d) {
  std::vector<std::string> vars;
  for (Index i = 0; i < d; ++i) vars.push_back("u" + std::to_string(i + 1));
  return vars;
}

std::vector<LinTerm> coordTerms(const std::vector<std::string>& vars) {
  std::vector<LinTerm> t;
  for (const auto& v : vars) t.push_back(LinTerm::var(v));
  return t;
}

RingPtr makeFreeRing(Index d) {
  auto R = std::make_shared<SemigroupRing>();
  R->d = d;
  for (Index i = 0; i < d; ++i) {
    IntVec e = IntVec::Zero(d);
    e[i] = 1;
    R->gens.push_back(e);
  }
  R->isFree = true;
  R->cells.vars = ringCoordNames(d);
  Cell c;
  c.poly.ineqA = IntMat::Identity(d, d);
  c.poly.ineqB = IntVec::Zero(d);
  c.poly.eqA.resize(0, d);
  c.poly.eqB.resize(0);
  R->cells.cells.push_back(std::move(c));
  return R;
}

RingPtr makeRing(std::vector<IntVec> gens, const Caps& caps) {
  if (gens.empty()) fail(ErrorKind::NotAMonoid, "a semigroup needs generators");
  Index d = gens[0].size();
  IntMat G(static_cast<Index>(gens.size()), d);
  for (Index i = 0; i < G.rows(); ++i) {
    if (gens[static_cast<size_t>(i)].size() != d)
      fail(ErrorKind::DimMismatch, "generators of mixed dimension");
    G.row(i) = gens[static_cast<size_t>(i)].transpose();
  }
  if (rationalRank(toRat(G)) != d)
    fail(ErrorKind::UnsupportedRing,
         "semigroup must generate a full-rank subgroup");
  // Pointed: some functional is strictly positive on every generator.
  Polyhedron strict;
  strict.ineqA = G;
  strict.ineqB = IntVec::Ones(G.rows());
  strict.eqA.resize(0, d);
  strict.eqB.resize(0);
  if (!rationallyFeasible(strict))
    fail(ErrorKind::NonPointedCone, "semigroup cone contains a line");

  auto R = std::make_shared<SemigroupRing>();
  R->d = d;
  R->gens = sortedUnique(std::move(gens));

  // Free exactly when the generators are the standard basis.
  R->isFree = static_cast<Index>(R->gens.size()) == d;
  for (Index i = 0; i < d && R->isFree; ++i) {
    IntVec e = IntVec::Zero(d);
    e[i] = 1;
    R->isFree = std::find(R->gens.begin(), R->gens.end(), e) != R->gens.end();
  }
  if (R->isFree) return makeFreeRing(d);

  SemilinearSet M{{LinearSet{IntVec::Zero(d), R->gens}}};
  R->cells = semilinearToCells(M, ringCoordNames(d), caps);

  // A saturated semigroup is every lattice point of its cone inside the
  // generated group, one cell of facet rows plus group congruences. That
  // description keeps later complements small, so prefer it whenever the
  // inclusion check confirms it. Gappy rings keep the decomposition cells.
  IntMat GS(static_cast<Index>(R->gens.size()), d);
  for (Index i = 0; i < GS.rows(); ++i)
    GS.row(i) = R->gens[static_cast<size_t>(i)].transpose();
  Cell sat;
  sat.poly.ineqA.resize(0, d);
  sat.poly.ineqB.resize(0);
  sat.poly.eqA.resize(0, d);
  sat.poly.eqB.resize(0);
  for (const auto& f : facetsFromRays(GS)) sat.poly.addIneq(f.normal, Int(0));
  auto snf = smithNormalForm(IntMat(GS.transpose()));
  for (Index i = 0; i < d; ++i) {
    Int s = snf.S(i, i);
    if (s > 1)
      sat.congs.push_back({s, snf.U.row(i).transpose(), Int(0)});
  }
  CellSet satSet;
  satSet.vars = ringCoordNames(d);
  satSet.cells = {std::move(sat)};
  try {
    if (cellsSubset(satSet, R->cells, caps)) R->cells = std::move(satSet);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ResourceLimit) throw;
  }
  return R;
}

bool sameRing(const SemigroupRing& a, const SemigroupRing& b) {
  return a.d == b.d && a.gens == b.gens;
}

bool ringContains(const SemigroupRing& R, const IntVec& q) {
  return R.cells.contains(q);
}

bool ringDivides(const SemigroupRing& R, const IntVec& a, const IntVec& b) {
  return ringContains(R, b - a);
}

FormulaPtr ringMemberFormula(const SemigroupRing& R,
                             const std::vector<LinTerm>& coords) {
  if (static_cast<Index>(coords.size()) != R.d)
    fail(ErrorKind::DimMismatch, "coordinate count does not match the ring");
  if (R.isFree) {
    std::vector<FormulaPtr> conj;
    for (const auto& t : coords)
      conj.push_back(mkCmp(t, CmpOp::Ge, LinTerm::lit(0)));
    return mkAnd(std::move(conj));
  }
  // The cached cells are already quantifier-free, so membership at arbitrary
  // coordinate terms never reruns elimination.
  return cellsFormulaAt(R.cells, coords);
}

FormulaPtr idealMemberFormula(const MonomialIdeal& I,
                              const std::vector<LinTerm>& coords) {
  std::vector<FormulaPtr> any;
  for (const auto& g : I.gens) {
    std::vector<LinTerm> shifted = coords;
    for (Index i = 0; i < g.size(); ++i)
      shifted[static_cast<size_t>(i)] -= LinTerm::lit(g[i]);
    any.push_back(ringMemberFormula(*I.ring, shifted));
  }
  return mkOr(std::move(any));
}

MonomialIdeal reduceGenerators(const RingPtr& ring, std::vector<IntVec> exps) {
  for (const auto& e : exps)
    if (!ringContains(*ring, e))
      fail(ErrorKind::NotInSemigroup,
           "exponent " + toString(e) + " lies outside the semigroup");
  exps = sortedUnique(std::move(exps));
  MonomialIdeal I;
  I.ring = ring;
  for (size_t i = 0; i < exps.size(); ++i) {
    bool minimal = true;
    for (size_t j = 0; j < exps.size() && minimal; ++j)
      if (j != i && ringDivides(*ring, exps[j], exps[i])) minimal = false;
    if (minimal) I.gens.push_back(exps[i]);
  }
  return I;
}

bool member(const MonomialIdeal& I, const IntVec& q) {
  for (const auto& g : I.gens)
    if (ringDivides(*I.ring, g, q)) return true;
  return false;
}

bool sameIdeal(const MonomialIdeal& I, const MonomialIdeal& J) {
  return sameRing(*I.ring, *J.ring) && I.gens == J.gens;
}

std::vector<IntVec> minimalUpsetGenerators(const SemigroupRing& R,
                                           const UpsetAt& upsetAt,
                                           const Caps& caps) {
  // A member u of an upset is non-minimal exactly when u - g stays in the
  // set for some semigroup generator g: any witness v < u yields u - v =
  // g + rest, and v + rest is again a member. One shifted membership per
  // generator therefore replaces a quantified copy of the whole set.
  auto vars = ringCoordNames(R.d);
  auto coords = coordTerms(vars);
  std::vector<FormulaPtr> conj = {upsetAt(coords)};
  for (const auto& g : R.gens) {
    std::vector<LinTerm> down = coords;
    for (Index i = 0; i < R.d; ++i)
      down[static_cast<size_t>(i)] -= LinTerm::lit(g[i]);
    conj.push_back(mkNot(upsetAt(down)));
  }
  FormulaPtr minimal = mkAnd(std::move(conj));
  SemisimpleSet points = cellsToSemisimple(toCells(minimal, vars, caps), caps);
  std::vector<IntVec> out;
  for (const auto& p : points.pieces) {
    if (!p.gens.empty())
      fail(ErrorKind::Internal, "minimal generator region is not finite");
    out.push_back(p.base);
  }
  return sortedUnique(std::move(out));
}

MonomialIdeal combine(CombineKind kind, const MonomialIdeal& I,
                      const MonomialIdeal& J, const Caps& caps) {
  requireSameRing(I, J);
  switch (kind) {
    case CombineKind::Sum: {
      std::vector<IntVec> exps = I.gens;
      exps.insert(exps.end(), J.gens.begin(), J.gens.end());
      return reduceGenerators(I.ring, std::move(exps));
    }
    case CombineKind::Product: {
      std::vector<IntVec> exps;
      for (const auto& a : I.gens)
        for (const auto& b : J.gens) exps.push_back(a + b);
      return reduceGenerators(I.ring, std::move(exps));
    }
    case CombineKind::Intersection: {
      if (I.isZero() || J.isZero()) return MonomialIdeal{I.ring, {}};
      if (I.ring->isFree) {
        std::vector<IntVec> exps;
        for (const auto& a : I.gens)
          for (const auto& b : J.gens) exps.push_back(a.cwiseMax(b));
        return reduceGenerators(I.ring, std::move(exps));
      }
      return fromUpset(
          I.ring,
          [&](const std::vector<LinTerm>& c) {
            return mkAnd({idealMemberFormula(I, c), idealMemberFormula(J, c)});
          },
          caps);
    }
  }
  fail(ErrorKind::Internal, "combine fell through");
}

MonomialIdeal power(const MonomialIdeal& I, const Int& e, const Caps& caps) {
  if (e < 0) fail(ErrorKind::Internal, "power wants a nonnegative exponent");
  MonomialIdeal acc = unitIdeal(I.ring);
  for (Int i = 0; i < e; i += 1) acc = combine(CombineKind::Product, acc, I, caps);
  return acc;
}

MonomialIdeal colon(const MonomialIdeal& I, const MonomialIdeal& K,
                    const Caps& caps) {
  requireSameRing(I, K);
  if (K.isZero()) return unitIdeal(I.ring);
  if (I.isZero()) return I;
  if (I.ring->isFree) {
    // I : x^k shifts generators down; I : K intersects over K's generators.
    MonomialIdeal acc;
    bool first = true;
    for (const auto& k : K.gens) {
      std::vector<IntVec> shifted;
      for (const auto& g : I.gens)
        shifted.push_back((g - k).cwiseMax(IntVec::Zero(g.size())));
      MonomialIdeal one = reduceGenerators(I.ring, std::move(shifted));
      acc = first ? one : combine(CombineKind::Intersection, acc, one, caps);
      first = false;
    }
    return acc;
  }
  return fromUpset(
      I.ring,
      [&](const std::vector<LinTerm>& c) {
        // The quotient lives in the ring; u + k in I alone does not force u
        // into the semigroup.
        std::vector<FormulaPtr> conj = {ringMemberFormula(*I.ring, c)};
        for (const auto& k : K.gens) {
          std::vector<LinTerm> shifted = c;
          for (Index i = 0; i < k.size(); ++i)
            shifted[static_cast<size_t>(i)] += LinTerm::lit(k[i]);
          conj.push_back(idealMemberFormula(I, shifted));
        }
        return mkAnd(std::move(conj));
      },
      caps);
}

MonomialIdeal saturate(const MonomialIdeal& I, const MonomialIdeal& K,
                       const Caps& caps) {
  requireSameRing(I, K);
  MonomialIdeal cur = I;
  for (int round = 0; round < 512; ++round) {
    MonomialIdeal next = colon(cur, K, caps);
    if (next.gens == cur.gens) return cur;
    cur = std::move(next);
  }
  fail(ErrorKind::ResourceLimit, "saturation did not stabilize");
}

Polyhedron newtonPolyhedron(const MonomialIdeal& I, const Caps& caps) {
  Polyhedron P;
  Index d = I.ring->d;
  P.ineqA.resize(0, d);
  P.ineqB.resize(0);
  P.eqA.resize(0, d);
  P.eqB.resize(0);
  for (const auto& [a, b] : newtonRows(I, caps)) P.addIneq(a, b);
  return P;
}

MonomialIdeal integralClosure(const MonomialIdeal& I, const Caps& caps) {
  auto rows = newtonRows(I, caps);
  return fromUpset(
      I.ring,
      [&](const std::vector<LinTerm>& c) {
        std::vector<FormulaPtr> conj = {ringMemberFormula(*I.ring, c)};
        for (const auto& [a, b] : rows) {
          LinTerm t = LinTerm::lit(0);
          for (Index i = 0; i < a.size(); ++i)
            t += a[i] * c[static_cast<size_t>(i)];
          conj.push_back(mkCmp(t, CmpOp::Ge, LinTerm::lit(b)));
        }
        return mkAnd(std::move(conj));
      },
      caps);
}

std::vector<MonomialPrime> minimalPrimes(const MonomialIdeal& I) {
  if (!I.ring->isFree)
    fail(ErrorKind::UnsupportedRing, "minimal primes need the free ring");
  if (I.isZero()) fail(ErrorKind::ZeroIdeal, "zero ideal has no minimal primes");
  if (I.isUnit())
    fail(ErrorKind::Unsupported, "unit ideal has no minimal primes");
  Index d = I.ring->d;
  std::vector<std::vector<Index>> supports;
  for (const auto& g : I.gens) {
    std::vector<Index> s;
    for (Index i = 0; i < d; ++i)
      if (g[i] > 0) s.push_back(i);
    supports.push_back(std::move(s));
  }
  // Minimal hitting sets of the supports, by increasing size.
  std::vector<std::vector<Index>> hits;
  for (unsigned mask = 1; mask < (1u << d); ++mask) {
    std::vector<Index> set;
    for (Index i = 0; i < d; ++i)
      if (mask & (1u << i)) set.push_back(i);
    bool hitsAll = true;
    for (const auto& s : supports) {
      bool hit = false;
      for (Index i : set) hit = hit || std::count(s.begin(), s.end(), i) > 0;
      hitsAll = hitsAll && hit;
    }
    if (!hitsAll) continue;
    bool shrinkable = false;
    for (const auto& h : hits)
      if (std::includes(set.begin(), set.end(), h.begin(), h.end()))
        shrinkable = true;
    if (!shrinkable) hits.push_back(set);
  }
  std::vector<MonomialPrime> out;
  for (auto& h : hits) out.push_back({I.ring, std::move(h)});
  return out;
}

MonomialIdeal primeIdeal(const MonomialPrime& p) {
  std::vector<IntVec> gens;
  for (Index i : p.vars) {
    IntVec e = IntVec::Zero(p.ring->d);
    e[i] = 1;
    gens.push_back(e);
  }
  return reduceGenerators(p.ring, std::move(gens));
}

MonomialIdeal symbolicPower(const MonomialIdeal& I, const Int& n,
                            const Caps& caps) {
  if (!I.ring->isFree)
    fail(ErrorKind::UnsupportedRing, "symbolic powers need the free ring");
  if (n <= 0) fail(ErrorKind::Internal, "symbolic power wants n >= 1");
  MonomialIdeal In = power(I, n, caps);
  MonomialIdeal acc;
  bool first = true;
  for (const auto& p : minimalPrimes(I)) {
    // Localize at p by clearing the variables outside p.
    IntVec outside = IntVec::Zero(I.ring->d);
    for (Index i = 0; i < I.ring->d; ++i)
      if (std::count(p.vars.begin(), p.vars.end(), i) == 0) outside[i] = 1;
    MonomialIdeal K = reduceGenerators(I.ring, {outside});
    MonomialIdeal sat = saturate(In, K, caps);
    acc = first ? sat : combine(CombineKind::Intersection, acc, sat, caps);
    first = false;
  }
  return acc;
}

MonomialIdeal multiplierIdeal(const MonomialIdeal& I, const IntVec& w,
                              const Int& r, const Caps& caps) {
  if (r <= 0) fail(ErrorKind::Internal, "multiplier ideal wants r >= 1");
  auto rows = newtonRows(I, caps);
  return fromUpset(
      I.ring,
      [&](const std::vector<LinTerm>& c) {
        std::vector<FormulaPtr> conj = {ringMemberFormula(*I.ring, c)};
        // q + w/r interior: every facet inequality strict after scaling by r.
        for (const auto& [a, b] : rows) {
          LinTerm t = LinTerm::lit(a.dot(w) - r * b - 1);
          for (Index i = 0; i < a.size(); ++i)
            t += r * a[i] * c[static_cast<size_t>(i)];
          conj.push_back(mkCmp(t, CmpOp::Ge, LinTerm::lit(0)));
        }
        return mkAnd(std::move(conj));
      },
      caps);
}

}  // namespace qg
