#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "quasigrade/monomial.hpp"

using namespace qg;

namespace {

std::mt19937 rng(20240817);

int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

MonomialIdeal randIdeal(const RingPtr& ring, int maxGens, int maxDeg) {
  std::vector<IntVec> exps;
  int n = pick(1, maxGens);
  for (int i = 0; i < n; ++i) {
    IntVec e(ring->d);
    for (Index j = 0; j < ring->d; ++j) e[j] = pick(0, maxDeg);
    exps.push_back(e);
  }
  return reduceGenerators(ring, std::move(exps));
}

// Direct generator-shift membership, used as the reference everywhere.
bool oracleMember(const std::vector<IntVec>& gens, const IntVec& q) {
  for (const auto& g : gens) {
    IntVec r = q - g;
    bool ok = true;
    for (Index i = 0; i < r.size(); ++i) ok = ok && r[i] >= 0;
    if (ok) return true;
  }
  return false;
}

void checkSameMembers(const MonomialIdeal& got,
                      const std::function<bool(const IntVec&)>& want, int lo,
                      int hi) {
  Index d = got.ring->d;
  IntVec a = IntVec::Constant(d, lo), b = IntVec::Constant(d, hi);
  Int bad = 0;
  forEachBoxPoint(a, b, [&](const IntVec& u) {
    if (member(got, u) != want(u)) ++bad;
    return true;
  });
  CHECK(bad == 0);
}

IntVec v2(int a, int b) { return intVec({a, b}); }

}  // namespace

TEST_CASE("ring construction checks pointedness, rank, freeness") {
  Caps caps = defaultCaps();

  RingPtr free2 = makeFreeRing(2);
  CHECK(free2->isFree);
  CHECK(ringContains(*free2, v2(3, 0)));
  CHECK(!ringContains(*free2, v2(-1, 2)));

  // Standard basis in any order is recognized as free.
  RingPtr alt = makeRing({v2(0, 1), v2(1, 0)}, caps);
  CHECK(alt->isFree);

  CHECK_THROWS_AS(makeRing({intVec({1}), intVec({-1})}, caps), Error);
  CHECK_THROWS_AS(makeRing({v2(1, 0)}, caps), Error);
  CHECK_THROWS_AS(makeRing({v2(1, 1), v2(-1, -1)}, caps), Error);

  // Rational normal cone of degree 2: membership matches the multiplier
  // witness search.
  RingPtr cone = makeRing({v2(1, 0), v2(1, 1), v2(1, 2)}, caps);
  CHECK(!cone->isFree);
  SemilinearSet M{{LinearSet{IntVec::Zero(2),
                             {v2(1, 0), v2(1, 1), v2(1, 2)}}}};
  for (int x = -2; x <= 6; ++x)
    for (int y = -2; y <= 12; ++y)
      CHECK(ringContains(*cone, v2(x, y)) ==
            memberSemilinear(M, v2(x, y), caps));
}

TEST_CASE("generator reduction and membership") {
  Caps caps = defaultCaps();
  RingPtr R2 = makeFreeRing(2);

  MonomialIdeal I = reduceGenerators(R2, {v2(2, 0), v2(3, 0), v2(0, 1)});
  CHECK(I.gens == std::vector<IntVec>{v2(0, 1), v2(2, 0)});

  MonomialIdeal Z = reduceGenerators(R2, {});
  CHECK(Z.isZero());
  CHECK(!member(Z, v2(0, 0)));

  MonomialIdeal sq = reduceGenerators(R2, {v2(2, 0), v2(0, 2)});
  CHECK(!member(sq, v2(1, 1)));
  CHECK(member(sq, v2(3, 0)));

  // Non-free ring: (2,1) = (1,0) + (1,1) is divisible by (1,0).
  RingPtr cone = makeRing({v2(1, 0), v2(1, 1), v2(1, 2)}, caps);
  MonomialIdeal J = reduceGenerators(cone, {v2(2, 1), v2(1, 0)});
  CHECK(J.gens == std::vector<IntVec>{v2(1, 0)});
  CHECK(member(J, v2(2, 1)));
  CHECK(!member(J, v2(0, 0)));
  CHECK_THROWS_AS(reduceGenerators(cone, {v2(0, 1)}), Error);
}

TEST_CASE("sums products intersections match oracles") {
  Caps caps = defaultCaps();
  RingPtr R2 = makeFreeRing(2);

  MonomialIdeal x = reduceGenerators(R2, {v2(1, 0)});
  MonomialIdeal y = reduceGenerators(R2, {v2(0, 1)});
  MonomialIdeal xy = combine(CombineKind::Intersection, x, y, caps);
  CHECK(xy.gens == std::vector<IntVec>{v2(1, 1)});

  MonomialIdeal a = reduceGenerators(R2, {v2(2, 0), v2(0, 1)});
  MonomialIdeal b = reduceGenerators(R2, {v2(1, 0), v2(0, 3)});
  MonomialIdeal prod = combine(CombineKind::Product, a, b, caps);
  CHECK(prod.gens ==
        std::vector<IntVec>{v2(0, 4), v2(1, 1), v2(3, 0)});

  MonomialIdeal zero = reduceGenerators(R2, {});
  CHECK(sameIdeal(combine(CombineKind::Sum, a, zero, caps), a));

  RingPtr R3 = makeFreeRing(3);
  for (int trial = 0; trial < 30; ++trial) {
    MonomialIdeal I = randIdeal(R3, 5, 6);
    MonomialIdeal J = randIdeal(R3, 5, 6);
    MonomialIdeal s = combine(CombineKind::Sum, I, J, caps);
    MonomialIdeal p = combine(CombineKind::Product, I, J, caps);
    MonomialIdeal m = combine(CombineKind::Intersection, I, J, caps);
    IntVec lo = IntVec::Zero(3), hi = IntVec::Constant(3, 12);
    Int bad = 0;
    forEachBoxPoint(lo, hi, [&](const IntVec& u) {
      bool inI = oracleMember(I.gens, u), inJ = oracleMember(J.gens, u);
      if (member(s, u) != (inI || inJ)) ++bad;
      if (member(m, u) != (inI && inJ)) ++bad;
      bool inP = false;
      for (const auto& gi : I.gens)
        for (const auto& gj : J.gens)
          inP = inP || oracleMember({gi + gj}, u);
      if (member(p, u) != inP) ++bad;
      return true;
    });
    CHECK(bad == 0);
    // Antichain invariant after every operation.
    for (const auto* K : {&s, &p, &m})
      for (size_t i = 0; i < K->gens.size(); ++i)
        for (size_t j = 0; j < K->gens.size(); ++j)
          if (i != j) CHECK(!ringDivides(*R3, K->gens[i], K->gens[j]));
  }

  CHECK_THROWS_AS(combine(CombineKind::Sum, a,
                          reduceGenerators(makeFreeRing(3), {}), caps),
                  Error);
}

TEST_CASE("powers iterate the product") {
  Caps caps = defaultCaps();
  RingPtr R2 = makeFreeRing(2);

  MonomialIdeal m = reduceGenerators(R2, {v2(1, 0), v2(0, 1)});
  MonomialIdeal m2 = power(m, 2, caps);
  CHECK(m2.gens == std::vector<IntVec>{v2(0, 2), v2(1, 1), v2(2, 0)});

  MonomialIdeal I = reduceGenerators(R2, {v2(2, 0), v2(0, 1)});
  MonomialIdeal I3 = power(I, 3, caps);
  CHECK(I3.gens ==
        std::vector<IntVec>{v2(0, 3), v2(2, 2), v2(4, 1), v2(6, 0)});

  CHECK(power(I, 0, caps).isUnit());

  // x^(k u) against iterated membership on a sample.
  for (int trial = 0; trial < 10; ++trial) {
    MonomialIdeal J = randIdeal(R2, 4, 5);
    MonomialIdeal J2 = power(J, 2, caps);
    for (int t = 0; t < 30; ++t) {
      IntVec u = v2(pick(0, 12), pick(0, 12));
      bool want = false;
      for (const auto& g1 : J.gens)
        for (const auto& g2 : J.gens)
          want = want || oracleMember({g1 + g2}, u);
      CHECK(member(J2, u) == want);
    }
  }
}

TEST_CASE("colon and saturation") {
  Caps caps = defaultCaps();
  RingPtr R2 = makeFreeRing(2);

  MonomialIdeal I = reduceGenerators(R2, {v2(2, 0), v2(1, 1)});
  MonomialIdeal y = reduceGenerators(R2, {v2(0, 1)});
  MonomialIdeal q = colon(I, y, caps);
  CHECK(q.gens == std::vector<IntVec>{v2(1, 0)});

  MonomialIdeal mxy = reduceGenerators(R2, {v2(1, 0), v2(0, 1)});
  MonomialIdeal sat = saturate(I, mxy, caps);
  CHECK(sat.gens == std::vector<IntVec>{v2(1, 0)});

  CHECK(sameIdeal(colon(I, power(mxy, 0, caps), caps), I));

  // u in I:K iff u+k in I for every generator k of K.
  for (int trial = 0; trial < 20; ++trial) {
    MonomialIdeal A = randIdeal(R2, 4, 6);
    MonomialIdeal K = randIdeal(R2, 3, 3);
    MonomialIdeal C = colon(A, K, caps);
    for (int t = 0; t < 40; ++t) {
      IntVec u = v2(pick(0, 12), pick(0, 12));
      bool want = true;
      for (const auto& k : K.gens) want = want && oracleMember(A.gens, u + k);
      CHECK(member(C, u) == want);
    }
  }
}

TEST_CASE("newton polyhedron facets") {
  Caps caps = defaultCaps();
  RingPtr R2 = makeFreeRing(2);

  MonomialIdeal sq = reduceGenerators(R2, {v2(2, 0), v2(0, 2)});
  Polyhedron P = newtonPolyhedron(sq, caps);
  for (int a = -1; a <= 6; ++a)
    for (int b = -1; b <= 6; ++b)
      CHECK(P.contains(v2(a, b)) == (a >= 0 && b >= 0 && a + b >= 2));

  MonomialIdeal px = reduceGenerators(R2, {v2(1, 0)});
  Polyhedron Q = newtonPolyhedron(px, caps);
  for (int a = -2; a <= 4; ++a)
    for (int b = -2; b <= 4; ++b)
      CHECK(Q.contains(v2(a, b)) == (a >= 1 && b >= 0));

  CHECK_THROWS_AS(newtonPolyhedron(reduceGenerators(R2, {}), caps), Error);

  Caps tight = caps;
  tight.newtonDim = 1;
  CHECK_THROWS_AS(newtonPolyhedron(sq, tight), Error);
}

TEST_CASE("integral closure equals the power-test oracle") {
  Caps caps = defaultCaps();
  RingPtr R2 = makeFreeRing(2);

  // Membership by definition: some kth multiple lands in the kth power.
  auto closureOracle = [&](const MonomialIdeal& I, const IntVec& u) {
    for (int k = 1; k <= 6; ++k)
      if (oracleMember(power(I, k, caps).gens, Int(k) * u)) return true;
    return false;
  };

  MonomialIdeal sq = reduceGenerators(R2, {v2(2, 0), v2(0, 2)});
  MonomialIdeal csq = integralClosure(sq, caps);
  CHECK(csq.gens == std::vector<IntVec>{v2(0, 2), v2(1, 1), v2(2, 0)});
  checkSameMembers(csq, [&](const IntVec& u) { return closureOracle(sq, u); },
                   0, 8);

  MonomialIdeal px = reduceGenerators(R2, {v2(1, 0)});
  CHECK(sameIdeal(integralClosure(px, caps), px));

  MonomialIdeal mix = reduceGenerators(R2, {v2(3, 0), v2(0, 2)});
  MonomialIdeal cmix = integralClosure(mix, caps);
  CHECK(cmix.gens == std::vector<IntVec>{v2(0, 2), v2(2, 1), v2(3, 0)});
  checkSameMembers(cmix, [&](const IntVec& u) { return closureOracle(mix, u); },
                   0, 8);

  for (int trial = 0; trial < 8; ++trial) {
    MonomialIdeal I = randIdeal(R2, 3, 4);
    MonomialIdeal c1 = integralClosure(I, caps);
    // Idempotent, extensive, and multiplicative up to containment.
    CHECK(sameIdeal(integralClosure(c1, caps), c1));
    for (const auto& g : I.gens) CHECK(member(c1, g));
    MonomialIdeal J = randIdeal(R2, 3, 4);
    MonomialIdeal cIJ =
        integralClosure(combine(CombineKind::Product, I, J, caps), caps);
    MonomialIdeal cc = combine(CombineKind::Product, c1,
                               integralClosure(J, caps), caps);
    for (const auto& g : cc.gens) CHECK(member(cIJ, g));
  }
}

TEST_CASE("minimal primes and symbolic powers") {
  Caps caps = defaultCaps();
  RingPtr R3 = makeFreeRing(3);

  MonomialIdeal edges = reduceGenerators(
      R3, {intVec({1, 1, 0}), intVec({1, 0, 1}), intVec({0, 1, 1})});
  auto prim = minimalPrimes(edges);
  REQUIRE(prim.size() == 3);
  for (const auto& p : prim) CHECK(p.vars.size() == 2);

  RingPtr R2 = makeFreeRing(2);
  MonomialIdeal x2 = reduceGenerators(R2, {v2(2, 0)});
  auto px = minimalPrimes(x2);
  REQUIRE(px.size() == 1);
  CHECK(px[0].vars == std::vector<Index>{0});

  MonomialIdeal emb = reduceGenerators(R2, {v2(2, 0), v2(1, 1)});
  auto pe = minimalPrimes(emb);
  REQUIRE(pe.size() == 1);
  CHECK(pe[0].vars == std::vector<Index>{0});

  // Symbolic square of the edge ideal picks up xyz.
  MonomialIdeal s2 = symbolicPower(edges, 2, caps);
  MonomialIdeal e2 = power(edges, 2, caps);
  CHECK(member(s2, intVec({1, 1, 1})));
  CHECK(!member(e2, intVec({1, 1, 1})));
  for (const auto& g : e2.gens) CHECK(member(s2, g));

  // First symbolic power returns the prime itself, and strips embedded
  // components in general.
  MonomialIdeal pxy = reduceGenerators(R2, {v2(1, 0)});
  CHECK(sameIdeal(symbolicPower(pxy, 1, caps), pxy));
  CHECK(symbolicPower(emb, 1, caps).gens == std::vector<IntVec>{v2(1, 0)});

  for (int trial = 0; trial < 6; ++trial) {
    MonomialIdeal I = randIdeal(R2, 3, 3);
    if (I.isUnit()) continue;
    for (int n = 1; n <= 2; ++n) {
      MonomialIdeal sp = symbolicPower(I, n, caps);
      for (const auto& g : power(I, n, caps).gens) CHECK(member(sp, g));
    }
  }
}

TEST_CASE("multiplier ideals from the Newton interior") {
  Caps caps = defaultCaps();
  RingPtr R2 = makeFreeRing(2);
  IntVec w = intVec({1, 1});

  // q + (1,1) interior of NP(<x^4,y^4>) iff q1+q2 >= 3 (and q >= 0).
  MonomialIdeal q4 = reduceGenerators(R2, {v2(4, 0), v2(0, 4)});
  MonomialIdeal J4 = multiplierIdeal(q4, w, 1, caps);
  MonomialIdeal m3 = power(reduceGenerators(R2, {v2(1, 0), v2(0, 1)}), 3, caps);
  CHECK(sameIdeal(J4, m3));

  MonomialIdeal m1 = reduceGenerators(R2, {v2(1, 0), v2(0, 1)});
  CHECK(multiplierIdeal(m1, w, 1, caps).isUnit());

  // Monotone under Newton containment.
  MonomialIdeal inner = combine(CombineKind::Product, q4, m1, caps);
  MonomialIdeal Jinner = multiplierIdeal(inner, w, 1, caps);
  for (const auto& g : Jinner.gens) CHECK(member(J4, g));

  // Definition oracle on a box.
  auto rows = newtonPolyhedron(q4, caps);
  checkSameMembers(J4,
                   [&](const IntVec& u) {
                     if (u[0] < 0 || u[1] < 0) return false;
                     IntVec shifted = u + w;
                     for (Index i = 0; i < rows.ineqA.rows(); ++i) {
                       IntVec a = rows.ineqA.row(i).transpose();
                       if (!(a.dot(shifted) > rows.ineqB[i])) return false;
                     }
                     return true;
                   },
                   0, 6);
}

TEST_CASE("non-free ring operations run through the formula engine") {
  Caps caps = defaultCaps();
  RingPtr cone = makeRing({v2(1, 0), v2(1, 1), v2(1, 2)}, caps);

  MonomialIdeal I = reduceGenerators(cone, {v2(1, 0)});
  MonomialIdeal J = reduceGenerators(cone, {v2(1, 2)});
  MonomialIdeal m = combine(CombineKind::Intersection, I, J, caps);
  for (int x = 0; x <= 5; ++x)
    for (int y = 0; y <= 10; ++y) {
      IntVec u = v2(x, y);
      bool want = member(I, u) && member(J, u);
      CHECK(member(m, u) == want);
    }

  MonomialIdeal C = colon(I, J, caps);
  for (int x = 0; x <= 5; ++x)
    for (int y = 0; y <= 10; ++y) {
      IntVec u = v2(x, y);
      if (!ringContains(*cone, u)) continue;
      bool want = true;
      for (const auto& k : J.gens) want = want && member(I, u + k);
      CHECK(member(C, u) == want);
    }

  MonomialIdeal cl = integralClosure(I, caps);
  CHECK(member(cl, v2(1, 0)));
  for (const auto& g : I.gens) CHECK(member(cl, g));
}
