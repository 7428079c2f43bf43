#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>
#include <vector>

#include "quasigrade/semilinear.hpp"

using namespace qg;

namespace {

std::mt19937 rng(20240817);

int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

IntVec randVec(Index d, int lo, int hi) {
  IntVec v(d);
  for (Index i = 0; i < d; ++i) v[i] = pick(lo, hi);
  return v;
}

SimpleSet randSimple(Index d) {
  SimpleSet s;
  s.base = randVec(d, -3, 3);
  int k = pick(0, static_cast<int>(d));
  while (true) {
    std::vector<IntVec> gens;
    for (int i = 0; i < k; ++i) {
      IntVec g = randVec(d, -3, 3);
      if (!isZeroVec(g)) gens.push_back(g);
    }
    IntMat G(static_cast<Index>(gens.size()), d);
    for (Index i = 0; i < G.rows(); ++i) G.row(i) = gens[static_cast<size_t>(i)];
    if (rationalRank(toRat(G)) == G.rows()) {
      s.gens = gens;
      return s;
    }
  }
}

std::vector<std::string> coordNames(Index d) {
  std::vector<std::string> vars;
  for (Index i = 0; i < d; ++i) vars.push_back("u" + std::to_string(i + 1));
  return vars;
}

// Membership comparison over a full box; the semisimple side is checked
// through its constraint cells to keep the loop integer-only.
void checkSameMembershipOnBox(const CellSet& src, const SemisimpleSet& out,
                              Index d, int R) {
  CellSet outCells = semisimpleToCells(out, src.vars);
  IntVec lo = IntVec::Constant(d, -R), hi = IntVec::Constant(d, R);
  Int mismatches = 0;
  forEachBoxPoint(lo, hi, [&](const IntVec& u) {
    if (src.contains(u) != outCells.contains(u)) ++mismatches;
    return true;
  });
  CHECK(mismatches == 0);
}

void checkPairwiseDisjoint(const SemisimpleSet& out, Index d,
                           const Caps& caps) {
  auto vars = coordNames(d);
  for (size_t i = 0; i < out.pieces.size(); ++i)
    for (size_t j = i + 1; j < out.pieces.size(); ++j) {
      CellSet a = simpleToCells(out.pieces[i], vars);
      CellSet b = simpleToCells(out.pieces[j], vars);
      Cell both = intersectCells(a.cells[0], b.cells[0]);
      CHECK(!cellIntegerPoint(both, caps).has_value());
    }
}

}  // namespace

TEST_CASE("simple sets convert to constraint cells") {
  Caps caps = defaultCaps();

  // Quadrant: no congruences, two sides.
  SimpleSet quad{intVec({0, 0}), {intVec({1, 0}), intVec({0, 1})}};
  CellSet qc = simpleToCells(quad, {"u1", "u2"});
  REQUIRE(qc.cells.size() == 1);
  CHECK(qc.cells[0].congs.empty());
  CHECK(qc.contains(intVec({3, 5})));
  CHECK(!qc.contains(intVec({-1, 0})));

  // Arithmetic progression 1 + 3N.
  SimpleSet prog{intVec({1}), {intVec({3})}};
  CellSet pc = simpleToCells(prog, {"u"});
  for (int u = -10; u <= 30; ++u)
    CHECK(pc.contains(intVec({u})) == (u >= 1 && (u - 1) % 3 == 0));

  // Sublattice direction: even points on the axis.
  SimpleSet evens{intVec({0, 0}), {intVec({2, 0})}};
  CellSet ec = simpleToCells(evens, {"u1", "u2"});
  for (int x = -6; x <= 6; ++x)
    for (int y = -2; y <= 2; ++y)
      CHECK(ec.contains(intVec({x, y})) == (x >= 0 && x % 2 == 0 && y == 0));

  // Membership through cells agrees with the direct witness solve.
  for (int trial = 0; trial < 60; ++trial) {
    Index d = static_cast<Index>(pick(1, 3));
    SimpleSet s = randSimple(d);
    CellSet cs = simpleToCells(s, coordNames(d));
    for (int t = 0; t < 40; ++t) {
      IntVec u = randVec(d, -8, 8);
      CHECK(cs.contains(u) == memberSimple(s, u));
    }
  }
  (void)caps;
}

TEST_CASE("cells decompose into disjoint simple pieces") {
  Caps caps = defaultCaps();

  // 1 + 3N comes back as a single progression.
  SimpleSet prog{intVec({1}), {intVec({3})}};
  CellSet pc = simpleToCells(prog, {"u"});
  SemisimpleSet ps = cellsToSemisimple(pc, caps);
  REQUIRE(ps.pieces.size() == 1);
  CHECK(ps.pieces[0].base == intVec({1}));
  REQUIRE(ps.pieces[0].gens.size() == 1);
  CHECK(ps.pieces[0].gens[0] == intVec({3}));

  // The quadrant stays one piece with two generators.
  SimpleSet quad{intVec({0, 0}), {intVec({1, 0}), intVec({0, 1})}};
  SemisimpleSet qs = cellsToSemisimple(simpleToCells(quad, {"u1", "u2"}), caps);
  REQUIRE(qs.pieces.size() == 1);
  CHECK(qs.pieces[0].gens.size() == 2);

  // Quadrant minus both axes plus the origin: not finitely generated, still
  // a disjoint union of simple pieces.
  CellSet monoid;
  monoid.vars = {"u1", "u2"};
  {
    Cell origin;
    origin.poly.ineqA.resize(0, 2);
    origin.poly.ineqB.resize(0);
    origin.poly.eqA = IntMat::Identity(2, 2);
    origin.poly.eqB = IntVec::Zero(2);
    Cell interior;
    interior.poly.ineqA = IntMat::Identity(2, 2);
    interior.poly.ineqB = intVec({1, 1});
    interior.poly.eqA.resize(0, 2);
    interior.poly.eqB.resize(0);
    monoid.cells = {origin, interior};
  }
  SemisimpleSet ms = cellsToSemisimple(monoid, caps);
  checkSameMembershipOnBox(monoid, ms, 2, 12);
  checkPairwiseDisjoint(ms, 2, caps);

  // Round trip on random simple sets.
  for (int trial = 0; trial < 100; ++trial) {
    Index d = static_cast<Index>(pick(1, 3));
    SimpleSet s = randSimple(d);
    CellSet cs = simpleToCells(s, coordNames(d));
    SemisimpleSet out = cellsToSemisimple(cs, caps);
    checkSameMembershipOnBox(cs, out, d, 12);
    checkPairwiseDisjoint(out, d, caps);
    for (int t = 0; t < 12; ++t) {
      IntVec u = randVec(d, -12, 12);
      CHECK(memberSemisimple(out, u) == memberSimple(s, u));
    }
  }
}

TEST_CASE("minkowski sums and linear images act pointwise") {
  Caps caps = defaultCaps();

  SemilinearSet A{{LinearSet{intVec({0}), {intVec({2})}}}};
  SemilinearSet B{{LinearSet{intVec({0}), {intVec({3})}}}};
  SemilinearSet sum = minkowskiSum(A, B);
  REQUIRE(sum.pieces.size() == 1);
  for (int u = -5; u <= 30; ++u) {
    bool want = u >= 0 && u != 1;  // 2a + 3b hits everything except 1
    CHECK(memberSemilinear(sum, intVec({u}), caps) == want);
  }

  // Zero is the Minkowski identity.
  SemilinearSet zero{{LinearSet{intVec({0}), {}}}};
  SemilinearSet same = minkowskiSum(A, zero);
  for (int u = -4; u <= 12; ++u)
    CHECK(memberSemilinear(same, intVec({u}), caps) ==
          memberSemilinear(A, intVec({u}), caps));

  // Sum membership equals the brute-force sumset on a window.
  SemilinearSet C{{LinearSet{intVec({1}), {intVec({2})}},
                   LinearSet{intVec({0}), {}}}};
  SemilinearSet D{{LinearSet{intVec({2}), {intVec({3})}}}};
  SemilinearSet cd = minkowskiSum(C, D);
  std::set<int> oracle;
  for (int a = -1; a <= 40; ++a)
    for (int b = -1; b <= 40; ++b)
      if (memberSemilinear(C, intVec({a}), caps) &&
          memberSemilinear(D, intVec({b}), caps))
        oracle.insert(a + b);
  for (int u = 0; u <= 30; ++u)
    CHECK(memberSemilinear(cd, intVec({u}), caps) == (oracle.count(u) > 0));

  // Projection of the quadrant onto its first coordinate.
  SemilinearSet quad{{LinearSet{intVec({0, 0}),
                                {intVec({1, 0}), intVec({0, 1})}}}};
  IntMat proj(1, 2);
  proj << 1, 0;
  SemilinearSet ray = linearImage(quad, proj);
  for (int u = -4; u <= 10; ++u)
    CHECK(memberSemilinear(ray, intVec({u}), caps) == (u >= 0));

  // Dependent generators collapse under projection.
  SemilinearSet skew{{LinearSet{intVec({1, 1}),
                                {intVec({1, 3}), intVec({1, -2})}}}};
  SemilinearSet line = linearImage(skew, proj);
  for (int u = -3; u <= 10; ++u)
    CHECK(memberSemilinear(line, intVec({u}), caps) == (u >= 1));

  // The zero map sends everything to the origin.
  IntMat zmap = IntMat::Zero(2, 2);
  SemilinearSet origin = linearImage(quad, zmap);
  CHECK(memberSemilinear(origin, intVec({0, 0}), caps));
  CHECK(!memberSemilinear(origin, intVec({1, 0}), caps));
}

TEST_CASE("atoms of sampled monoids") {
  Caps caps = defaultCaps();

  // Free commutative monoid on two generators.
  SemilinearSet n2{{LinearSet{intVec({0, 0}),
                              {intVec({1, 0}), intVec({0, 1})}}}};
  SemisimpleSet a2 = atoms(n2, false, caps);
  for (int x = 0; x <= 6; ++x)
    for (int y = 0; y <= 6; ++y) {
      bool want = (x == 1 && y == 0) || (x == 0 && y == 1);
      CHECK(memberSemisimple(a2, intVec({x, y})) == want);
    }

  // Numerical semigroup <2,3>.
  SemilinearSet num{{LinearSet{intVec({0}), {intVec({2}), intVec({3})}}}};
  SemisimpleSet an = atoms(num, false, caps);
  for (int u = 0; u <= 20; ++u)
    CHECK(memberSemisimple(an, intVec({u})) == (u == 2 || u == 3));

  // Atoms regenerate the monoid on a window.
  std::set<int> reach = {0};
  for (int round = 0; round < 12; ++round) {
    std::set<int> next = reach;
    for (int r : reach)
      for (int a = 0; a <= 20; ++a)
        if (memberSemisimple(an, intVec({a})) && r + a <= 20)
          next.insert(r + a);
    reach = next;
  }
  for (int u = 0; u <= 20; ++u)
    CHECK((reach.count(u) > 0) ==
          memberSemilinear(num, intVec({u}), caps));

  // Quadrant minus the axes plus the origin: infinitely many atoms.
  SemilinearSet thick{{LinearSet{intVec({0, 0}), {}},
                       LinearSet{intVec({1, 1}),
                                 {intVec({1, 0}), intVec({0, 1})}}}};
  SemisimpleSet at = atoms(thick, false, caps);
  for (int x = 0; x <= 10; ++x)
    for (int y = 0; y <= 10; ++y) {
      bool inM = (x == 0 && y == 0) || (x >= 1 && y >= 1);
      bool decomposable = x >= 2 && y >= 2;
      bool want = inM && !(x == 0 && y == 0) && !decomposable;
      CHECK(memberSemisimple(at, intVec({x, y})) == want);
    }

  // Closure violation is caught with a witness.
  SemilinearSet broken{{LinearSet{intVec({0}), {}},
                        LinearSet{intVec({2}), {}},
                        LinearSet{intVec({3}), {}}}};
  CHECK_THROWS_WITH_AS(atoms(broken, false, caps),
                       doctest::Contains("closure"), Error);

  // Missing identity.
  SemilinearSet shifted{{LinearSet{intVec({1}), {intVec({1})}}}};
  CHECK_THROWS_WITH_AS(atoms(shifted, false, caps),
                       doctest::Contains("identity"), Error);

  // Nonzero units.
  SemilinearSet whole{{LinearSet{intVec({0}), {intVec({1}), intVec({-1})}}}};
  CHECK_THROWS_WITH_AS(atoms(whole, false, caps), doctest::Contains("unit"),
                       Error);
}

TEST_CASE("slice counting and extremes") {
  Caps caps = defaultCaps();

  // 0 <= q <= n.
  CellSet ramp = toCells(parseFormula("q >= 0 & q <= n"), {"n", "q"}, caps);
  SliceCount c5 = sliceCount(ramp, intVec({5}), caps);
  CHECK(c5.finite);
  CHECK(c5.count == 6);
  SliceCount cneg = sliceCount(ramp, intVec({-3}), caps);
  CHECK(cneg.finite);
  CHECK(cneg.count == 0);

  // Dilated standard triangle.
  CellSet tri = toCells(parseFormula("q1 >= 0 & q2 >= 0 & q1 + q2 <= n"),
                        {"n", "q1", "q2"}, caps);
  SliceCount t4 = sliceCount(tri, intVec({4}), caps);
  CHECK(t4.finite);
  CHECK(t4.count == 15);

  // Unbounded ray.
  CellSet ray = toCells(parseFormula("q >= 0"), {"n", "q"}, caps);
  CHECK(!sliceCount(ray, intVec({2}), caps).finite);

  // Congruence-filtered ramp.
  CellSet filt = toCells(parseFormula("q >= 0 & q <= n & 5 | q - 1"),
                         {"n", "q"}, caps);
  SliceCount f25 = sliceCount(filt, intVec({25}), caps);
  CHECK(f25.finite);
  CHECK(f25.count == 5);
  CellSet congRay = toCells(parseFormula("q >= 0 & 2 | q"), {"n", "q"}, caps);
  CHECK(!sliceCount(congRay, intVec({0}), caps).finite);

  // Extremes.
  SliceExtreme m7 = sliceExtreme(ramp, intVec({7}), intVec({1}), true, caps);
  CHECK(m7.kind == ExtremeKind::Finite);
  CHECK(m7.value == 7);
  SliceExtreme lo7 = sliceExtreme(ramp, intVec({7}), intVec({1}), false, caps);
  CHECK(lo7.value == 0);
  SliceExtreme tm = sliceExtreme(tri, intVec({4}), intVec({1, 1}), true, caps);
  CHECK(tm.kind == ExtremeKind::Finite);
  CHECK(tm.value == 4);
  CHECK(sliceExtreme(ray, intVec({0}), intVec({1}), true, caps).kind ==
        ExtremeKind::Unbounded);
  CHECK(sliceExtreme(ray, intVec({0}), intVec({1}), false, caps).kind ==
        ExtremeKind::Finite);
  CHECK(sliceExtreme(ramp, intVec({-2}), intVec({1}), true, caps).kind ==
        ExtremeKind::Empty);
  SliceExtreme fm = sliceExtreme(filt, intVec({25}), intVec({1}), true, caps);
  CHECK(fm.value == 21);

  // Counts agree with enumeration on random bounded slices.
  std::vector<std::string> nv{"n", "q"};
  for (int trial = 0; trial < 25; ++trial) {
    // Random mix of comparisons and congruences over n and q.
    std::vector<FormulaPtr> parts;
    parts.push_back(parseFormula("q >= -9 & q <= 9"));
    for (int i = 0, m = pick(1, 3); i < m; ++i) {
      LinTerm t = pick(-3, 3) * LinTerm::var("n") +
                  pick(-3, 3) * LinTerm::var("q") + LinTerm::lit(pick(-5, 5));
      switch (pick(0, 2)) {
        case 0: parts.push_back(mkCmp(t, CmpOp::Ge, LinTerm::lit(0))); break;
        case 1: parts.push_back(mkCmp(t, CmpOp::Le, LinTerm::lit(3))); break;
        default: parts.push_back(mkDvd(pick(2, 4), t)); break;
      }
    }
    CellSet S = toCells(mkAnd(std::move(parts)), nv, caps);
    for (int n : {-3, 0, 4}) {
      SliceCount sc = sliceCount(S, intVec({n}), caps);
      REQUIRE(sc.finite);
      Int want = 0;
      Int best = 0, worst = 0;
      bool seen = false;
      for (int q = -25; q <= 25; ++q) {
        if (!S.contains(intVec({n, q}))) continue;
        want += 1;
        if (!seen || q > best) best = q;
        if (!seen || q < worst) worst = q;
        seen = true;
      }
      CHECK(sc.count == want);
      SliceExtreme hi = sliceExtreme(S, intVec({n}), intVec({1}), true, caps);
      SliceExtreme lo = sliceExtreme(S, intVec({n}), intVec({1}), false, caps);
      if (!seen) {
        CHECK(hi.kind == ExtremeKind::Empty);
      } else {
        CHECK(hi.value == best);
        CHECK(lo.value == worst);
      }
    }
  }
}
