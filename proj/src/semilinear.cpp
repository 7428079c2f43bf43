#include "quasigrade/semilinear.hpp"

#include <algorithm>
#include <set>

namespace qg {
namespace {

IntMat gensMatrix(const std::vector<IntVec>& gens, Index d) {
  IntMat G(static_cast<Index>(gens.size()), d);
  for (Index i = 0; i < G.rows(); ++i)
    G.row(i) = gens[static_cast<size_t>(i)].transpose();
  return G;
}

std::vector<IntVec> cleanGens(const std::vector<IntVec>& gens) {
  std::vector<IntVec> out;
  for (const auto& g : gens) {
    if (isZeroVec(g)) continue;
    bool dup = false;
    for (const auto& h : out) dup = dup || h == g;
    if (!dup) out.push_back(g);
  }
  std::sort(out.begin(), out.end(), LexLess{});
  return out;
}

void requireIndependent(const std::vector<IntVec>& gens, Index d) {
  IntMat G = gensMatrix(gens, d);
  if (rationalRank(toRat(G)) != G.rows())
    fail(ErrorKind::Internal, "simple set generators must be independent");
}

// Integer rows W and positive D with W*(u-q) = D*lambda for the unique
// rational multipliers lambda of u-q against the generator rows of G.
std::pair<IntMat, Int> multiplierRows(const IntMat& G) {
  RatMat M = toRat(IntMat(G * G.transpose()));
  Rat D = rationalDet(M);
  RatMat A = rationalInverse(M);
  IntMat W(G.rows(), G.cols());
  for (Index i = 0; i < W.rows(); ++i)
    for (Index j = 0; j < W.cols(); ++j) {
      Rat acc = 0;
      for (Index k = 0; k < G.rows(); ++k)
        acc += D * A(i, k) * Rat(G(k, j));
      W(i, j) = ratToIntExact(acc);
    }
  Int Dz = ratToIntExact(D);
  if (Dz <= 0) fail(ErrorKind::Internal, "Gram determinant must be positive");
  return {W, Dz};
}

std::vector<std::string> coordVars(Index d, const std::string& stem) {
  std::vector<std::string> vars;
  for (Index i = 0; i < d; ++i) vars.push_back(stem + std::to_string(i + 1));
  return vars;
}

// Fixes the first k coordinates of every cell to n and returns cells over
// the remaining coordinates.
CellSet substitutePrefix(const CellSet& S, const IntVec& n) {
  Index k = n.size();
  Index d = S.dim();
  if (k > d) fail(ErrorKind::DimMismatch, "parameter longer than cell dimension");
  CellSet out;
  out.vars.assign(S.vars.begin() + static_cast<long>(k), S.vars.end());
  for (const auto& c : S.cells) {
    Cell s;
    s.poly.ineqA = c.poly.ineqA.rightCols(d - k);
    s.poly.ineqB = c.poly.ineqB - c.poly.ineqA.leftCols(k) * n;
    s.poly.eqA = c.poly.eqA.rightCols(d - k);
    s.poly.eqB = c.poly.eqB - c.poly.eqA.leftCols(k) * n;
    bool alive = true;
    for (const auto& g : c.congs) {
      Int shift = g.rhs - g.coeffs.head(k).dot(n);
      IntVec tail = g.coeffs.tail(d - k);
      if (isZeroVec(tail)) {
        alive = alive && floorMod(shift, g.modulus) == 0;
      } else {
        s.congs.push_back({g.modulus, tail, floorMod(shift, g.modulus)});
      }
      if (!alive) break;
    }
    if (alive) out.cells.push_back(std::move(s));
  }
  return out;
}

std::vector<LatticePiece> decomposeCell(const Cell& c, const Caps& caps) {
  auto L = solveCongruences(c.congs, c.dim());
  if (!L) return {};
  return latticeDecomposeInCoset(c.poly, *L, caps);
}

}  // namespace

bool memberSimple(const SimpleSet& S, const IntVec& u) {
  IntMat G = gensMatrix(S.gens, S.dim());
  RatVec rhs = toRat(IntVec(u - S.base));
  auto lam = rationalSolve(toRat(IntMat(G.transpose())), rhs);
  if (!lam) return false;
  for (Index i = 0; i < lam->size(); ++i) {
    const Rat& x = (*lam)[i];
    if (x < 0 || x.get_den() != 1) return false;
  }
  return true;
}

bool memberLinear(const LinearSet& L, const IntVec& u, const Caps& caps) {
  // Multiplier polytope: lambda >= 0 with G^T lambda = u - base.
  Index k = static_cast<Index>(L.gens.size());
  IntMat G = gensMatrix(L.gens, L.dim());
  Polyhedron P;
  P.ineqA = IntMat::Identity(k, k);
  P.ineqB = IntVec::Zero(k);
  P.eqA = G.transpose();
  P.eqB = u - L.base;
  return firstIntegerPoint(P, caps).has_value();
}

bool memberSemisimple(const SemisimpleSet& S, const IntVec& u) {
  for (const auto& p : S.pieces)
    if (memberSimple(p, u)) return true;
  return false;
}

bool memberSemilinear(const SemilinearSet& M, const IntVec& u, const Caps& caps) {
  for (const auto& p : M.pieces)
    if (memberLinear(p, u, caps)) return true;
  return false;
}

CellSet simpleToCells(const SimpleSet& S, const std::vector<std::string>& vars) {
  Index d = S.dim();
  if (static_cast<Index>(vars.size()) != d)
    fail(ErrorKind::DimMismatch, "variable list does not match dimension");
  requireIndependent(S.gens, d);
  IntMat G = gensMatrix(S.gens, d);

  Cell c;
  c.poly.ineqA.resize(0, d);
  c.poly.ineqB.resize(0);
  c.poly.eqA.resize(0, d);
  c.poly.eqB.resize(0);

  // Affine span: directions orthogonal to every generator stay fixed at q.
  IntMat N = integerKernel(G);
  for (Index i = 0; i < N.rows(); ++i) {
    IntVec n = N.row(i).transpose();
    c.poly.addEq(n, n.dot(S.base));
  }

  if (G.rows() > 0) {
    // Cone sides: each unique multiplier must be nonnegative.
    auto [W, D] = multiplierRows(G);
    for (Index i = 0; i < W.rows(); ++i) {
      IntVec w = W.row(i).transpose();
      c.poly.addIneq(w, w.dot(S.base));
    }
    // Generator lattice inside the span, through the Smith form of G.
    SnfResult snf = smithNormalForm(G);
    for (Index i = 0; i < snf.rank; ++i) {
      Int s = snf.S(i, i);
      if (s == 1) continue;
      IntVec col = snf.V.col(i);
      c.congs.push_back({s, col, floorMod(col.dot(S.base), s)});
    }
  }

  CellSet cs;
  cs.vars = vars;
  cs.cells.push_back(std::move(c));
  return cs;
}

CellSet semisimpleToCells(const SemisimpleSet& S,
                          const std::vector<std::string>& vars) {
  CellSet out;
  out.vars = vars;
  for (const auto& p : S.pieces) {
    CellSet one = simpleToCells(p, vars);
    out.cells.insert(out.cells.end(), one.cells.begin(), one.cells.end());
  }
  return out;
}

FormulaPtr semilinearFormula(const SemilinearSet& M,
                             const std::vector<std::string>& vars) {
  std::vector<FormulaPtr> pieces;
  int fresh = 0;
  for (const auto& p : M.pieces) {
    if (static_cast<Index>(vars.size()) != p.dim())
      fail(ErrorKind::DimMismatch, "variable list does not match dimension");
    std::vector<std::string> mult;
    std::vector<FormulaPtr> conj;
    for (size_t g = 0; g < p.gens.size(); ++g)
      mult.push_back("m" + std::to_string(++fresh));
    for (const auto& m : mult)
      conj.push_back(mkCmp(LinTerm::var(m), CmpOp::Ge, LinTerm::lit(0)));
    for (Index i = 0; i < p.dim(); ++i) {
      LinTerm t = LinTerm::lit(p.base[i]);
      for (size_t g = 0; g < p.gens.size(); ++g)
        t += p.gens[g][i] * LinTerm::var(mult[g]);
      conj.push_back(mkCmp(LinTerm::var(vars[static_cast<size_t>(i)]),
                           CmpOp::Eq, t));
    }
    FormulaPtr body = mkAnd(std::move(conj));
    pieces.push_back(mult.empty() ? body : mkExists(mult, body));
  }
  return mkOr(std::move(pieces));
}

CellSet semilinearToCells(const SemilinearSet& M,
                          const std::vector<std::string>& vars,
                          const Caps& caps) {
  return toCells(semilinearFormula(M, vars), vars, caps);
}

SemisimpleSet cellsToSemisimple(const CellSet& C, const Caps& caps) {
  SemisimpleSet out;
  CellSet dj = disjointify(C, caps);
  for (const auto& c : dj.cells) {
    for (const auto& piece : decomposeCell(c, caps)) {
      SimpleSet s;
      s.base = piece.base;
      for (Index i = 0; i < piece.gens.rows(); ++i)
        s.gens.push_back(piece.gens.row(i).transpose());
      s.gens = cleanGens(s.gens);
      out.pieces.push_back(std::move(s));
    }
  }
  return out;
}

SemilinearSet minkowskiSum(const SemilinearSet& A, const SemilinearSet& B) {
  if (!A.pieces.empty() && !B.pieces.empty() && A.dim() != B.dim())
    fail(ErrorKind::DimMismatch, "Minkowski sum needs equal dimensions");
  SemilinearSet out;
  for (const auto& a : A.pieces)
    for (const auto& b : B.pieces) {
      LinearSet s;
      s.base = a.base + b.base;
      s.gens = a.gens;
      s.gens.insert(s.gens.end(), b.gens.begin(), b.gens.end());
      s.gens = cleanGens(s.gens);
      out.pieces.push_back(std::move(s));
    }
  return out;
}

SemilinearSet linearImage(const SemilinearSet& A, const IntMat& T) {
  SemilinearSet out;
  for (const auto& p : A.pieces) {
    if (T.cols() != p.dim())
      fail(ErrorKind::DimMismatch, "map does not match ambient dimension");
    LinearSet s;
    s.base = T * p.base;
    for (const auto& g : p.gens) s.gens.push_back(T * g);
    s.gens = cleanGens(s.gens);
    out.pieces.push_back(std::move(s));
  }
  return out;
}

SemisimpleSet atoms(const SemilinearSet& M, bool assumeMonoid, const Caps& caps) {
  Index d = M.dim();
  if (M.pieces.empty()) fail(ErrorKind::NotAMonoid, "empty set is not a monoid");

  if (!assumeMonoid) {
    // Spot check on a box: identity, closure on sums landing inside the
    // box, and no nonzero units.
    const Int R = 4;
    if (!memberSemilinear(M, IntVec::Zero(d), caps))
      fail(ErrorKind::NotAMonoid, "identity 0 is missing");
    std::vector<IntVec> members;
    IntVec lo = IntVec::Constant(d, -R), hi = IntVec::Constant(d, R);
    forEachBoxPoint(lo, hi, [&](const IntVec& u) {
      if (memberSemilinear(M, u, caps)) members.push_back(u);
      return true;
    });
    for (const auto& u : members) {
      if (!isZeroVec(u) && memberSemilinear(M, IntVec(-u), caps))
        fail(ErrorKind::NotAMonoid, "nonzero unit at " + toString(u));
      for (const auto& v : members) {
        IntVec s = u + v;
        if ((s.cwiseAbs().maxCoeff() <= R) && !memberSemilinear(M, s, caps))
          fail(ErrorKind::NotAMonoid,
               "closure fails at " + toString(u) + " + " + toString(v));
      }
    }
  }

  // H(u): u in M, u nonzero, and u is not v + r with v, r nonzero members.
  auto uVars = coordVars(d, "u");
  auto vVars = coordVars(d, "v");
  auto rVars = coordVars(d, "r");
  auto nonzero = [&](const std::vector<std::string>& names) {
    std::vector<FormulaPtr> any;
    for (const auto& n : names)
      any.push_back(mkNe(LinTerm::var(n)));
    return mkOr(std::move(any));
  };
  std::vector<FormulaPtr> sumEq;
  for (Index i = 0; i < d; ++i)
    sumEq.push_back(mkEq(LinTerm::var(uVars[static_cast<size_t>(i)]) -
                         LinTerm::var(vVars[static_cast<size_t>(i)]) -
                         LinTerm::var(rVars[static_cast<size_t>(i)])));
  std::vector<std::string> inner = vVars;
  inner.insert(inner.end(), rVars.begin(), rVars.end());
  FormulaPtr decomposable = mkExists(
      inner, mkAnd({semilinearFormula(M, vVars), semilinearFormula(M, rVars),
                    nonzero(vVars), nonzero(rVars), mkAnd(std::move(sumEq))}));
  FormulaPtr H = mkAnd({semilinearFormula(M, uVars), nonzero(uVars),
                        mkNot(decomposable)});
  return cellsToSemisimple(toCells(H, uVars, caps), caps);
}

SliceCount sliceCount(const CellSet& S, const IntVec& n, const Caps& caps) {
  CellSet slice = disjointify(substitutePrefix(S, n), caps);
  Int total = 0;
  for (const auto& c : slice.cells) {
    for (const auto& piece : decomposeCell(c, caps)) {
      if (piece.gens.rows() > 0) return {false, 0};
      total += 1;
    }
  }
  return {true, total};
}

SliceExtreme sliceExtreme(const CellSet& S, const IntVec& n,
                          const IntVec& lambda, bool maximize,
                          const Caps& caps) {
  CellSet slice = substitutePrefix(S, n);
  if (slice.dim() != lambda.size())
    fail(ErrorKind::DimMismatch, "objective does not match slice dimension");
  bool seen = false;
  Int best = 0;
  // Piece base + N gens contributes base value alone unless a generator
  // improves the objective, which makes the slice unbounded.
  for (const auto& c : slice.cells) {
    for (const auto& piece : decomposeCell(c, caps)) {
      Int v = lambda.dot(piece.base);
      for (Index i = 0; i < piece.gens.rows(); ++i) {
        Int step = lambda.dot(IntVec(piece.gens.row(i).transpose()));
        if (maximize ? step > 0 : step < 0) return {ExtremeKind::Unbounded, 0};
      }
      if (!seen || (maximize ? v > best : v < best)) best = v;
      seen = true;
    }
  }
  if (!seen) return {ExtremeKind::Empty, 0};
  return {ExtremeKind::Finite, best};
}

}  // namespace qg
