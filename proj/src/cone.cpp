#include "quasigrade/cone.hpp"

#include <algorithm>
#include <functional>

namespace qg {
namespace {

// Calls fn on every size-k index subset of {0,...,n-1}, ascending.
void forEachSubset(Index n, Index k,
                   const std::function<void(const std::vector<Index>&)>& fn) {
  if (k < 0 || k > n) return;
  std::vector<Index> idx(static_cast<size_t>(k));
  for (Index i = 0; i < k; ++i) idx[static_cast<size_t>(i)] = i;
  while (true) {
    fn(idx);
    Index i = k - 1;
    while (i >= 0 && idx[static_cast<size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++idx[static_cast<size_t>(i)];
    for (Index j = i + 1; j < k; ++j)
      idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
  }
}

IntMat selectRows(const IntMat& M, const std::vector<Index>& rows) {
  IntMat out(static_cast<Index>(rows.size()), M.cols());
  for (size_t i = 0; i < rows.size(); ++i)
    out.row(static_cast<Index>(i)) = M.row(rows[i]);
  return out;
}

void sortUniqueRows(std::vector<IntVec>& rows) {
  std::sort(rows.begin(), rows.end(), LexLess{});
  rows.erase(std::unique(rows.begin(), rows.end(),
                         [](const IntVec& x, const IntVec& y) { return x == y; }),
             rows.end());
}

IntMat stackRows(const std::vector<IntVec>& rows, Index dim) {
  IntMat out(static_cast<Index>(rows.size()), dim);
  for (size_t i = 0; i < rows.size(); ++i)
    out.row(static_cast<Index>(i)) = rows[i].transpose();
  return out;
}

// Integer coordinates of the rows of M in the saturated span basis B;
// exact because every integer vector of the span lies in the lattice B spans.
IntMat spanCoordinates(const IntMat& M, const IntMat& B) {
  IntMat out(M.rows(), B.rows());
  RatMat Bt = toRat(B).transpose();
  for (Index i = 0; i < M.rows(); ++i) {
    RatVec rhs(M.cols());
    for (Index c = 0; c < M.cols(); ++c) rhs[c] = Rat(M(i, c));
    auto sol = rationalSolve(Bt, rhs);
    if (!sol) fail(ErrorKind::Internal, "row outside span basis");
    for (Index c = 0; c < B.rows(); ++c) out(i, c) = ratToIntExact((*sol)[c]);
  }
  return out;
}

}  // namespace

IntMat extremeRaysFromH(const Polyhedron& P) {
  if (linealityBasis(P).rows() > 0)
    fail(ErrorKind::NonPointedCone, "cone has a line");
  Index d = P.dim();
  Index rankE = rationalRank(toRat(P.eqA));
  std::vector<IntVec> rays;
  Index s = d - 1 - rankE;
  if (s < 0) return stackRows(rays, d);

  forEachSubset(P.ineqA.rows(), s, [&](const std::vector<Index>& sub) {
    IntMat stacked(P.eqA.rows() + s, d);
    stacked.topRows(P.eqA.rows()) = P.eqA;
    stacked.bottomRows(s) = selectRows(P.ineqA, sub);
    IntMat ker = rationalKernel(stacked);
    if (ker.rows() != 1) return;
    IntVec v = ker.row(0).transpose();
    IntVec dots = P.ineqA * v;
    bool allGe = true, allLe = true;
    for (Index i = 0; i < dots.size(); ++i) {
      if (dots[i] < 0) allGe = false;
      if (dots[i] > 0) allLe = false;
    }
    if (allGe)
      rays.push_back(v);
    else if (allLe)
      rays.push_back((-v).eval());
  });
  sortUniqueRows(rays);
  return stackRows(rays, d);
}

IntMat saturatedSpanBasis(const IntMat& M) {
  return integerKernel(integerKernel(M));
}

std::vector<Facet> facetsFromRays(const IntMat& rays) {
  Index d = rays.cols();
  Index m = rays.rows();
  if (rationalRank(toRat(rays)) != d)
    fail(ErrorKind::Internal, "facet enumeration needs a full-dimensional cone");
  std::vector<Facet> facets;
  std::vector<IntVec> seen;
  forEachSubset(m, d - 1, [&](const std::vector<Index>& sub) {
    IntMat sel = selectRows(rays, sub);
    IntMat ker = rationalKernel(sel);
    if (ker.rows() != 1) return;
    IntVec h = ker.row(0).transpose();
    IntVec dots = rays * h;
    bool allGe = true, allLe = true;
    for (Index i = 0; i < m; ++i) {
      if (dots[i] < 0) allGe = false;
      if (dots[i] > 0) allLe = false;
    }
    if (!allGe && !allLe) return;
    if (allLe) {
      h = -h;
      dots = -dots;
    }
    for (const IntVec& prev : seen)
      if (prev == h) return;
    seen.push_back(h);
    Facet f;
    f.normal = h;
    for (Index i = 0; i < m; ++i)
      if (dots[i] == 0) f.active.push_back(i);
    facets.push_back(std::move(f));
  });
  return facets;
}

namespace {

// Pulling triangulation: the first-listed ray is the apex of every piece;
// facets not containing it are triangulated recursively in their own span.
std::vector<std::vector<Index>> pullRec(const std::vector<Index>& idx,
                                        const IntMat& Y) {
  if (rationalRank(toRat(Y)) == Y.rows()) return {idx};
  std::vector<Facet> facets = facetsFromRays(Y);
  std::vector<std::vector<Index>> out;
  for (const Facet& f : facets) {
    if (f.normal.dot(Y.row(0).transpose()) <= 0) continue;
    IntMat Yf = selectRows(Y, f.active);
    IntMat Bf = saturatedSpanBasis(Yf);
    IntMat Yf2 = spanCoordinates(Yf, Bf);
    std::vector<Index> subIdx;
    for (Index a : f.active) subIdx.push_back(idx[static_cast<size_t>(a)]);
    for (auto& piece : pullRec(subIdx, Yf2)) {
      piece.push_back(idx[0]);
      std::sort(piece.begin(), piece.end());
      out.push_back(std::move(piece));
    }
  }
  return out;
}

}  // namespace

std::vector<std::vector<Index>> triangulateRays(const IntMat& rays) {
  if (rays.rows() == 0) return {};
  IntMat B = saturatedSpanBasis(rays);
  IntMat Y = spanCoordinates(rays, B);
  std::vector<Index> idx(static_cast<size_t>(rays.rows()));
  for (Index i = 0; i < rays.rows(); ++i) idx[static_cast<size_t>(i)] = i;
  return pullRec(idx, Y);
}

std::vector<Cone> triangulateCone(const Cone& C) {
  // Primitive, deduplicated generators; geometry is scale-invariant.
  std::vector<IntVec> gens;
  for (Index i = 0; i < C.rays.rows(); ++i) {
    IntVec r = C.rays.row(i).transpose();
    if (isZeroVec(r)) continue;
    gens.push_back(primitivePart(r));
  }
  sortUniqueRows(gens);
  IntMat R = stackRows(gens, C.dim());
  if (R.rows() == 0) return {};

  // Pointedness: some h with h . r >= 1 for every generator.
  {
    Polyhedron H(C.dim());
    for (Index i = 0; i < R.rows(); ++i) H.addIneq(R.row(i).transpose(), 1);
    if (!rationallyFeasible(H)) fail(ErrorKind::NonPointedCone, "cone has a line");
  }

  std::vector<Cone> out;
  for (const auto& piece : triangulateRays(R)) {
    Cone S;
    S.rays = selectRows(R, piece);
    out.push_back(std::move(S));
  }
  return out;
}

std::vector<bool> halfOpenFlags(const IntMat& G, const IntVec& w0) {
  Index k = G.rows();
  if (G.cols() != k) fail(ErrorKind::Internal, "half-open flags need square G");
  RatMat Ginv = rationalInverse(toRat(G));
  std::vector<bool> closed(static_cast<size_t>(k), true);
  for (Index j = 0; j < k; ++j) {
    RatVec col(k + 1);
    // Sign sequence of the facet functional against w0 + sum eps^i e_i.
    RatVec hj = Ginv.col(j);
    Rat onW0(0);
    for (Index i = 0; i < k; ++i) onW0 += hj[i] * Rat(w0[i]);
    col[0] = onW0;
    for (Index i = 0; i < k; ++i) col[i + 1] = hj[i];
    bool decided = false;
    for (Index i = 0; i <= k && !decided; ++i) {
      if (col[i] != 0) {
        closed[static_cast<size_t>(j)] = col[i] > 0;
        decided = true;
      }
    }
    if (!decided) fail(ErrorKind::Internal, "zero facet functional");
  }
  return closed;
}

std::vector<IntVec> parallelepipedPoints(const IntMat& G,
                                         const std::vector<bool>& closed,
                                         long cap) {
  Index k = G.rows();
  std::vector<IntVec> out;
  if (k == 0) {
    out.push_back(IntVec(0));
    return out;
  }
  SnfResult snf = smithNormalForm(G);
  Int det(1);
  for (Index i = 0; i < k; ++i) {
    if (snf.S(i, i) == 0)
      fail(ErrorKind::Internal, "singular parallelepiped generators");
    det *= snf.S(i, i);
  }
  if (det > cap) fail(ErrorKind::ResourceLimit, "parallelepiped index too large");

  IntMat Vinv(k, k);
  {
    RatMat vi = rationalInverse(toRat(snf.V));
    for (Index i = 0; i < k; ++i)
      for (Index j = 0; j < k; ++j) Vinv(i, j) = ratToIntExact(vi(i, j));
  }
  RatMat Ginv = rationalInverse(toRat(G));

  // Residue representatives y of Z^k modulo the row lattice of G, taken in
  // Smith coordinates, then shifted into the half-open box.
  IntVec y = IntVec::Zero(k);
  while (true) {
    IntVec x = (y.transpose() * Vinv).transpose();
    RatVec t = (toRat(x).transpose() * Ginv).transpose();
    RatVec ts(k);
    for (Index i = 0; i < k; ++i) {
      if (closed[static_cast<size_t>(i)])
        ts[i] = t[i] - Rat(ratFloor(t[i]));
      else
        ts[i] = t[i] - Rat(ratCeil(t[i])) + 1;
    }
    RatVec pr = (ts.transpose() * toRat(G)).transpose();
    IntVec p(k);
    for (Index i = 0; i < k; ++i) p[i] = ratToIntExact(pr[i]);
    out.push_back(p);

    Index pos = k - 1;
    while (pos >= 0) {
      y[pos] += 1;
      if (y[pos] < snf.S(pos, pos)) break;
      y[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return out;
}

}  // namespace qg
