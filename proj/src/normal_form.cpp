#include "quasigrade/normal_form.hpp"

#include <cassert>

namespace qg {

namespace {

// Unimodular 2x2 row transform sending (M(r,c), M(i,c)) to (g, 0).
// Applied simultaneously to M and the accumulated U.
void gcdRows(IntMat& M, IntMat& U, Index r, Index i, Index c) {
  const Int a = M(r, c);
  const Int b = M(i, c);
  if (b == 0) return;
  if (a == 0) {
    M.row(r).swap(M.row(i));
    U.row(r).swap(U.row(i));
    return;
  }
  if (b % a == 0) {
    // Elementary elimination; keeps the pivot row fixed, which the outer
    // reduction loops rely on for termination.
    Int q = b / a;
    M.row(i) -= q * M.row(r);
    U.row(i) -= q * U.row(r);
    return;
  }
  Int s, t;
  Int g = extGcd(a, b, s, t);
  Int ag = a / g, bg = b / g;
  // [ s  t ; -bg  ag ] has determinant s*ag + t*bg = 1.
  IntMat mr = s * M.row(r) + t * M.row(i);
  IntMat mi = ag * M.row(i) - bg * M.row(r);
  M.row(r) = mr;
  M.row(i) = mi;
  IntMat ur = s * U.row(r) + t * U.row(i);
  IntMat ui = ag * U.row(i) - bg * U.row(r);
  U.row(r) = ur;
  U.row(i) = ui;
}

void gcdCols(IntMat& M, IntMat& V, Index r, Index j, Index c) {
  const Int a = M(c, r);
  const Int b = M(c, j);
  if (b == 0) return;
  if (a == 0) {
    M.col(r).swap(M.col(j));
    V.col(r).swap(V.col(j));
    return;
  }
  if (b % a == 0) {
    Int q = b / a;
    M.col(j) -= q * M.col(r);
    V.col(j) -= q * V.col(r);
    return;
  }
  Int s, t;
  Int g = extGcd(a, b, s, t);
  Int ag = a / g, bg = b / g;
  IntMat mr = s * M.col(r) + t * M.col(j);
  IntMat mj = ag * M.col(j) - bg * M.col(r);
  M.col(r) = mr;
  M.col(j) = mj;
  IntMat vr = s * V.col(r) + t * V.col(j);
  IntMat vj = ag * V.col(j) - bg * V.col(r);
  V.col(r) = vr;
  V.col(j) = vj;
}

}  // namespace

HnfResult hermiteNormalForm(const IntMat& A) {
  const Index m = A.rows(), n = A.cols();
  HnfResult res;
  res.H = A;
  res.U = IntMat::Identity(m, m);
  IntMat& H = res.H;
  IntMat& U = res.U;
  Index r = 0;
  for (Index c = 0; c < n && r < m; ++c) {
    Index piv = -1;
    for (Index i = r; i < m; ++i)
      if (H(i, c) != 0) { piv = i; break; }
    if (piv < 0) continue;
    if (piv != r) {
      H.row(piv).swap(H.row(r));
      U.row(piv).swap(U.row(r));
    }
    for (Index i = r + 1; i < m; ++i) gcdRows(H, U, r, i, c);
    if (H(r, c) < 0) {
      H.row(r) = -H.row(r);
      U.row(r) = -U.row(r);
    }
    for (Index j = 0; j < r; ++j) {
      Int q = floorDiv(H(j, c), H(r, c));
      if (q != 0) {
        H.row(j) -= q * H.row(r);
        U.row(j) -= q * U.row(r);
      }
    }
    res.pivotCols.push_back(c);
    ++r;
  }
  res.rank = r;
  return res;
}

SnfResult smithNormalForm(const IntMat& A) {
  const Index m = A.rows(), n = A.cols();
  SnfResult res;
  res.S = A;
  res.U = IntMat::Identity(m, m);
  res.V = IntMat::Identity(n, n);
  IntMat& S = res.S;
  Index t = 0;
  while (t < m && t < n) {
    // Smallest-magnitude nonzero pivot in the remaining block.
    Index pi = -1, pj = -1;
    for (Index i = t; i < m; ++i)
      for (Index j = t; j < n; ++j)
        if (S(i, j) != 0) {
          if (pi < 0 || abs(S(i, j)) < abs(S(pi, pj))) { pi = i; pj = j; }
        }
    if (pi < 0) break;
    if (pi != t) { S.row(pi).swap(S.row(t)); res.U.row(pi).swap(res.U.row(t)); }
    if (pj != t) { S.col(pj).swap(S.col(t)); res.V.col(pj).swap(res.V.col(t)); }
    bool clean = false;
    while (!clean) {
      for (Index i = t + 1; i < m; ++i) gcdRows(S, res.U, t, i, t);
      for (Index j = t + 1; j < n; ++j) gcdCols(S, res.V, t, j, t);
      clean = true;
      for (Index i = t + 1; i < m && clean; ++i)
        if (S(i, t) != 0) clean = false;
      for (Index j = t + 1; j < n && clean; ++j)
        if (S(t, j) != 0) clean = false;
    }
    // Divisibility fix-up: fold any non-multiple into the pivot's row.
    bool redo = false;
    for (Index i = t + 1; i < m && !redo; ++i)
      for (Index j = t + 1; j < n && !redo; ++j)
        if (S(i, j) % S(t, t) != 0) {
          S.row(t) += S.row(i);
          res.U.row(t) += res.U.row(i);
          redo = true;
        }
    if (redo) continue;
    if (S(t, t) < 0) {
      S.row(t) = -S.row(t);
      res.U.row(t) = -res.U.row(t);
    }
    ++t;
  }
  res.rank = t;
  return res;
}

IntMat integerKernel(const IntMat& A) {
  SnfResult snf = smithNormalForm(A);
  const Index n = A.cols();
  const Index k = n - snf.rank;
  IntMat basis(k, n);
  for (Index j = 0; j < k; ++j)
    basis.row(j) = snf.V.col(snf.rank + j).transpose();
  return basis;
}

std::optional<IntVec> solveDiophantine(const IntMat& A, const IntVec& b) {
  SnfResult snf = smithNormalForm(A);
  IntVec ub = snf.U * b;
  const Index n = A.cols(), m = A.rows();
  IntVec y = IntVec::Zero(n);
  for (Index i = 0; i < m; ++i) {
    if (i < snf.rank) {
      if (ub(i) % snf.S(i, i) != 0) return std::nullopt;
      y(i) = ub(i) / snf.S(i, i);
    } else if (ub(i) != 0) {
      return std::nullopt;
    }
  }
  return IntVec(snf.V * y);
}

namespace {

// In-place forward elimination; returns pivot (row, col) pairs.
std::vector<std::pair<Index, Index>> gaussForward(RatMat& M) {
  std::vector<std::pair<Index, Index>> pivots;
  Index r = 0;
  for (Index c = 0; c < M.cols() && r < M.rows(); ++c) {
    Index piv = -1;
    for (Index i = r; i < M.rows(); ++i)
      if (M(i, c) != 0) { piv = i; break; }
    if (piv < 0) continue;
    if (piv != r) M.row(piv).swap(M.row(r));
    for (Index i = r + 1; i < M.rows(); ++i) {
      if (M(i, c) == 0) continue;
      Rat f = M(i, c) / M(r, c);
      M.row(i) -= f * M.row(r);
    }
    pivots.emplace_back(r, c);
    ++r;
  }
  return pivots;
}

}  // namespace

Index rationalRank(const RatMat& A) {
  RatMat M = A;
  return static_cast<Index>(gaussForward(M).size());
}

Rat rationalDet(const RatMat& A) {
  assert(A.rows() == A.cols());
  RatMat M = A;
  Rat det = 1;
  Index n = M.rows();
  for (Index c = 0; c < n; ++c) {
    Index piv = -1;
    for (Index i = c; i < n; ++i)
      if (M(i, c) != 0) { piv = i; break; }
    if (piv < 0) return Rat(0);
    if (piv != c) {
      M.row(piv).swap(M.row(c));
      det = -det;
    }
    det *= M(c, c);
    for (Index i = c + 1; i < n; ++i) {
      if (M(i, c) == 0) continue;
      Rat f = M(i, c) / M(c, c);
      M.row(i) -= f * M.row(c);
    }
  }
  return det;
}

IntMat rationalKernel(const IntMat& A) {
  RatMat M = toRat(A);
  auto pivots = gaussForward(M);
  const Index n = A.cols();
  std::vector<bool> isPivot(n, false);
  for (auto& [r, c] : pivots) isPivot[c] = true;
  std::vector<Index> freeCols;
  for (Index c = 0; c < n; ++c)
    if (!isPivot[c]) freeCols.push_back(c);
  IntMat basis(static_cast<Index>(freeCols.size()), n);
  for (Index k = 0; k < basis.rows(); ++k) {
    RatVec x = RatVec::Zero(n);
    x(freeCols[k]) = 1;
    // Back-substitute through the echelon rows.
    for (Index pi = static_cast<Index>(pivots.size()) - 1; pi >= 0; --pi) {
      auto [r, c] = pivots[pi];
      Rat acc = 0;
      for (Index j = c + 1; j < n; ++j) acc += M(r, j) * x(j);
      x(c) = -acc / M(r, c);
    }
    basis.row(k) = clearDenominators(x).transpose();
  }
  return basis;
}

std::optional<RatVec> rationalSolve(const RatMat& A, const RatVec& b) {
  const Index n = A.cols();
  RatMat M(A.rows(), n + 1);
  M.leftCols(n) = A;
  M.col(n) = b;
  auto pivots = gaussForward(M);
  // A pivot in the augmented column marks inconsistency.
  if (!pivots.empty() && pivots.back().second == n) return std::nullopt;
  RatVec x = RatVec::Zero(n);
  for (Index pi = static_cast<Index>(pivots.size()) - 1; pi >= 0; --pi) {
    auto [r, c] = pivots[pi];
    Rat acc = M(r, n);
    for (Index j = c + 1; j < n; ++j) acc -= M(r, j) * x(j);
    x(c) = acc / M(r, c);
  }
  return x;
}

RatMat rationalInverse(const RatMat& A) {
  assert(A.rows() == A.cols());
  const Index n = A.rows();
  RatMat M(n, 2 * n);
  M.leftCols(n) = A;
  M.rightCols(n) = RatMat::Identity(n, n);
  for (Index c = 0; c < n; ++c) {
    Index piv = -1;
    for (Index i = c; i < n; ++i)
      if (M(i, c) != 0) { piv = i; break; }
    if (piv < 0) fail(ErrorKind::Internal, "rationalInverse: singular matrix");
    if (piv != c) M.row(piv).swap(M.row(c));
    M.row(c) /= M(c, c);
    for (Index i = 0; i < n; ++i) {
      if (i == c || M(i, c) == 0) continue;
      M.row(i) -= M(i, c) * M.row(c);
    }
  }
  return M.rightCols(n);
}

}  // namespace qg
