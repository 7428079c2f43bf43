#include "quasigrade/decompose.hpp"

#include "quasigrade/normal_form.hpp"

namespace qg {
namespace {

struct DecompState {
  const Caps& caps;
  bool earlyExit;
  long emitted = 0;
  std::vector<LatticePiece> out;

  // Returns true when the caller should stop searching.
  bool emit(LatticePiece piece) {
    if (++emitted > caps.enumPoints)
      fail(ErrorKind::ResourceLimit, "decomposition piece cap");
    out.push_back(std::move(piece));
    return earlyExit;
  }
};

// Emits the height-1 slices of one half-open simplicial cone piece of the
// homogenized cone. pe and gens are in homogeneous coordinates (last entry
// is the height); every height is nonnegative.
bool emitSlices(const IntVec& pe, const IntMat& gensExt, DecompState& st) {
  Index d = pe.size() - 1;
  std::vector<Index> pos, zero;
  for (Index i = 0; i < gensExt.rows(); ++i) {
    if (gensExt(i, d) > 0)
      pos.push_back(i);
    else
      zero.push_back(i);
  }
  IntMat freeGens(static_cast<Index>(zero.size()), d);
  for (size_t i = 0; i < zero.size(); ++i)
    freeGens.row(static_cast<Index>(i)) = gensExt.row(zero[i]).head(d);

  IntVec acc = pe;
  auto walk = [&](auto&& self, size_t i) -> bool {
    if (i == pos.size()) {
      if (acc[d] != 1) return false;
      LatticePiece piece;
      piece.base = acc.head(d);
      piece.gens = freeGens;
      return st.emit(std::move(piece));
    }
    Index g = pos[i];
    const Int h = gensExt(g, d);
    Int steps = floorDiv(Int(1) - acc[d], h);
    if (steps < 0) return false;
    for (Int lam = 0; lam <= steps; lam += 1) {
      if (self(self, i + 1)) return true;
      acc += gensExt.row(g).transpose();
    }
    Int taken = steps + 1;
    acc -= taken * gensExt.row(g).transpose();
    return false;
  };
  return walk(walk, 0);
}

bool decomposeRec(const Polyhedron& P, DecompState& st, int splitDepth) {
  if (!rationallyFeasible(P)) return false;
  Polyhedron Q = promoteImpliedEqualities(P);

  if (Q.eqA.rows() > 0) {
    auto x0 = solveDiophantine(Q.eqA, Q.eqB);
    if (!x0) return false;
    IntMat K = integerKernel(Q.eqA);
    // Saturated kernel: integer solutions are exactly x0 + K^T z.
    Polyhedron sub = Q.pullback(*x0, K);
    size_t mark = st.out.size();
    bool stop = decomposeRec(sub, st, splitDepth);
    for (size_t i = mark; i < st.out.size(); ++i) {
      LatticePiece& piece = st.out[i];
      piece.base = *x0 + K.transpose() * piece.base;
      piece.gens = (piece.gens * K).eval();
    }
    return stop;
  }

  IntMat L = linealityBasis(Q);
  if (L.rows() > 0) {
    if (splitDepth >= st.caps.linealitySplits)
      fail(ErrorKind::UnboundedCellWithLine, "lineality split cap");
    IntVec v = L.row(0).transpose();
    Polyhedron Pplus = Q;
    Pplus.addIneq(v, 0);
    Polyhedron Pminus = Q;
    Pminus.addIneq((-v).eval(), 1);
    if (decomposeRec(Pplus, st, splitDepth + 1)) return true;
    return decomposeRec(Pminus, st, splitDepth + 1);
  }

  // Pointed and full-dimensional: homogenize to {(u,h) : A u >= b h, h >= 0}.
  Index d = Q.dim();
  Polyhedron C(d + 1);
  C.ineqA.setZero(Q.ineqA.rows() + 1, d + 1);
  C.ineqA.topLeftCorner(Q.ineqA.rows(), d) = Q.ineqA;
  C.ineqA.col(d).head(Q.ineqA.rows()) = -Q.ineqB;
  C.ineqA(Q.ineqA.rows(), d) = 1;
  C.ineqB = IntVec::Zero(Q.ineqA.rows() + 1);

  IntMat rays = extremeRaysFromH(C);
  if (rays.rows() == 0) return false;
  IntMat B = saturatedSpanBasis(rays);
  IntMat Y(rays.rows(), B.rows());
  {
    RatMat Bt = toRat(B).transpose();
    for (Index i = 0; i < rays.rows(); ++i) {
      RatVec rhs(rays.cols());
      for (Index c = 0; c < rays.cols(); ++c) rhs[c] = Rat(rays(i, c));
      auto sol = rationalSolve(Bt, rhs);
      if (!sol) fail(ErrorKind::Internal, "ray outside span");
      for (Index c = 0; c < B.rows(); ++c) Y(i, c) = ratToIntExact((*sol)[c]);
    }
  }
  IntVec w0 = IntVec::Zero(Y.cols());
  for (Index i = 0; i < Y.rows(); ++i) w0 += Y.row(i).transpose();

  for (const auto& pieceIdx : triangulateRays(rays)) {
    IntMat G(static_cast<Index>(pieceIdx.size()), Y.cols());
    for (size_t i = 0; i < pieceIdx.size(); ++i)
      G.row(static_cast<Index>(i)) = Y.row(pieceIdx[i]);
    std::vector<bool> closed = halfOpenFlags(G, w0);
    IntMat gensExt = G * B;
    for (const IntVec& p : parallelepipedPoints(G, closed, st.caps.fpPoints)) {
      IntVec pe = B.transpose() * p;
      if (emitSlices(pe, gensExt, st)) return true;
    }
  }
  return false;
}

}  // namespace

std::vector<LatticePiece> latticeDecompose(const Polyhedron& P, const Caps& caps,
                                           bool earlyExit) {
  DecompState st{caps, earlyExit};
  decomposeRec(P, st, 0);
  return std::move(st.out);
}

std::vector<LatticePiece> latticeDecomposeInCoset(const Polyhedron& P,
                                                  const Coset& L,
                                                  const Caps& caps,
                                                  bool earlyExit) {
  if (L.dim() != P.dim()) fail(ErrorKind::DimMismatch, "coset dimension");
  Polyhedron sub = P.pullback(L.shift, L.basis);
  std::vector<LatticePiece> pieces = latticeDecompose(sub, caps, earlyExit);
  for (LatticePiece& piece : pieces) {
    piece.base = L.shift + L.basis.transpose() * piece.base;
    piece.gens = (piece.gens * L.basis).eval();
  }
  return pieces;
}

std::optional<IntVec> firstIntegerPoint(const Polyhedron& P, const Caps& caps) {
  auto pieces = latticeDecompose(P, caps, true);
  if (pieces.empty()) return std::nullopt;
  return pieces.front().base;
}

std::optional<IntVec> integerPointInCoset(const Polyhedron& P, const Coset& L,
                                          const Caps& caps) {
  auto pieces = latticeDecomposeInCoset(P, L, caps, true);
  if (pieces.empty()) return std::nullopt;
  return pieces.front().base;
}

bool pieceContains(const LatticePiece& piece, const IntVec& u) {
  IntVec diff = u - piece.base;
  if (piece.gens.rows() == 0) return isZeroVec(diff);
  auto sol = rationalSolve(toRat(piece.gens).transpose(), toRat(diff));
  if (!sol) return false;
  for (Index i = 0; i < sol->size(); ++i) {
    const Rat& v = (*sol)[i];
    if (v < 0) return false;
    if (v.get_den() != 1) return false;
  }
  return true;
}

}  // namespace qg
