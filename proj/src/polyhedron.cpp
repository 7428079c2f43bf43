#include "quasigrade/polyhedron.hpp"

#include <algorithm>
#include <map>

#include "quasigrade/errors.hpp"

namespace qg {
namespace {

// One constraint row in unpacked form, for normalization and dedup.
struct Row {
  IntVec a;
  Int b;
};

bool rowLess(const Row& x, const Row& y) {
  int c = lexCompare(x.a, y.a);
  if (c != 0) return c < 0;
  return x.b < y.b;
}

bool rowEq(const Row& x, const Row& y) { return x.a == y.a && x.b == y.b; }

// Divides by the gcd of all entries; trivial rows collapse to a canonical
// form (all-zero coefficients with b in {0,1}).
void normalizeRow(Row& r, bool isEq) {
  if (isZeroVec(r.a)) {
    if (isEq) {
      r.b = (r.b == 0) ? 0 : 1;
    } else {
      r.b = (r.b <= 0) ? 0 : 1;
    }
    return;
  }
  Int g = content(r.a);
  g = intGcd(g, r.b);
  if (g > 1) {
    for (Index i = 0; i < r.a.size(); ++i) r.a[i] /= g;
    r.b /= g;
  }
  if (isEq) {
    for (Index i = 0; i < r.a.size(); ++i) {
      if (r.a[i] != 0) {
        if (r.a[i] < 0) {
          r.a = -r.a;
          r.b = -r.b;
        }
        break;
      }
    }
  }
}

std::vector<Row> toRows(const IntMat& A, const IntVec& b) {
  std::vector<Row> rows;
  rows.reserve(A.rows());
  for (Index i = 0; i < A.rows(); ++i)
    rows.push_back({A.row(i).transpose(), b[i]});
  return rows;
}

void fromRows(const std::vector<Row>& rows, Index dim, IntMat& A, IntVec& b) {
  A.resize(static_cast<Index>(rows.size()), dim);
  b.resize(static_cast<Index>(rows.size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    A.row(static_cast<Index>(i)) = rows[i].a.transpose();
    b[static_cast<Index>(i)] = rows[i].b;
  }
}

// Normalizes, drops trivially-true rows, sorts, dedups. Infeasible constant
// rows survive as the canonical (0,...,0) >= 1 or (0,...,0) = 1.
std::vector<Row> cleanRows(std::vector<Row> rows, bool isEq) {
  for (Row& r : rows) normalizeRow(r, isEq);
  std::vector<Row> kept;
  for (Row& r : rows) {
    if (isZeroVec(r.a) && r.b == 0) continue;
    kept.push_back(std::move(r));
  }
  std::sort(kept.begin(), kept.end(), rowLess);
  kept.erase(std::unique(kept.begin(), kept.end(), rowEq), kept.end());
  return kept;
}

Polyhedron rebuild(std::vector<Row> ineqs, std::vector<Row> eqs, Index dim) {
  Polyhedron Q(dim);
  auto ic = cleanRows(std::move(ineqs), false);
  auto ec = cleanRows(std::move(eqs), true);
  fromRows(ic, dim, Q.ineqA, Q.ineqB);
  fromRows(ec, dim, Q.eqA, Q.eqB);
  return Q;
}

}  // namespace

void Polyhedron::addIneq(const IntVec& a, const Int& b) {
  if (a.size() != dim()) fail(ErrorKind::DimMismatch, "inequality arity");
  ineqA.conservativeResize(ineqA.rows() + 1, Eigen::NoChange);
  ineqA.row(ineqA.rows() - 1) = a.transpose();
  ineqB.conservativeResize(ineqB.size() + 1);
  ineqB[ineqB.size() - 1] = b;
}

void Polyhedron::addEq(const IntVec& a, const Int& b) {
  if (a.size() != dim()) fail(ErrorKind::DimMismatch, "equality arity");
  eqA.conservativeResize(eqA.rows() + 1, Eigen::NoChange);
  eqA.row(eqA.rows() - 1) = a.transpose();
  eqB.conservativeResize(eqB.size() + 1);
  eqB[eqB.size() - 1] = b;
}

bool Polyhedron::contains(const RatVec& u) const {
  if (u.size() != dim()) fail(ErrorKind::DimMismatch, "point arity");
  RatMat iA = toRat(ineqA);
  RatMat eA = toRat(eqA);
  for (Index i = 0; i < ineqA.rows(); ++i) {
    Rat lhs = iA.row(i).dot(u.transpose());
    if (lhs < Rat(ineqB[i])) return false;
  }
  for (Index i = 0; i < eqA.rows(); ++i) {
    Rat lhs = eA.row(i).dot(u.transpose());
    if (lhs != Rat(eqB[i])) return false;
  }
  return true;
}

bool Polyhedron::contains(const IntVec& u) const {
  if (u.size() != dim()) fail(ErrorKind::DimMismatch, "point arity");
  for (Index i = 0; i < ineqA.rows(); ++i) {
    if (ineqA.row(i).dot(u.transpose()) < ineqB[i]) return false;
  }
  for (Index i = 0; i < eqA.rows(); ++i) {
    if (eqA.row(i).dot(u.transpose()) != eqB[i]) return false;
  }
  return true;
}

Polyhedron Polyhedron::recessionCone() const {
  Polyhedron Q = *this;
  Q.ineqB.setZero();
  Q.eqB.setZero();
  return Q;
}

Polyhedron Polyhedron::intersect(const Polyhedron& other) const {
  if (other.dim() != dim()) fail(ErrorKind::DimMismatch, "intersect arity");
  std::vector<Row> ineqs = toRows(ineqA, ineqB);
  std::vector<Row> eqs = toRows(eqA, eqB);
  for (const Row& r : toRows(other.ineqA, other.ineqB)) ineqs.push_back(r);
  for (const Row& r : toRows(other.eqA, other.eqB)) eqs.push_back(r);
  return rebuild(std::move(ineqs), std::move(eqs), dim());
}

Polyhedron Polyhedron::pullback(const IntVec& x0, const IntMat& basis) const {
  if (x0.size() != dim() || basis.cols() != dim())
    fail(ErrorKind::DimMismatch, "pullback arity");
  Polyhedron Q(basis.rows());
  Q.ineqA = ineqA * basis.transpose();
  Q.ineqB = ineqB - ineqA * x0;
  Q.eqA = eqA * basis.transpose();
  Q.eqB = eqB - eqA * x0;
  return rebuild(toRows(Q.ineqA, Q.ineqB), toRows(Q.eqA, Q.eqB), basis.rows());
}

Polyhedron Polyhedron::fixVariable(Index j, const Int& value) const {
  Index d = dim();
  Polyhedron Q(d - 1);
  auto dropCol = [&](const IntMat& A, const IntVec& b, IntMat& A2, IntVec& b2) {
    A2.resize(A.rows(), d - 1);
    b2.resize(b.size());
    for (Index i = 0; i < A.rows(); ++i) {
      Index k = 0;
      for (Index c = 0; c < d; ++c) {
        if (c == j) continue;
        A2(i, k++) = A(i, c);
      }
      b2[i] = b[i] - A(i, j) * value;
    }
  };
  dropCol(ineqA, ineqB, Q.ineqA, Q.ineqB);
  dropCol(eqA, eqB, Q.eqA, Q.eqB);
  return Q;
}

Polyhedron eliminateVariable(const Polyhedron& P, Index j) {
  Index d = P.dim();
  if (j < 0 || j >= d) fail(ErrorKind::DimMismatch, "eliminate index");
  std::vector<Row> ineqs = toRows(P.ineqA, P.ineqB);
  std::vector<Row> eqs = toRows(P.eqA, P.eqB);

  auto drop = [&](const IntVec& a) {
    IntVec r(d - 1);
    Index k = 0;
    for (Index c = 0; c < d; ++c)
      if (c != j) r[k++] = a[c];
    return r;
  };

  std::vector<Row> outIneq, outEq;

  // Prefer an equality pivot: substitute the variable out of every row.
  Index pivot = -1;
  for (size_t i = 0; i < eqs.size(); ++i) {
    if (eqs[i].a[j] == 0) continue;
    if (pivot < 0 || abs(eqs[i].a[j]) < abs(eqs[static_cast<size_t>(pivot)].a[j]))
      pivot = static_cast<Index>(i);
  }
  if (pivot >= 0) {
    const Row& p = eqs[static_cast<size_t>(pivot)];
    Int s = p.a[j];
    Int sa = abs(s);
    Int sg = (s > 0) ? Int(1) : Int(-1);
    auto reduce = [&](const Row& r) {
      // |s|*r - sign(s)*r.a[j]*p zeroes the pivot column; the inequality
      // direction is preserved because the row multiplier |s| is positive.
      Int f = sg * r.a[j];
      Row out;
      out.a = sa * r.a - f * p.a;
      out.b = sa * r.b - f * p.b;
      out.a = drop(out.a);
      return out;
    };
    for (const Row& r : ineqs) outIneq.push_back(reduce(r));
    for (size_t i = 0; i < eqs.size(); ++i) {
      if (static_cast<Index>(i) == pivot) continue;
      outEq.push_back(reduce(eqs[i]));
    }
    return rebuild(std::move(outIneq), std::move(outEq), d - 1);
  }

  // No equality mentions the variable: classic pairing of lower and upper
  // inequality bounds.
  for (const Row& r : eqs) outEq.push_back({drop(r.a), r.b});
  std::vector<size_t> pos, neg;
  for (size_t i = 0; i < ineqs.size(); ++i) {
    if (ineqs[i].a[j] > 0)
      pos.push_back(i);
    else if (ineqs[i].a[j] < 0)
      neg.push_back(i);
    else
      outIneq.push_back({drop(ineqs[i].a), ineqs[i].b});
  }
  for (size_t ip : pos) {
    for (size_t in : neg) {
      const Row& lo = ineqs[ip];
      const Row& hi = ineqs[in];
      Int mLo = -hi.a[j];
      Int mHi = lo.a[j];
      IntVec a = mLo * lo.a + mHi * hi.a;
      Int b = mLo * lo.b + mHi * hi.b;
      outIneq.push_back({drop(a), b});
    }
  }
  return rebuild(std::move(outIneq), std::move(outEq), d - 1);
}

Polyhedron projectOnto(const Polyhedron& P, const std::vector<Index>& keep) {
  std::vector<bool> keepMask(static_cast<size_t>(P.dim()), false);
  for (Index k : keep) keepMask[static_cast<size_t>(k)] = true;
  Polyhedron Q = P;
  for (Index j = P.dim() - 1; j >= 0; --j) {
    if (!keepMask[static_cast<size_t>(j)]) Q = eliminateVariable(Q, j);
  }
  return Q;
}

namespace {

// Eliminates the trailing variable repeatedly; chain[k] constrains the first
// k variables, chain[dim] is the input.
std::vector<Polyhedron> eliminationChain(const Polyhedron& P) {
  std::vector<Polyhedron> chain(static_cast<size_t>(P.dim()) + 1,
                                Polyhedron(0));
  chain[static_cast<size_t>(P.dim())] = P;
  for (Index k = P.dim(); k > 0; --k)
    chain[static_cast<size_t>(k - 1)] =
        eliminateVariable(chain[static_cast<size_t>(k)], k - 1);
  return chain;
}

bool constantRowsHold(const Polyhedron& zeroDim) {
  for (Index i = 0; i < zeroDim.ineqB.size(); ++i)
    if (zeroDim.ineqB[i] > 0) return false;
  for (Index i = 0; i < zeroDim.eqB.size(); ++i)
    if (zeroDim.eqB[i] != 0) return false;
  return true;
}

}  // namespace

bool rationallyFeasible(const Polyhedron& P) {
  return rationalPoint(P).has_value();
}

std::optional<RatVec> rationalPoint(const Polyhedron& P) {
  Index d = P.dim();

  // Fold equalities into a rational parametrization u = x0 + N^T y.
  RatVec x0 = RatVec::Zero(d);
  IntMat N = IntMat::Identity(d, d);
  if (P.eqA.rows() > 0) {
    RatVec rhs(P.eqB.size());
    for (Index i = 0; i < P.eqB.size(); ++i) rhs[i] = Rat(P.eqB[i]);
    auto sol = rationalSolve(toRat(P.eqA), rhs);
    if (!sol) return std::nullopt;
    x0 = *sol;
    N = rationalKernel(P.eqA);
  }

  // Inequalities in y, cleared to integer rows.
  Polyhedron Q(N.rows());
  {
    std::vector<Row> rows;
    RatMat AN = toRat(P.ineqA) * toRat(N).transpose();
    RatVec r0 = toRat(P.ineqA) * x0;
    for (Index i = 0; i < P.ineqA.rows(); ++i) {
      RatVec row(N.rows() + 1);
      for (Index c = 0; c < N.rows(); ++c) row[c] = AN(i, c);
      row[N.rows()] = Rat(P.ineqB[i]) - r0[i];
      IntVec cleared = clearDenominators(row);
      Row out;
      out.a = cleared.head(N.rows());
      out.b = cleared[N.rows()];
      rows.push_back(out);
    }
    fromRows(cleanRows(std::move(rows), false), N.rows(), Q.ineqA, Q.ineqB);
  }

  auto chain = eliminationChain(Q);
  if (!constantRowsHold(chain[0])) return std::nullopt;

  RatVec y = RatVec::Zero(N.rows());
  for (Index k = 0; k < N.rows(); ++k) {
    const Polyhedron& S = chain[static_cast<size_t>(k + 1)];
    bool haveLo = false, haveHi = false;
    Rat lo, hi;
    for (Index i = 0; i < S.ineqA.rows(); ++i) {
      const Int& c = S.ineqA(i, k);
      if (c == 0) continue;
      Rat rest(S.ineqB[i]);
      for (Index jj = 0; jj < k; ++jj) rest -= Rat(S.ineqA(i, jj)) * y[jj];
      Rat bound = rest / Rat(c);
      if (c > 0) {
        if (!haveLo || bound > lo) lo = bound, haveLo = true;
      } else {
        if (!haveHi || bound < hi) hi = bound, haveHi = true;
      }
    }
    if (haveLo)
      y[k] = lo;
    else if (haveHi)
      y[k] = hi;
    else
      y[k] = Rat(0);
  }
  RatVec u = x0 + toRat(N).transpose() * y;
  return u;
}

OptResult rationalOptimum(const Polyhedron& P, const IntVec& c, bool maximize) {
  if (c.size() != P.dim()) fail(ErrorKind::DimMismatch, "objective arity");
  OptResult res;
  if (!rationallyFeasible(P)) {
    res.kind = OptResult::Infeasible;
    return res;
  }
  // Append t with t = <c,u>, then project onto t.
  Index d = P.dim();
  Polyhedron Q(d + 1);
  Q.ineqA.setZero(P.ineqA.rows(), d + 1);
  Q.ineqA.leftCols(d) = P.ineqA;
  Q.ineqB = P.ineqB;
  Q.eqA.setZero(P.eqA.rows() + 1, d + 1);
  Q.eqA.topLeftCorner(P.eqA.rows(), d) = P.eqA;
  Q.eqA.row(P.eqA.rows()).head(d) = (-c).transpose();
  Q.eqA(P.eqA.rows(), d) = 1;
  Q.eqB.setZero(P.eqB.size() + 1);
  Q.eqB.head(P.eqB.size()) = P.eqB;

  Polyhedron T = projectOnto(Q, {d});
  bool have = false;
  Rat best;
  auto consider = [&](const Rat& v) {
    if (!have) {
      best = v;
      have = true;
    } else if (maximize ? (v < best) : (v > best)) {
      best = v;
    }
  };
  for (Index i = 0; i < T.ineqA.rows(); ++i) {
    const Int& a = T.ineqA(i, 0);
    if (a == 0) continue;
    Rat bound = Rat(T.ineqB[i]) / Rat(a);
    // a*t >= b gives an upper bound when a < 0, a lower bound when a > 0.
    if (maximize && a < 0) consider(bound);
    if (!maximize && a > 0) consider(bound);
  }
  for (Index i = 0; i < T.eqA.rows(); ++i) {
    const Int& a = T.eqA(i, 0);
    if (a != 0) consider(Rat(T.eqB[i]) / Rat(a));
  }
  if (!have) {
    res.kind = OptResult::Unbounded;
    return res;
  }
  res.kind = OptResult::Finite;
  res.value = best;
  return res;
}

IntMat linealityBasis(const Polyhedron& P) {
  IntMat stacked(P.ineqA.rows() + P.eqA.rows(), P.dim());
  stacked.topRows(P.ineqA.rows()) = P.ineqA;
  stacked.bottomRows(P.eqA.rows()) = P.eqA;
  return rationalKernel(stacked);
}

Polyhedron promoteImpliedEqualities(const Polyhedron& P) {
  std::vector<Row> ineqs = toRows(P.ineqA, P.ineqB);
  std::vector<Row> eqs = toRows(P.eqA, P.eqB);
  std::vector<Row> keptIneqs;
  for (const Row& r : ineqs) {
    OptResult sup = rationalOptimum(P, r.a, true);
    if (sup.kind == OptResult::Finite && sup.value == Rat(r.b)) {
      eqs.push_back(r);
    } else {
      keptIneqs.push_back(r);
    }
  }
  return rebuild(std::move(keptIneqs), std::move(eqs), P.dim());
}

std::vector<IntVec> enumerateIntegerPoints(const Polyhedron& P, long cap) {
  Index d = P.dim();
  // Equalities become inequality pairs so one elimination chain serves.
  Polyhedron Q(d);
  {
    std::vector<Row> rows = toRows(P.ineqA, P.ineqB);
    for (const Row& r : toRows(P.eqA, P.eqB)) {
      rows.push_back(r);
      rows.push_back({-r.a, -r.b});
    }
    fromRows(cleanRows(std::move(rows), false), d, Q.ineqA, Q.ineqB);
  }
  auto chain = eliminationChain(Q);
  std::vector<IntVec> out;
  if (!constantRowsHold(chain[0])) return out;
  if (d == 0) {
    out.push_back(IntVec(0));
    return out;
  }

  IntVec prefix(d);
  long count = 0;
  auto walk = [&](auto&& self, Index k) -> void {
    const Polyhedron& S = chain[static_cast<size_t>(k + 1)];
    bool haveLo = false, haveHi = false;
    Int lo, hi;
    for (Index i = 0; i < S.ineqA.rows(); ++i) {
      const Int& c = S.ineqA(i, k);
      if (c == 0) continue;
      Int rest = S.ineqB[i];
      for (Index jj = 0; jj < k; ++jj) rest -= S.ineqA(i, jj) * prefix[jj];
      if (c > 0) {
        Int bound = ceilDiv(rest, c);
        if (!haveLo || bound > lo) lo = bound, haveLo = true;
      } else {
        Int bound = floorDiv(rest, c);
        if (!haveHi || bound < hi) hi = bound, haveHi = true;
      }
    }
    if (!haveLo || !haveHi)
      fail(ErrorKind::Internal, "unbounded direction in point enumeration");
    for (Int v = lo; v <= hi; v += 1) {
      prefix[k] = v;
      if (k + 1 == d) {
        if (++count > cap)
          fail(ErrorKind::ResourceLimit, "integer point enumeration cap");
        out.push_back(prefix);
      } else {
        self(self, k + 1);
      }
    }
  };
  walk(walk, 0);
  return out;
}

}  // namespace qg
