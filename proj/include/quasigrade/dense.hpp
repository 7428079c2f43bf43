#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "quasigrade/scalar.hpp"

namespace qg {

using IntVec = Eigen::Matrix<Int, Eigen::Dynamic, 1>;
using IntMat = Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic>;
using RatVec = Eigen::Matrix<Rat, Eigen::Dynamic, 1>;
using RatMat = Eigen::Matrix<Rat, Eigen::Dynamic, Eigen::Dynamic>;
using Index = Eigen::Index;

inline IntVec intVec(std::initializer_list<long> xs) {
  IntVec v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (long x : xs) v(i++) = Int(x);
  return v;
}

inline IntMat intMat(std::initializer_list<std::initializer_list<long>> rows) {
  Index m = static_cast<Index>(rows.size());
  Index n = m ? static_cast<Index>(rows.begin()->size()) : 0;
  IntMat a(m, n);
  Index i = 0;
  for (const auto& row : rows) {
    Index j = 0;
    for (long x : row) a(i, j++) = Int(x);
    ++i;
  }
  return a;
}

inline RatMat toRat(const IntMat& a) {
  RatMat r(a.rows(), a.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) r(i, j) = Rat(a(i, j));
  return r;
}

inline RatVec toRat(const IntVec& v) {
  RatVec r(v.size());
  for (Index i = 0; i < v.size(); ++i) r(i) = Rat(v(i));
  return r;
}

inline bool isZeroVec(const IntVec& v) {
  for (Index i = 0; i < v.size(); ++i)
    if (v(i) != 0) return false;
  return true;
}

// gcd of all entries, nonnegative; 0 for the zero vector.
inline Int content(const IntVec& v) {
  Int g = 0;
  for (Index i = 0; i < v.size(); ++i) g = intGcd(g, v(i));
  return g;
}

// v divided by its content; the zero vector stays zero.
inline IntVec primitivePart(const IntVec& v) {
  Int g = content(v);
  if (g == 0 || g == 1) return v;
  IntVec r = v;
  for (Index i = 0; i < r.size(); ++i) r(i) /= g;
  return r;
}

// Clears denominators of a rational vector to a primitive integer vector.
inline IntVec clearDenominators(const RatVec& v) {
  Int den = 1;
  for (Index i = 0; i < v.size(); ++i) den = intLcm(den, v(i).get_den());
  IntVec r(v.size());
  for (Index i = 0; i < v.size(); ++i) r(i) = ratToIntExact(Rat(v(i) * Rat(den)));
  return primitivePart(r);
}

inline int lexCompare(const IntVec& a, const IntVec& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (Index i = 0; i < a.size(); ++i) {
    if (a(i) < b(i)) return -1;
    if (a(i) > b(i)) return 1;
  }
  return 0;
}

struct LexLess {
  bool operator()(const IntVec& a, const IntVec& b) const {
    return lexCompare(a, b) < 0;
  }
};

inline std::string toString(const IntVec& v) {
  std::ostringstream os;
  os << "(";
  for (Index i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << v(i).get_str();
  }
  os << ")";
  return os.str();
}

// Visits every integer point of the box [lo, hi] in lexicographic order.
// The callback may return false to stop early; forEachBoxPoint reports
// whether the walk ran to completion.
inline bool forEachBoxPoint(const IntVec& lo, const IntVec& hi,
                            const std::function<bool(const IntVec&)>& fn) {
  Index d = lo.size();
  if (d == 0) return fn(IntVec(0));
  for (Index i = 0; i < d; ++i)
    if (lo(i) > hi(i)) return true;
  IntVec cur = lo;
  while (true) {
    if (!fn(cur)) return false;
    Index i = d - 1;
    while (true) {
      cur(i) += 1;
      if (cur(i) <= hi(i)) break;
      cur(i) = lo(i);
      if (i == 0) return true;
      --i;
    }
  }
}

}  // namespace qg
