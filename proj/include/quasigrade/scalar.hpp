#pragma once

#include <Eigen/Core>
#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "quasigrade/errors.hpp"

namespace qg {

// Exact scalars. Every number in the kernel is an arbitrary-precision
// integer or rational; no floating point exists anywhere below the CLI.
using Int = mpz_class;
using Rat = mpq_class;

inline Int intGcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Int intLcm(const Int& a, const Int& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

// Floor division and the matching remainder (remainder has the sign of b).
inline Int floorDiv(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Int floorMod(const Int& a, const Int& b) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Int ceilDiv(const Int& a, const Int& b) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// g = gcd(a,b) together with s,t solving s*a + t*b = g.
inline Int extGcd(const Int& a, const Int& b, Int& s, Int& t) {
  Int g;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(),
             b.get_mpz_t());
  return g;
}

inline Int ratFloor(const Rat& x) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
  return q;
}

inline Int ratCeil(const Rat& x) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
  return q;
}

inline Int ratToIntExact(const Rat& x) {
  if (x.get_den() != 1) fail(ErrorKind::Internal, "expected integral rational");
  return x.get_num();
}

inline std::string ratToString(const Rat& x) {
  Rat c = x;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

// Prime-field scalar with runtime modulus. A default-constructed value is an
// "unattached" constant whose modulus is adopted from the first operand that
// carries one; Eigen's internal Scalar(0)/Scalar(1) constants rely on this.
struct Gf {
  std::uint64_t v = 0;
  std::uint64_t p = 0;

  Gf() = default;
  Gf(int x) : v(0), p(0) { v = static_cast<std::uint64_t>(x < 0 ? -x : x); neg_ = x < 0; }
  Gf(std::uint64_t value, std::uint64_t mod) : v(value % mod), p(mod), neg_(false) {}

  // Unattached constants remember a pending sign until a modulus arrives.
  bool neg_ = false;

  Gf attach(std::uint64_t mod) const {
    if (p != 0) return *this;
    Gf r;
    r.p = mod;
    r.v = v % mod;
    if (neg_ && r.v != 0) r.v = mod - r.v;
    return r;
  }

  static std::uint64_t unifyMod(const Gf& a, const Gf& b) { return a.p ? a.p : b.p; }

  friend Gf operator+(const Gf& a, const Gf& b) {
    std::uint64_t m = unifyMod(a, b);
    if (m == 0) { Gf r; r.v = a.v + b.v; return r; }
    Gf x = a.attach(m), y = b.attach(m);
    return Gf(x.v + y.v >= m ? x.v + y.v - m : x.v + y.v, m);
  }
  friend Gf operator-(const Gf& a, const Gf& b) {
    std::uint64_t m = unifyMod(a, b);
    if (m == 0) { Gf r; r.v = a.v >= b.v ? a.v - b.v : b.v - a.v; r.neg_ = a.v < b.v; return r; }
    Gf x = a.attach(m), y = b.attach(m);
    return Gf(x.v >= y.v ? x.v - y.v : x.v + m - y.v, m);
  }
  friend Gf operator-(const Gf& a) {
    if (a.p == 0) { Gf r = a; r.neg_ = !r.neg_; return r; }
    return Gf(a.v == 0 ? 0 : a.p - a.v, a.p);
  }
  friend Gf operator*(const Gf& a, const Gf& b) {
    std::uint64_t m = unifyMod(a, b);
    if (m == 0) { Gf r; r.v = a.v * b.v; r.neg_ = a.neg_ != b.neg_; return r; }
    Gf x = a.attach(m), y = b.attach(m);
    unsigned __int128 prod = static_cast<unsigned __int128>(x.v) * y.v;
    return Gf(static_cast<std::uint64_t>(prod % m), m);
  }
  Gf inverse() const {
    if (p == 0 || v == 0) fail(ErrorKind::Internal, "Gf inverse of zero");
    // Extended Euclid on (v, p).
    std::int64_t t = 0, newT = 1;
    std::int64_t r = static_cast<std::int64_t>(p), newR = static_cast<std::int64_t>(v);
    while (newR != 0) {
      std::int64_t q = r / newR;
      std::int64_t tmp = t - q * newT; t = newT; newT = tmp;
      tmp = r - q * newR; r = newR; newR = tmp;
    }
    if (r != 1) fail(ErrorKind::Internal, "Gf modulus not prime");
    if (t < 0) t += static_cast<std::int64_t>(p);
    return Gf(static_cast<std::uint64_t>(t), p);
  }
  friend Gf operator/(const Gf& a, const Gf& b) {
    std::uint64_t m = unifyMod(a, b);
    return a.attach(m) * b.attach(m).inverse();
  }
  Gf& operator+=(const Gf& o) { *this = *this + o; return *this; }
  Gf& operator-=(const Gf& o) { *this = *this - o; return *this; }
  Gf& operator*=(const Gf& o) { *this = *this * o; return *this; }
  friend bool operator==(const Gf& a, const Gf& b) {
    std::uint64_t m = unifyMod(a, b);
    if (m == 0) return a.v == b.v && (a.v == 0 || a.neg_ == b.neg_);
    return a.attach(m).v == b.attach(m).v;
  }
  friend bool operator!=(const Gf& a, const Gf& b) { return !(a == b); }
  bool isZero() const { return p == 0 ? v == 0 : v % p == 0; }
};

}  // namespace qg

namespace Eigen {

template <>
struct NumTraits<mpz_class> : GenericNumTraits<mpz_class> {
  typedef mpz_class Real;
  typedef mpz_class NonInteger;
  typedef mpz_class Nested;
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
  enum {
    IsInteger = 1,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 30,
    MulCost = 50,
  };
};

template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
  typedef mpq_class Real;
  typedef mpq_class NonInteger;
  typedef mpq_class Nested;
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 150,
    MulCost = 100,
  };
};

template <>
struct NumTraits<qg::Gf> : GenericNumTraits<qg::Gf> {
  typedef qg::Gf Real;
  typedef qg::Gf NonInteger;
  typedef qg::Gf Nested;
  static inline Real epsilon() { return qg::Gf(0); }
  static inline Real dummy_precision() { return qg::Gf(0); }
  static inline int digits10() { return 0; }
  enum {
    IsInteger = 0,
    IsSigned = 0,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 3,
    MulCost = 3,
  };
};

}  // namespace Eigen
