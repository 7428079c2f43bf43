#pragma once

#include <stdexcept>
#include <string>

namespace qg {

// Structured error taxonomy. Every thrown condition carries a kind so the CLI
// can map it to an exit code and a stable machine-readable name.
enum class ErrorKind {
  Syntax,
  UnboundVariable,
  ArityMismatch,
  DimMismatch,
  ResourceLimit,
  NonPointedCone,
  UnboundedCellWithLine,
  NotAMonoid,
  NotInSemigroup,
  RingMismatch,
  UnsupportedRing,
  ZeroIdeal,
  DimensionCap,
  NotPrimary,
  GeneratorCap,
  InfiniteLength,
  RecursionCap,
  Unsupported,
  InsufficientSamples,
  DegreeMismatch,
  OutOfDomain,
  NoFit,
  Internal,
};

const char* errorKindName(ErrorKind k);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(errorKindName(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

// Resource caps. Defaults are deliberately conservative; the CLI exposes
// overrides. A tripped cap always surfaces as Error(ResourceLimit, ...)
// naming the cap, never as silent truncation.
struct Caps {
  long qeAtoms = 1000000;        // atoms created during quantifier elimination
  long dnfCells = 200000;        // cells created by DNF expansion / disjointification
  long fpPoints = 1000000;       // fundamental parallelepiped determinant bound
  long enumPoints = 2000000;     // lattice points enumerated in one bounded region
  int shellRounds = 12;          // box-expansion rounds for stabilization
  int taylorGens = 16;           // generators admitted to a Taylor complex
  int newtonDim = 4;             // ambient dimension for facet enumeration
  int linealitySplits = 64;      // recursive splits along lineality directions
};

inline Caps& defaultCaps() {
  static Caps caps;
  return caps;
}

}  // namespace qg
