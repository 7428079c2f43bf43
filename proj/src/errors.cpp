#include "quasigrade/errors.hpp"

namespace qg {

const char* errorKindName(ErrorKind k) {
  switch (k) {
    case ErrorKind::Syntax: return "syntax";
    case ErrorKind::UnboundVariable: return "unbound-variable";
    case ErrorKind::ArityMismatch: return "arity-mismatch";
    case ErrorKind::DimMismatch: return "dim-mismatch";
    case ErrorKind::ResourceLimit: return "resource-limit";
    case ErrorKind::NonPointedCone: return "non-pointed-cone";
    case ErrorKind::UnboundedCellWithLine: return "unbounded-cell-with-line";
    case ErrorKind::NotAMonoid: return "not-a-monoid";
    case ErrorKind::NotInSemigroup: return "not-in-semigroup";
    case ErrorKind::RingMismatch: return "ring-mismatch";
    case ErrorKind::UnsupportedRing: return "unsupported-ring";
    case ErrorKind::ZeroIdeal: return "zero-ideal";
    case ErrorKind::DimensionCap: return "dimension-cap";
    case ErrorKind::NotPrimary: return "not-primary";
    case ErrorKind::GeneratorCap: return "generator-cap";
    case ErrorKind::InfiniteLength: return "infinite-length";
    case ErrorKind::RecursionCap: return "recursion-cap";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::InsufficientSamples: return "insufficient-samples";
    case ErrorKind::DegreeMismatch: return "degree-mismatch";
    case ErrorKind::OutOfDomain: return "out-of-domain";
    case ErrorKind::NoFit: return "no-fit";
    case ErrorKind::Internal: return "internal";
  }
  return "unknown";
}

}  // namespace qg
