#pragma once

#include <optional>
#include <vector>

#include "quasigrade/dense.hpp"

namespace qg {

// coeffs . u = rhs (mod modulus), modulus >= 1.
struct Congruence {
  Int modulus;
  IntVec coeffs;
  Int rhs;
};

// Affine sublattice shift + Z-span of the basis rows. basis is in Hermite
// form with zero rows removed, so equal cosets have equal representations
// once the shift is reduced.
struct Coset {
  IntVec shift;
  IntMat basis;

  Index dim() const { return shift.size(); }
};

// All u with coeffs_i . u = rhs_i (mod m_i) simultaneously; nullopt when the
// system has no solution.
std::optional<Coset> solveCongruences(const std::vector<Congruence>& congs,
                                      Index dim);

bool cosetContains(const Coset& C, const IntVec& u);

// Image of inner under z -> x0 + K^T z; rows of K are directions in the
// ambient space.
Coset cosetAffineImage(const IntVec& x0, const IntMat& K, const Coset& inner);

// Hermite-reduces the basis rows and drops zero rows.
IntMat latticeCanonicalBasis(const IntMat& basis);

}  // namespace qg
