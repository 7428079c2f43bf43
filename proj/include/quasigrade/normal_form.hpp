#pragma once

#include <optional>
#include <vector>

#include "quasigrade/dense.hpp"

namespace qg {

// Row-style Hermite normal form: U*A = H with U unimodular, pivots positive,
// entries above each pivot reduced into [0, pivot). Zero rows sink to the
// bottom; pivotCols lists the pivot column of each of the first `rank` rows.
struct HnfResult {
  IntMat H;
  IntMat U;
  std::vector<Index> pivotCols;
  Index rank = 0;
};

HnfResult hermiteNormalForm(const IntMat& A);

// Smith normal form: U*A*V = S with S diagonal, s_1 | s_2 | ..., all s_i >= 0.
struct SnfResult {
  IntMat S;
  IntMat U;
  IntMat V;
  Index rank = 0;
};

SnfResult smithNormalForm(const IntMat& A);

// Basis of the integer kernel {x : A*x = 0}, returned as rows. The basis is
// saturated: it spans kernel(A) ∩ ℤ^n as a lattice, not a finite-index sublattice.
IntMat integerKernel(const IntMat& A);

// One integer solution of A*x = b, if any.
std::optional<IntVec> solveDiophantine(const IntMat& A, const IntVec& b);

// Exact Gaussian elimination over the rationals.
Index rationalRank(const RatMat& A);
Rat rationalDet(const RatMat& A);

// Basis of {x : A*x = 0} over Q, rows cleared to primitive integer vectors.
IntMat rationalKernel(const IntMat& A);

// One rational solution of A*x = b, if the system is consistent.
std::optional<RatVec> rationalSolve(const RatMat& A, const RatVec& b);

RatMat rationalInverse(const RatMat& A);

}  // namespace qg
