#include "quasigrade/lattice.hpp"

#include "quasigrade/errors.hpp"
#include "quasigrade/normal_form.hpp"

namespace qg {

IntMat latticeCanonicalBasis(const IntMat& basis) {
  HnfResult h = hermiteNormalForm(basis);
  return h.H.topRows(h.rank);
}

std::optional<Coset> solveCongruences(const std::vector<Congruence>& congs,
                                      Index dim) {
  Index J = static_cast<Index>(congs.size());
  // c_i . u - m_i s_i = r_i with auxiliary integers s_i.
  IntMat M = IntMat::Zero(J, dim + J);
  IntVec r(J);
  for (Index i = 0; i < J; ++i) {
    const Congruence& cg = congs[static_cast<size_t>(i)];
    if (cg.coeffs.size() != dim) fail(ErrorKind::DimMismatch, "congruence arity");
    if (cg.modulus < 1) fail(ErrorKind::Internal, "congruence modulus");
    M.row(i).head(dim) = cg.coeffs.transpose();
    M(i, dim + i) = -cg.modulus;
    r[i] = cg.rhs;
  }
  auto sol = solveDiophantine(M, r);
  if (!sol) return std::nullopt;
  Coset out;
  out.shift = sol->head(dim);
  IntMat ker = integerKernel(M);
  out.basis = latticeCanonicalBasis(ker.leftCols(dim));
  return out;
}

bool cosetContains(const Coset& C, const IntVec& u) {
  if (u.size() != C.dim()) fail(ErrorKind::DimMismatch, "coset point arity");
  IntVec diff = u - C.shift;
  return solveDiophantine(C.basis.transpose(), diff).has_value();
}

Coset cosetAffineImage(const IntVec& x0, const IntMat& K, const Coset& inner) {
  if (K.rows() != inner.dim() || x0.size() != K.cols())
    fail(ErrorKind::DimMismatch, "coset image arity");
  Coset out;
  out.shift = x0 + K.transpose() * inner.shift;
  out.basis = latticeCanonicalBasis(inner.basis * K);
  return out;
}

}  // namespace qg
