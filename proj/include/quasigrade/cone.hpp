#pragma once

#include <vector>

#include "quasigrade/dense.hpp"
#include "quasigrade/errors.hpp"
#include "quasigrade/polyhedron.hpp"

namespace qg {

// Polyhedral cone given by generators; rays are rows, primitive.
struct Cone {
  IntMat rays;

  Index dim() const { return rays.cols(); }
};

// Extreme rays of {u : A*u >= 0, E*u = 0}, primitive, lex-sorted. Requires
// the cone pointed; throws NonPointedCone otherwise.
IntMat extremeRaysFromH(const Polyhedron& homogeneous);

// Basis (rows) of the saturation of the lattice spanned by the rows of M:
// the intersection of their rational span with Z^d.
IntMat saturatedSpanBasis(const IntMat& M);

struct Facet {
  IntVec normal;               // primitive; normal . ray >= 0 on the cone
  std::vector<Index> active;   // ray indices with normal . ray == 0
};

// Facets of the pointed full-dimensional cone generated by the rows of rays.
// Brute force over (d-1)-subsets; intended for the small dimensions the
// decomposition works in.
std::vector<Facet> facetsFromRays(const IntMat& rays);

// Simplicial pieces of a triangulation, each a list of ray indices into the
// input; pieces use only input rays and have pairwise disjoint interiors
// covering the cone.
std::vector<std::vector<Index>> triangulateRays(const IntMat& rays);

// User-facing form: requires the generators span a pointed cone (possibly
// lower-dimensional); each output cone is simplicial.
std::vector<Cone> triangulateCone(const Cone& C);

// Facet openness for a simplicial full-dimensional cone with generator rows
// G, decided against the lexicographic perturbation w0 + sum eps^i e_i.
// closed[i] refers to the facet spanned by all generators except row i.
std::vector<bool> halfOpenFlags(const IntMat& G, const IntVec& w0);

// Lattice points of the half-open fundamental parallelepiped
// { sum t_i g_i : t_i in [0,1) if closed[i], (0,1] otherwise }.
// G must be square and invertible; throws ResourceLimit past the cap.
std::vector<IntVec> parallelepipedPoints(const IntMat& G,
                                         const std::vector<bool>& closed,
                                         long cap);

}  // namespace qg
