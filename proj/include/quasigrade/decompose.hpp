#pragma once

#include <optional>
#include <vector>

#include "quasigrade/cone.hpp"
#include "quasigrade/errors.hpp"
#include "quasigrade/lattice.hpp"
#include "quasigrade/polyhedron.hpp"

namespace qg {

// base + nonnegative integer combinations of the gens rows. Pieces produced
// by latticeDecompose have linearly independent gens.
struct LatticePiece {
  IntVec base;
  IntMat gens;
};

// Partitions P intersect Z^d into finitely many LatticePieces (the list is
// empty exactly when P has no lattice point). Unbounded directions surface
// as piece generators. With earlyExit the search stops after the first
// piece, which is enough for emptiness questions.
std::vector<LatticePiece> latticeDecompose(const Polyhedron& P, const Caps& caps,
                                           bool earlyExit = false);

// Same, for P intersected with an affine sublattice; pieces are mapped back
// to the ambient coordinates.
std::vector<LatticePiece> latticeDecomposeInCoset(const Polyhedron& P,
                                                  const Coset& L,
                                                  const Caps& caps,
                                                  bool earlyExit = false);

std::optional<IntVec> firstIntegerPoint(const Polyhedron& P, const Caps& caps);

std::optional<IntVec> integerPointInCoset(const Polyhedron& P, const Coset& L,
                                          const Caps& caps);

// Membership for decomposition output; requires the gens rows linearly
// independent.
bool pieceContains(const LatticePiece& piece, const IntVec& u);

}  // namespace qg
