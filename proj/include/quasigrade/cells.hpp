#pragma once

#include <optional>
#include <string>
#include <vector>

#include "quasigrade/decompose.hpp"
#include "quasigrade/formula.hpp"
#include "quasigrade/lattice.hpp"
#include "quasigrade/polyhedron.hpp"

namespace qg {

// Conjunctive cell: integer points of a rational polyhedron filtered by
// congruence constraints. Coordinates follow the owning CellSet's variable
// order.
struct Cell {
  Polyhedron poly;
  std::vector<Congruence> congs;

  Index dim() const { return poly.dim(); }
  bool contains(const IntVec& u) const;
};

// Finite union of cells over a fixed, sorted variable list.
struct CellSet {
  std::vector<std::string> vars;
  std::vector<Cell> cells;

  Index dim() const { return static_cast<Index>(vars.size()); }
  bool contains(const IntVec& u) const;
};

Cell intersectCells(const Cell& a, const Cell& b);

// Some integer point of the cell, if any. Exact: combines the congruence
// coset with the polyhedron's lattice decomposition.
std::optional<IntVec> cellIntegerPoint(const Cell& c, const Caps& caps);

// Lowers a formula to cells over the given variables (sorted, and covering
// the formula's free variables). Quantifiers are eliminated first.
CellSet toCells(const FormulaPtr& f, const std::vector<std::string>& vars,
                const Caps& caps);
CellSet toCells(const FormulaPtr& f, const Caps& caps);

FormulaPtr cellsToFormula(const CellSet& cs);

// Same union, pairwise disjoint cells.
CellSet disjointify(const CellSet& cs, const Caps& caps);

bool cellsPairwiseDisjoint(const CellSet& cs, const Caps& caps);

// Every integer point of a lies in some cell of b.
bool cellsSubset(const CellSet& a, const CellSet& b, const Caps& caps);

// Membership formula of cs with its variables simultaneously replaced by the
// given coordinate terms.
FormulaPtr cellsFormulaAt(const CellSet& cs, const std::vector<LinTerm>& coords);

}  // namespace qg
