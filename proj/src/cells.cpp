#include "quasigrade/cells.hpp"

#include <algorithm>

namespace qg {
namespace {

Polyhedron universe(Index d) {
  Polyhedron P;
  P.ineqA.resize(0, d);
  P.ineqB.resize(0);
  P.eqA.resize(0, d);
  P.eqB.resize(0);
  return P;
}

// Coefficient row of a term in the cell's variable order.
std::pair<IntVec, Int> termRow(const LinTerm& t,
                               const std::vector<std::string>& vars) {
  IntVec a = IntVec::Zero(static_cast<Index>(vars.size()));
  for (const auto& [name, c] : t.coeffs) {
    auto it = std::lower_bound(vars.begin(), vars.end(), name);
    if (it == vars.end() || *it != name)
      fail(ErrorKind::UnboundVariable, "variable '" + name +
                                           "' is not in the cell set's scope");
    a[static_cast<Index>(it - vars.begin())] = c;
  }
  return {a, t.constant};
}

// Adds coeffs . u = rhs (mod m) reduced mod m. Returns false when the
// constraint is unsatisfiable on its own.
bool pushCong(Cell& c, const Int& m, IntVec coeffs, Int rhs) {
  for (Index i = 0; i < coeffs.size(); ++i) coeffs[i] = floorMod(coeffs[i], m);
  rhs = floorMod(rhs, m);
  if (isZeroVec(coeffs)) return rhs == 0;
  c.congs.push_back({m, std::move(coeffs), std::move(rhs)});
  return true;
}

// Cheap pruning filter; full integer emptiness is only decided where a
// caller needs it.
bool plausiblyNonempty(const Cell& c) {
  if (!rationallyFeasible(c.poly)) return false;
  return solveCongruences(c.congs, c.dim()).has_value();
}

void chargeCells(size_t n, const Caps& caps) {
  if (n > static_cast<size_t>(caps.dnfCells))
    fail(ErrorKind::ResourceLimit, "cell count exceeds the disjunction cap");
}

// Cells of a single canonical atom.
std::vector<Cell> atomCells(const FormulaPtr& f,
                            const std::vector<std::string>& vars) {
  Index d = static_cast<Index>(vars.size());
  auto [a, cst] = termRow(f->term, vars);
  std::vector<Cell> out;
  auto fresh = [&] { return Cell{universe(d), {}}; };
  switch (f->kind) {
    case Formula::Kind::Lt: {  // a.u + cst < 0
      Cell c = fresh();
      c.poly.addIneq(-a, cst + 1);
      out.push_back(std::move(c));
      break;
    }
    case Formula::Kind::Eq: {
      Cell c = fresh();
      c.poly.addEq(a, -cst);
      out.push_back(std::move(c));
      break;
    }
    case Formula::Kind::Ne: {
      Cell lo = fresh();
      lo.poly.addIneq(-a, cst + 1);
      Cell hi = fresh();
      hi.poly.addIneq(a, Int(1) - cst);
      out.push_back(std::move(lo));
      out.push_back(std::move(hi));
      break;
    }
    case Formula::Kind::Dvd: {
      Cell c = fresh();
      if (pushCong(c, f->modulus, a, -cst)) out.push_back(std::move(c));
      break;
    }
    case Formula::Kind::Ndvd: {
      for (Int r = 1; r < f->modulus; r += 1) {
        Cell c = fresh();
        if (pushCong(c, f->modulus, a, -cst + r)) out.push_back(std::move(c));
      }
      break;
    }
    default:
      fail(ErrorKind::Internal, "atomCells on non-atom");
  }
  return out;
}

std::vector<Cell> lower(const FormulaPtr& f,
                        const std::vector<std::string>& vars,
                        const Caps& caps) {
  switch (f->kind) {
    case Formula::Kind::True:
      return {Cell{universe(static_cast<Index>(vars.size())), {}}};
    case Formula::Kind::False:
      return {};
    case Formula::Kind::Or: {
      std::vector<Cell> out;
      for (const auto& g : f->args) {
        auto part = lower(g, vars, caps);
        chargeCells(out.size() + part.size(), caps);
        std::move(part.begin(), part.end(), std::back_inserter(out));
      }
      return out;
    }
    case Formula::Kind::And: {
      std::vector<Cell> acc = {
          Cell{universe(static_cast<Index>(vars.size())), {}}};
      for (const auto& g : f->args) {
        auto part = lower(g, vars, caps);
        std::vector<Cell> next;
        chargeCells(acc.size() * part.size(), caps);
        for (const auto& x : acc)
          for (const auto& y : part) {
            Cell z = intersectCells(x, y);
            if (plausiblyNonempty(z)) next.push_back(std::move(z));
          }
        acc = std::move(next);
        if (acc.empty()) break;
      }
      return acc;
    }
    default:
      return atomCells(f, vars);
  }
}

// Single inequality constraint a.u >= b in split form, used to slice cells
// during disjointification. Congruences are handled separately.
struct IneqRow {
  IntVec a;
  Int b;
};

std::vector<IneqRow> ineqConstraints(const Cell& c) {
  std::vector<IneqRow> rows;
  for (Index i = 0; i < c.poly.ineqA.rows(); ++i)
    rows.push_back({c.poly.ineqA.row(i).transpose(), c.poly.ineqB[i]});
  for (Index i = 0; i < c.poly.eqA.rows(); ++i) {
    IntVec a = c.poly.eqA.row(i).transpose();
    rows.push_back({a, c.poly.eqB[i]});
    rows.push_back({-a, -c.poly.eqB[i]});
  }
  return rows;
}

// Pieces of r outside d: walk d's constraints; piece k keeps constraints
// before k and violates constraint k. Produces pairwise disjoint pieces
// covering r minus d.
std::vector<Cell> subtractCell(const Cell& r, const Cell& d) {
  std::vector<Cell> pending;
  Cell kept = r;
  for (const auto& row : ineqConstraints(d)) {
    Cell piece = kept;
    piece.poly.addIneq(-row.a, Int(1) - row.b);
    if (plausiblyNonempty(piece)) pending.push_back(std::move(piece));
    kept.poly.addIneq(row.a, row.b);
  }
  for (const auto& g : d.congs) {
    for (Int s = 1; s < g.modulus; s += 1) {
      Cell piece = kept;
      if (pushCong(piece, g.modulus, g.coeffs, g.rhs + s) &&
          plausiblyNonempty(piece))
        pending.push_back(std::move(piece));
    }
    if (!pushCong(kept, g.modulus, g.coeffs, g.rhs)) break;
  }
  return pending;
}

}  // namespace

bool Cell::contains(const IntVec& u) const {
  if (!poly.contains(u)) return false;
  for (const auto& g : congs)
    if (floorMod(g.coeffs.dot(u) - g.rhs, g.modulus) != 0) return false;
  return true;
}

bool CellSet::contains(const IntVec& u) const {
  for (const auto& c : cells)
    if (c.contains(u)) return true;
  return false;
}

Cell intersectCells(const Cell& a, const Cell& b) {
  Cell c;
  c.poly = a.poly.intersect(b.poly);
  c.congs = a.congs;
  c.congs.insert(c.congs.end(), b.congs.begin(), b.congs.end());
  return c;
}

std::optional<IntVec> cellIntegerPoint(const Cell& c, const Caps& caps) {
  auto L = solveCongruences(c.congs, c.dim());
  if (!L) return std::nullopt;
  return integerPointInCoset(c.poly, *L, caps);
}

CellSet toCells(const FormulaPtr& f, const std::vector<std::string>& vars,
                const Caps& caps) {
  if (!std::is_sorted(vars.begin(), vars.end()) ||
      std::adjacent_find(vars.begin(), vars.end()) != vars.end())
    fail(ErrorKind::Internal, "cell variables must be sorted and distinct");
  FormulaPtr g = f;
  if (!isQuantifierFree(g)) g = eliminateQuantifiers(g, caps);
  long budget = 0;
  g = simplifyFormula(toNnf(g), caps, budget);
  CellSet cs;
  cs.vars = vars;
  cs.cells = lower(g, vars, caps);
  return cs;
}

CellSet toCells(const FormulaPtr& f, const Caps& caps) {
  return toCells(f, freeVariables(f), caps);
}

FormulaPtr cellsToFormula(const CellSet& cs) {
  auto term = [&](const IntVec& a, const Int& c) {
    LinTerm t = LinTerm::lit(c);
    for (Index i = 0; i < a.size(); ++i)
      if (a[i] != 0) t.coeffs[cs.vars[static_cast<size_t>(i)]] = a[i];
    return t;
  };
  std::vector<FormulaPtr> cells;
  for (const auto& c : cs.cells) {
    std::vector<FormulaPtr> lits;
    // a.u >= b becomes b - a.u - 1 < 0.
    for (Index i = 0; i < c.poly.ineqA.rows(); ++i)
      lits.push_back(
          mkLt(term(-c.poly.ineqA.row(i).transpose(), c.poly.ineqB[i] - 1)));
    for (Index i = 0; i < c.poly.eqA.rows(); ++i)
      lits.push_back(
          mkEq(term(c.poly.eqA.row(i).transpose(), -c.poly.eqB[i])));
    for (const auto& g : c.congs)
      lits.push_back(mkDvd(g.modulus, term(g.coeffs, -g.rhs)));
    cells.push_back(mkAnd(std::move(lits)));
  }
  return mkOr(std::move(cells));
}

FormulaPtr cellsFormulaAt(const CellSet& cs, const std::vector<LinTerm>& coords) {
  if (coords.size() != cs.vars.size())
    fail(ErrorKind::DimMismatch, "coordinate count does not match the cells");
  FormulaPtr f = cellsToFormula(cs);
  // Two-pass rename keeps a term like u1-1 from being rewritten again when a
  // later variable happens to occur in it.
  static int tmpCounter = 0;
  std::vector<std::string> tmp;
  for (size_t i = 0; i < cs.vars.size(); ++i)
    tmp.push_back("cfa" + std::to_string(++tmpCounter));
  for (size_t i = 0; i < cs.vars.size(); ++i)
    f = substitute(f, cs.vars[i], LinTerm::var(tmp[i]));
  for (size_t i = 0; i < cs.vars.size(); ++i)
    f = substitute(f, tmp[i], coords[i]);
  return f;
}

CellSet disjointify(const CellSet& cs, const Caps& caps) {
  CellSet out;
  out.vars = cs.vars;
  for (const auto& c : cs.cells) {
    std::vector<Cell> remainders = {c};
    for (const auto& d : out.cells) {
      std::vector<Cell> next;
      for (const auto& r : remainders) {
        auto pieces = subtractCell(r, d);
        std::move(pieces.begin(), pieces.end(), std::back_inserter(next));
        chargeCells(next.size(), caps);
      }
      remainders = std::move(next);
      if (remainders.empty()) break;
    }
    for (auto& r : remainders)
      if (cellIntegerPoint(r, caps)) out.cells.push_back(std::move(r));
  }
  return out;
}

bool cellsSubset(const CellSet& a, const CellSet& b, const Caps& caps) {
  for (const auto& c : a.cells) {
    std::vector<Cell> remainders = {c};
    for (const auto& d : b.cells) {
      std::vector<Cell> next;
      for (const auto& r : remainders) {
        auto pieces = subtractCell(r, d);
        std::move(pieces.begin(), pieces.end(), std::back_inserter(next));
        chargeCells(next.size(), caps);
      }
      remainders = std::move(next);
      if (remainders.empty()) break;
    }
    for (const auto& r : remainders)
      if (cellIntegerPoint(r, caps)) return false;
  }
  return true;
}

bool cellsPairwiseDisjoint(const CellSet& cs, const Caps& caps) {
  for (size_t i = 0; i < cs.cells.size(); ++i)
    for (size_t j = i + 1; j < cs.cells.size(); ++j)
      if (cellIntegerPoint(intersectCells(cs.cells[i], cs.cells[j]), caps))
        return false;
  return true;
}

}  // namespace qg
