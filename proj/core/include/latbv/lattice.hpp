#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "latbv/rational.hpp"
#include "latbv/util.hpp"

namespace latbv {

using CellId = std::uint32_t;

enum class CellType : std::uint8_t { Vertex, TEdge, XEdge, Plaq };

struct Cell {
  CellType type;
  int t;  // base time slice
  int x;  // base spatial site
};

// Sparse exact matrix over cell indices (rows x cols given by context).
class SparseMat {
 public:
  void set(CellId r, CellId c, const Rat& v);
  void add(CellId r, CellId c, const Rat& v);
  Rat get(CellId r, CellId c) const;
  const std::map<std::pair<CellId, CellId>, Rat>& entries() const { return e_; }
  std::vector<Rat> apply(const std::vector<Rat>& v, std::size_t rows) const;

 private:
  std::map<std::pair<CellId, CellId>, Rat> e_;
};

// 1+1 dimensional lattice, periodic in space and (as a cell complex) in time;
// dynamics is cut open in time by the cutoff profiles, never by the complex.
// Signature (+,-): t-edges carry metric weight +1, x-edges and plaquettes -1.
class Lattice {
 public:
  Lattice(int nt, int nx, Rat dt, Rat dx);

  int nt() const { return nt_; }
  int nx() const { return nx_; }
  const Rat& dt() const { return dt_; }
  const Rat& dx() const { return dx_; }
  Rat measure() const { return dt_ * dx_; }

  std::size_t n_cells() const { return cells_.size(); }
  const Cell& cell(CellId id) const { return cells_[id]; }

  CellId vertex(int t, int x) const;
  CellId tedge(int t, int x) const;
  CellId xedge(int t, int x) const;
  CellId plaq(int t, int x) const;

  std::size_t count(CellType ty) const;
  std::vector<CellId> cells_of(CellType ty) const;
  static int degree(CellType ty) { return ty == CellType::Vertex ? 0 : (ty == CellType::Plaq ? 2 : 1); }

  // doubled time coordinate: vertices and x-edges sit on slices, t-edges and
  // plaquettes between them
  int time2(CellId id) const;
  // metric sign of the Hodge pairing on this cell's component
  Rat metric_sign(CellId id) const;

  // coboundary from degree p to p+1, exact rational entries (differences
  // divided by spacings)
  const SparseMat& d(int p) const;
  // codifferential: adjoint of d under the signed pairing
  const SparseMat& codiff(int p) const;

  // <u,v>_g on p-cochains
  Rat pairing(int p, const std::vector<Rat>& u, const std::vector<Rat>& v) const;

  std::vector<CellId> p_cells(int p) const;

 private:
  void build_cells();
  void build_d();

  int nt_, nx_;
  Rat dt_, dx_;
  std::vector<Cell> cells_;
  CellId v0_, te0_, xe0_, pl0_;
  SparseMat d0_, d1_;        // d0: vertices->edges, d1: edges->plaquettes
  SparseMat cod1_, cod2_;    // adjoints: edges->vertices, plaquettes->edges
};

}  // namespace latbv
