#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "latbv/lattice.hpp"
#include "latbv/util.hpp"

using namespace latbv;

TEST_CASE("cell registries and counts") {
  Lattice lat(6, 4, Rat(1), Rat(1));
  CHECK(lat.cells_of(CellType::Vertex).size() == 24);
  CHECK(lat.cells_of(CellType::TEdge).size() + lat.cells_of(CellType::XEdge).size() == 48);
  CHECK_THROWS_AS(Lattice(2, 4, Rat(1), Rat(1)), Error);
  CHECK_THROWS_AS(Lattice(8, 1, Rat(1), Rat(1)), Error);
}

TEST_CASE("coboundary squares to zero") {
  Lattice lat(8, 4, Rat(1, 2), Rat(1, 3));
  Rng rng(5);
  std::vector<Rat> u(lat.n_cells(), Rat(0));
  for (CellId v : lat.cells_of(CellType::Vertex)) u[v] = Rat(rng.small(5), 1 + rng.below(3));
  auto du = lat.d(0).apply(u, lat.n_cells());
  auto ddu = lat.d(1).apply(du, lat.n_cells());
  for (const Rat& x : ddu) CHECK(x == 0);
}

TEST_CASE("codifferential is the pairing adjoint") {
  Lattice lat(8, 4, Rat(1, 2), Rat(2));
  Rng rng(9);
  std::vector<Rat> u(lat.n_cells(), Rat(0)), v(lat.n_cells(), Rat(0));
  for (CellId c : lat.cells_of(CellType::Vertex)) u[c] = Rat(rng.small(4));
  for (CellId c : lat.cells_of(CellType::TEdge)) v[c] = Rat(rng.small(4));
  for (CellId c : lat.cells_of(CellType::XEdge)) v[c] = Rat(rng.small(4));
  auto du = lat.d(0).apply(u, lat.n_cells());
  auto dv = lat.codiff(1).apply(v, lat.n_cells());
  CHECK(lat.pairing(1, du, v) == lat.pairing(0, u, dv));

  // degree 1 -> 2
  std::vector<Rat> w(lat.n_cells(), Rat(0));
  for (CellId c : lat.cells_of(CellType::Plaq)) w[c] = Rat(rng.small(4));
  auto dv1 = lat.d(1).apply(v, lat.n_cells());
  auto dw = lat.codiff(2).apply(w, lat.n_cells());
  CHECK(lat.pairing(2, dv1, w) == lat.pairing(1, v, dw));
}

TEST_CASE("codifferential squares to zero") {
  Lattice lat(8, 4, Rat(1), Rat(1));
  Rng rng(13);
  std::vector<Rat> w(lat.n_cells(), Rat(0));
  for (CellId c : lat.cells_of(CellType::Plaq)) w[c] = Rat(rng.small(4));
  auto dw = lat.codiff(2).apply(w, lat.n_cells());
  auto ddw = lat.codiff(1).apply(dw, lat.n_cells());
  for (const Rat& x : ddw) CHECK(x == 0);
}

TEST_CASE("metric signs follow the signature") {
  Lattice lat(6, 4, Rat(1), Rat(1));
  CHECK(lat.metric_sign(lat.vertex(0, 0)) == 1);
  CHECK(lat.metric_sign(lat.tedge(0, 0)) == 1);
  CHECK(lat.metric_sign(lat.xedge(0, 0)) == -1);
  CHECK(lat.metric_sign(lat.plaq(0, 0)) == -1);
}
