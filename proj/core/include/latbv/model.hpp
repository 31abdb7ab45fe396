#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "latbv/kernel.hpp"
#include "latbv/lattice.hpp"
#include "latbv/poly.hpp"
#include "latbv/report.hpp"

namespace latbv {

struct Member {
  std::string name;
  int degree = 0;  // form degree: 0 lives on vertices, 1 on edges
  int parity = 0;
  int gh = 0;
};

// One gauge-fixed free theory plus its interaction: lattice, generators,
// quadratic action S0, symmetry term theta0, interaction V, and the derived
// kernels P (second derivative of S0) and K (mixed second derivative of
// theta0).
struct Model {
  std::shared_ptr<Lattice> lat;
  GenTablePtr tab;
  Window win;
  std::string name;
  std::vector<Member> members;

  Poly S0;      // quadratic, gh 0, no antifields
  Poly theta0;  // field- and antifield-linear symmetry generator
  Poly V;       // interaction, tagged with one power of the coupling

  Kernel P;  // lower-index kernel: P[i][j] = d_j d_i S0 / (mu_i mu_j)
  Kernel K;  // operator kernel: K[i][j] = d_j d_{i+} theta0 / (mu_i mu_j)

  std::vector<Rat> f;  // cutoff value per cell
  int margin = 2;      // slices with f = 0 at each temporal end
  int ramp = 0;        // slices over which f climbs to 1
  int stencil_radius = 1;
  int cone_speed = 1;  // spatial cells of possible propagation per time step

  std::map<GenId, Scalar> phi0;  // background configuration (fields)

  // generator lookup
  GenId field_gen(int member, CellId cell) const;
  GenId antifield_gen(int member, CellId cell) const;

  // slice profile of the cutoff
  Rat f_slice(int t) const;
  // plateau slice range (f == 1)
  int plateau_lo() const;
  int plateau_hi() const;
  // window slice range (f > 0)
  int window_lo() const { return margin; }
  int window_hi() const { return lat->nt() - 1 - margin; }

  // cell/generator within [plateau_lo + extra, plateau_hi - extra]
  bool bulk_cell(CellId c, int extra = 0) const;
  bool bulk_gen(GenId g, int extra = 0) const;

  Poly eom_row(GenId field) const;  // (1/mu) d_i S0
  Poly zero() const { return Poly(tab, win); }
  Poly constant(const Scalar& s) const { return Poly::constant(tab, win, s); }
  Poly gen_poly(GenId g) const { return Poly::gen(tab, win, g); }

 private:
  friend Model build_em_model(std::shared_ptr<Lattice> lat, Window win, const Rat& xi,
                              std::optional<std::uint64_t> current_seed, int margin, int ramp);
  friend Model build_scalar_model(std::shared_ptr<Lattice> lat, Window win, const Rat& mass,
                                  const Rat& g3, const Rat& g4, int margin, int ramp);
  std::vector<std::vector<GenId>> field_ids_;      // [member][cell]
  std::vector<std::vector<GenId>> antifield_ids_;  // [member][cell]
};

// free electromagnetic multiplet (A,B,C,Cbar) with gauge parameter xi and an
// optional conserved external current j = codiff(beta); V = theta0 + <j,A>
Model build_em_model(std::shared_ptr<Lattice> lat, Window win, const Rat& xi,
                     std::optional<std::uint64_t> current_seed, int margin = 2, int ramp = 0);

// real scalar with mass and cubic/quartic couplings; K = 0, theta0 = 0
Model build_scalar_model(std::shared_ptr<Lattice> lat, Window win, const Rat& mass, const Rat& g3,
                         const Rat& g4, int margin = 2, int ramp = 0);

struct TaylorSplit {
  Coeff constant;
  Poly linear;
  Poly quadratic;
  Poly higher;
};

// expand around a background: S(phi0 + phi) collected by polynomial degree
TaylorSplit taylor_split(const Poly& s, const std::map<GenId, Scalar>& phi0);

// margin used for all kernel identity assertions at a given perturbative order
int check_margin(const Model& m, int order);

// kinetic/symmetry compatibility: (-1)^{|beta|} P K + K^dagger P = 0 on bulk,
// plus graded self-adjointness of the raised operator P
CheckRecord check_pk_condition(const Model& m);

// helper shared by checks: the operator form of P (index raised with the
// signed duality)
Kernel raised_P(const Model& m);

// re-derive P and K from S0 and theta0 (after editing a model in place)
void refresh_kernels(Model& m);

}  // namespace latbv
