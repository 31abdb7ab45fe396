#pragma once

#include "latbv/model.hpp"

#include <memory>

namespace latbv::testutil {

inline std::shared_ptr<Lattice> small_lattice(int nt = 10, int nx = 4) {
  return std::make_shared<Lattice>(nt, nx, Rat(1), Rat(1));
}

inline Model em(int nt = 10, int nx = 4, Rat xi = Rat(1), bool with_current = true) {
  Window w = Window::standard(2, 2);
  return build_em_model(small_lattice(nt, nx), w,
                        xi, with_current ? std::optional<std::uint64_t>(7) : std::nullopt);
}

inline Model scalar(Rat mass = Rat(0), Rat g3 = Rat(0), Rat g4 = Rat(1), int nt = 10, int nx = 4) {
  Window w = Window::standard(2, 2);
  return build_scalar_model(small_lattice(nt, nx), w, mass, g3, g4);
}

}  // namespace latbv::testutil
