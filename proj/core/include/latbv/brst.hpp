#pragma once

#include "latbv/interacting.hpp"

namespace latbv {

// spatially constant time-slice weight; transitions must stay inside the
// cutoff window
struct Profile {
  std::vector<Rat> eta;

  static Profile step(const Model& m, int first_one);
  static Profile bump(const Model& m, int lo, int hi);
  Rat at(int t) const { return eta[static_cast<std::size_t>(t)]; }
};

// span of the free equations of motion on the window: columns marched from
// unit data on two seed slices; odd directions keep formal parameters
struct SolutionSpace {
  std::vector<std::map<GenId, Scalar>> even_basis;
  std::vector<std::map<GenId, Scalar>> odd_basis;
  std::vector<GenId> odd_params;  // one formal odd generator per odd column
};

SolutionSpace solution_space(const Model& m);

// D_I = theta^I . (dS/dphi^I); `full` uses the extended action, otherwise the
// free pair (theta0, S0)
Poly divergence_piece(const Model& m, GenId field, bool full);
Poly smeared_divergence(const Model& m, const Profile& eta, bool full);

// BRST charge from the divergence identity: Q(eta) = -sum eta mu D
Poly charge(const Model& m, const Profile& eta, bool full);

// substitute a random on-shell configuration: even fields -> sampled solution,
// odd fields -> formal combinations of odd solutions, antifields kept
Poly onshell_reduce(const Poly& f, const Model& m, const SolutionSpace& sol, Rng& rng);

// zero for a full-rank set of samples (even_dim + 2 by default)
bool onshell_zero(const Poly& f, const Model& m, const SolutionSpace& sol, std::uint64_t seed,
                  int samples = -1);

CheckRecord check_free_charge(const Model& m, const ProductContext& ctx, const SolutionSpace& sol,
                              const Poly& f, const std::string& tag, std::uint64_t seed);

CheckRecord check_current_conservation(const InteractionContext& ictx, const SolutionSpace& sol,
                                       const Profile& eta, std::uint64_t seed);

CheckRecord check_main_theorem(const InteractionContext& ictx, const SolutionSpace& sol,
                               const Poly& f, const std::string& tag, std::uint64_t seed);

// helper: scale a polynomial by i/hbar (throws if a term lacks the hbar room)
Poly over_ihbar(const Poly& p);

}  // namespace latbv
