#pragma once

#include <set>

#include "latbv/model.hpp"

namespace latbv {

enum class Orientation { Retarded, Advanced };

// Exact propagator of the quadratic action by causal elimination in time:
// processes rows of P in (micro-)time order, solving each frontier block for
// all source columns at once. Underdetermined directions at the temporal
// edges of the cutoff window are completed by zero; rows that cannot be
// satisfied raise SingularLeadingBlock.
Kernel green_solve(const Model& m, Orientation orient);

struct PropagatorSet {
  Kernel retarded;
  Kernel advanced;  // graded transpose of retarded
  Kernel causal;    // retarded - advanced
  Kernel dirac;     // (retarded + advanced)/2
  Kernel H;         // symmetric part choice (zero by default)
  Kernel omega;     // (i/2) causal + H
  Kernel feynman;   // i dirac + H
};

PropagatorSet assemble_propagators(const Model& m, const Kernel* H = nullptr);

// spatial sites reachable from src per unit time step (dependency cone with
// the model's certified speed); both args field generators
bool in_forward_cone(const Model& m, GenId target, GenId src);

// symmetry-compatibility of a two-point kernel with K:
// (-1)^{|a|} K kappa + (K kappa^T)-swap summed; zero on bulk points
CheckRecord check_consistency(const Model& m, const Kernel& kappa, const std::string& label,
                              int order = 0);

// two-point function conditions: antisymmetric part = i*causal, bulk
// bisolution, hermiticity; the microlocal condition is reported SKIPPED
std::vector<CheckRecord> check_two_point(const Model& m, const Kernel& omega,
                                         const PropagatorSet& props);

}  // namespace latbv
