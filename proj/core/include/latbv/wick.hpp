#pragma once

#include <complex>

#include "latbv/green.hpp"

namespace latbv {

// floating-point two-point kernel (only the mode-built Wick kernel lives
// outside exact arithmetic)
struct KernelF {
  std::map<std::pair<GenId, GenId>, std::complex<double>> e;
  std::complex<double> get(GenId i, GenId j) const {
    auto it = e.find({i, j});
    return it == e.end() ? std::complex<double>(0) : it->second;
  }
};

// positive-frequency mode sum for the static massive scalar model; exact
// discrete dispersion, so the bisolution property holds to rounding error
KernelF wick_two_point(const Model& m);

// parametrix conditions for the Wick kernel at floating tolerance
std::vector<CheckRecord> check_two_point_fp(const Model& m, const KernelF& omega,
                                            const PropagatorSet& props, double tol = 1e-9);

}  // namespace latbv
