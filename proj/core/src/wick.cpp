#include "latbv/wick.hpp"

#include <cmath>
#include <numbers>

namespace latbv {

KernelF wick_two_point(const Model& m) {
  if (m.name != "scalar") fail(Err::EigenFailure, "Wick kernel is built for the scalar model");
  const Lattice& lat = *m.lat;
  int nx = lat.nx(), nt = lat.nt();
  double dt = static_cast<double>(lat.dt());
  double dx = static_cast<double>(lat.dx());
  double mass = 0;
  {
    // recover the mass from the P diagonal: P(v,v) = 2/dt^2 - 2/dx^2 - m^2
    GenId g = m.field_gen(0, lat.vertex(nt / 2, 0));
    Scalar diag = m.P.get(g, g);
    double d = static_cast<double>(Rat(diag.re));
    mass = std::sqrt(2.0 / (dt * dt) - 2.0 / (dx * dx) - d);
    if (!(mass > 0)) fail(Err::EigenFailure, "Wick kernel needs a positive mass");
  }

  // per-mode discrete dispersion: cos(theta_k) = 1 - dt^2 omega_k^2 / 2
  std::vector<double> theta(nx), weight(nx);
  double mu = dt * dx;
  for (int k = 0; k < nx; ++k) {
    double kappa2 = std::pow(2.0 / dx * std::sin(std::numbers::pi * k / nx), 2);
    double w2 = kappa2 + mass * mass;
    double c = 1.0 - dt * dt * w2 / 2.0;
    if (c <= -1.0 || c >= 1.0) fail(Err::EigenFailure, "mode frequency outside stable range");
    theta[k] = std::acos(c);
    weight[k] = dt * dt / (mu * mu * 2.0 * std::sin(theta[k]));
  }

  KernelF out;
  const std::complex<double> i1(0.0, 1.0);
  for (int t = 0; t < nt; ++t)
    for (int x = 0; x < nx; ++x) {
      GenId gi = m.field_gen(0, lat.vertex(t, x));
      for (int s = 0; s < nt; ++s)
        for (int y = 0; y < nx; ++y) {
          GenId gj = m.field_gen(0, lat.vertex(s, y));
          std::complex<double> v(0);
          for (int k = 0; k < nx; ++k) {
            double q = 2.0 * std::numbers::pi * k / nx;
            v += weight[k] * std::exp(i1 * (q * (x - y))) * std::exp(-i1 * (theta[k] * (t - s)));
          }
          v /= static_cast<double>(nx);
          out.e[{gi, gj}] = v;
        }
    }
  return out;
}

std::vector<CheckRecord> check_two_point_fp(const Model& m, const KernelF& omega,
                                            const PropagatorSet& props, double tol) {
  std::vector<CheckRecord> out;
  int extra = check_margin(m, 0) + m.stencil_radius;
  auto bulk = [&](GenId g) { return m.bulk_gen(g, extra); };

  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return std::string(buf);
  };

  {
    CheckRecord rec;
    rec.id = "wick_antisymmetric_part";
    rec.anchor = "omega minus swap equals i * causal propagator (mode sum)";
    double worst = 0;
    for (const auto& [ij, v] : omega.e) {
      if (!bulk(ij.first) || !bulk(ij.second)) continue;
      std::complex<double> asym = v - omega.get(ij.second, ij.first);
      Scalar d = props.causal.get(ij.first, ij.second);
      std::complex<double> target(static_cast<double>(d.re), static_cast<double>(d.im));
      target *= std::complex<double>(0, 1);
      worst = std::max(worst, std::abs(asym - target));
    }
    rec.defect = fmt(worst);
    rec.status = worst < tol ? "PASS" : "FAIL";
    out.push_back(rec);
  }
  {
    CheckRecord rec;
    rec.id = "wick_bisolution";
    rec.anchor = "P omega = 0 on bulk rows (floating point)";
    double worst = 0;
    // group omega by row for the composition
    for (GenId i = 0; i < m.tab->size(); ++i) {
      if (!m.tab->is_field(i) || !bulk(i)) continue;
      // (P omega)[i][j] = sum_k P[i][k] mu Omega[k][j]
      std::map<GenId, std::complex<double>> acc;
      for (const auto& [ik, pv] : m.P.entries()) {
        if (ik.first != i) continue;
        double pw = static_cast<double>(Rat(pv.re)) * static_cast<double>(m.tab->info(ik.second).mu);
        for (const auto& [kj, ov] : omega.e) {
          if (kj.first != ik.second) continue;
          if (!bulk(kj.second)) continue;
          acc[kj.second] += pw * ov;
        }
      }
      for (const auto& [j, v] : acc) worst = std::max(worst, std::abs(v));
    }
    rec.defect = fmt(worst);
    rec.status = worst < tol ? "PASS" : "FAIL";
    out.push_back(rec);
  }
  {
    CheckRecord rec;
    rec.id = "wick_hermitian";
    rec.anchor = "conj omega[i][j] = omega[j][i]";
    double worst = 0;
    for (const auto& [ij, v] : omega.e) {
      if (!bulk(ij.first) || !bulk(ij.second)) continue;
      worst = std::max(worst, std::abs(std::conj(v) - omega.get(ij.second, ij.first)));
    }
    rec.defect = fmt(worst);
    rec.status = worst < tol ? "PASS" : "FAIL";
    out.push_back(rec);
  }
  return out;
}

}  // namespace latbv
