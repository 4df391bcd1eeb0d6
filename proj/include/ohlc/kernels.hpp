#pragma once

#include <functional>
#include <string>

#include "ohlc/core.hpp"
#include "ohlc/density.hpp"
#include "ohlc/diagram.hpp"

namespace ohlc {

struct QuadratureConfig {
    // Radial integrals on [0, inf) are mapped to (0,1) by rho = tan(pi s / 2)
    // and refined adaptively by node doubling until radial_tol.
    std::string radial_rule = "adaptive-tan";
    double radial_tol = 1e-9;
    // Tensor Gauss-Legendre panel counts for the angular domain, refined once
    // (Richardson) when the coarse/fine difference exceeds angular_tol.
    int n_phi = 64;
    int n_theta = 64;
    double angular_tol = 1e-7;
};

struct KernelValue {
    int n = 2;
    double theta = 0.0;
    double phi = 0.0;
    double gamma = 0.0;
    double value = 0.0;
    double est_error = 0.0;
};

// Radial moment of the joint density along the ray (theta, phi):
//   g_n = int_0^inf rho^{2+n} Qbar(rho cos(theta)cos(phi), rho cos(theta)sin(phi),
//                                  rho sin(theta); gamma) drho,  n in {0, 1, 2, 4}.
//
// g_n_series sums closed-form ray integrals of the image terms (erfcx-based
// moment recurrence, exact in gamma) with an Euler-Maclaurin tail; it is the
// fast primary route.  g_n_radial integrates Qbar numerically along the ray
// and serves as the independent cross-check.  Rays on the domain boundary
// return value 0; rays outside -> std::domain_error.
KernelValue g_n_series(int n, double theta, double phi, DriftParam gamma,
                       QuadratureConfig cfg = {});
KernelValue g_n_radial(int n, double theta, double phi, DriftParam gamma,
                       QuadratureConfig cfg = {});

// int_{-pi/2}^0 dphi int_{s(phi)}^{c(phi)} cos(theta) f(theta, phi) dtheta
// by tensor Gauss-Legendre with one Richardson refinement; the cos(theta)
// surface weight is applied internally.
double angular_integral(const std::function<double(double theta, double phi)>& f,
                        QuadratureConfig cfg = {});

// Efficiency functionals.  cal_E = integral of g2^2/g4, cal_F = g1^2/g2, both
// in (0, 1); the cross forms take the numerator kernels at gamma and the
// reference kernels at gamma0, e.g. cal_E_cross = integral of g2(gamma) g2(gamma0)/g4(gamma0).
double cal_E(DriftParam gamma0, QuadratureConfig cfg = {});
double cal_F(DriftParam gamma0, QuadratureConfig cfg = {});
double cal_E_cross(DriftParam gamma, DriftParam gamma0, QuadratureConfig cfg = {});
double cal_M_cross(DriftParam gamma, DriftParam gamma0, QuadratureConfig cfg = {});

// Moments of the canonical estimator with the given variance diagram:
// n=1 -> integral of phi g2 (the mean), n=2 -> integral of phi^2 g4 (the
// second moment); Var = K2 - K1^2.
double k_moments(const DiagramTable& diagram, int n, DriftParam gamma,
                 QuadratureConfig cfg = {});

// Same for a volatility diagram psi: n=1 -> integral of psi g1,
// n=2 -> integral of psi^2 g2.
double s_moments(const DiagramTable& diagram, int n, DriftParam gamma,
                 QuadratureConfig cfg = {});

}  // namespace ohlc
