#pragma once

#include <iosfwd>

#include "ohlc/core.hpp"
#include "ohlc/diagram.hpp"
#include "ohlc/kernels.hpp"

namespace ohlc {

enum class ClassicKind { rs, gk };

struct EstimateResult {
    double point = 0.0;      // variance (units of D) or volatility (units of sigma)
    double canonical = 0.0;  // dimensionless d_hat or s_hat factor (sigma = 1)
    double diagram_value = 0.0;
    bool negative = false;  // flagged, never clamped
};

// Classic closed-form estimators, open-subtracted and divided by the horizon.
// rs:        H(H-C) + L(L-C)               (unbiased for every drift)
// gk:        k1 (H-L)^2 - k2 (C(H+L) - 2HL) - k3 C^2, k = (0.511, 0.019, 0.383)
// parkinson: (H-L)^2 / (4 ln 2)
double rs_variance(const OhlcBar& bar);
double gk_variance(const OhlcBar& bar, bool* negative = nullptr);
double parkinson_variance(const OhlcBar& bar);

// Exact closed-form diagram tabulation for the classic estimators.
DiagramTable classic_diagram(ClassicKind kind);

// Most efficient unbiased diagrams at reference drift gamma0:
//   phi = g2 / (g4 cal_E(gamma0)),  psi = g1 / (g2 cal_F(gamma0)).
DiagramTable efficient_variance_diagram(DriftParam gamma0, QuadratureConfig cfg = {});
DiagramTable efficient_volatility_diagram(DriftParam gamma0, QuadratureConfig cfg = {});

// Minimum variance of unbiased canonical estimators:
//   V(gamma) = 1/cal_E - 1 (variance), W(gamma) = 1/cal_F - 1 (volatility).
double lower_bound_variance(DriftParam gamma, QuadratureConfig cfg = {});
double lower_bound_volatility(DriftParam gamma, QuadratureConfig cfg = {});

// Evaluate a diagram on a bar: variance kind -> R^2 phi(Theta, Phi) / sigma0^2,
// volatility kind -> R psi(Theta, Phi) / sigma0, with sigma0 = sqrt(T) for the
// Wiener model.  canonical carries the same value scaled with sigma0 = sqrt(T)
// regardless of the sigma0 argument.  A degenerate bar (R = 0) -> 0.
EstimateResult apply_diagram(const OhlcBar& bar, const DiagramTable& diagram, double sigma0);

// Canonical estimator value of an already-normalized triple (the form consumed
// by the Monte Carlo engine).
double canonical_estimate(const NormalizedTriple& t, const DiagramTable& diagram);

// Scale the diagram so its estimator is unbiased at gamma (mean divided out);
// idempotent.  Mean <= 0 -> std::domain_error.
DiagramTable renormalize(const DiagramTable& diagram, DriftParam gamma,
                         QuadratureConfig cfg = {});

// Pdf of the canonical variance estimator d_hat = R^2 phi at value u:
//   f(u) = (sqrt(u)/2) int cos(theta) phi^{-3/2} Qbar(sqrt(u/phi) ray; gamma).
// Requires a strictly positive variance diagram.
double estimator_pdf_variance(double u, const DiagramTable& diagram, DriftParam gamma,
                              QuadratureConfig cfg = {});

// Pdf of the canonical volatility estimator s_hat = R psi at value u:
//   p(u) = u^2 int cos(theta) psi^{-3} Qbar(u ray / psi; gamma).
double estimator_pdf_volatility(double u, const DiagramTable& diagram, DriftParam gamma,
                                QuadratureConfig cfg = {});

// CSV export: header `phi,theta,value`, row-major over the grid, 17 significant
// digits.
void write_diagram_csv(const DiagramTable& diagram, std::ostream& out);

}  // namespace ohlc
