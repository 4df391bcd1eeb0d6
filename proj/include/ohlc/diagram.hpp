#pragma once

#include <optional>
#include <vector>

#include "ohlc/core.hpp"

namespace ohlc {

enum class DiagramKind { variance, volatility };

// Tabulated estimator diagram phi(theta, phi) or psi(theta, phi) over the
// admissible angular domain.  Rows run over phi in [-pi/2, 0]; within a row
// theta is reparametrized to u in [0, 1] between the per-phi bounds
// s(phi) <= theta <= c(phi), so the curved domain maps to a rectangle.
// Values are read back with bicubic (Catmull-Rom) interpolation.
struct DiagramTable {
    DiagramKind kind = DiagramKind::variance;
    std::optional<double> gamma0;  // reference drift; absent for classic diagrams
    int n_phi = 0;
    int n_theta = 0;
    std::vector<double> values;  // row-major [i_phi * n_theta + i_theta]

    // Diagram value at (theta, phi); (theta, phi) outside the admissible
    // domain -> std::domain_error.
    double value_at(double theta, double phi) const;

    // Grid coordinates of node (i_phi, i_theta).
    double phi_node(int i_phi) const;
    double theta_node(int i_phi, int i_theta) const;
};

}  // namespace ohlc
