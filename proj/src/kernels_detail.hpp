#pragma once

#include <cstddef>
#include <vector>

namespace ohlc {
namespace detail {

// Gauss-Legendre nodes/weights on [-1, 1].
void leggauss(int n, std::vector<double>& x, std::vector<double>& w);

// Deterministic pairwise reduction; independent of accumulation chunking.
double pairwise_sum(const double* x, std::size_t n);
double pairwise_sum(const std::vector<double>& x);

// All four radial moments of a ray at once (they share the image-term moment
// recurrences).  No domain checks: this is the smooth continuation used for
// diagram tabulation up to the domain edges.
struct GnQuad {
    double g0, g1, g2, g4;
};
GnQuad gn_all(double theta, double phi, double gamma);

// Tensor Gauss-Legendre surface grid: phi panels on [-pi/2, 0], theta panels
// between the per-phi bounds, weight = w_phi * w_theta * cos(theta).
struct AngularGrid {
    int n_phi = 0;
    int n_theta = 0;
    std::vector<double> theta;
    std::vector<double> phi;
    std::vector<double> weight;
};
const AngularGrid& angular_grid(int n_phi, int n_theta);

// Memoized gn_all over a grid for a given drift.
const std::vector<GnQuad>& gn_on_grid(double gamma, const AngularGrid& grid);

double erfcx(double x);

}  // namespace detail
}  // namespace ohlc
