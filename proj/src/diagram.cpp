#include "ohlc/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ohlc {

namespace {

// Catmull-Rom cubic through p1 and p2 with tangent estimates from p0/p3.
double catmull_rom(double p0, double p1, double p2, double p3, double t) {
    const double a = 2.0 * p1;
    const double b = p2 - p0;
    const double c = 2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3;
    const double d = -p0 + 3.0 * (p1 - p2) + p3;
    return 0.5 * (a + t * (b + t * (c + t * d)));
}

// Ghost value one step past the table edge by quadratic extrapolation; gives
// the Catmull-Rom spline a second-order one-sided tangent at the edge instead
// of the zero-order clamped one.
double edge_ghost(double p0, double p1, double p2) {
    return 3.0 * p0 - 3.0 * p1 + p2;
}

double fetch(const double* row, int j, int n) {
    if (j < 0)
        return n >= 3 ? edge_ghost(row[0], row[1], row[2]) : row[0];
    if (j >= n)
        return n >= 3 ? edge_ghost(row[n - 1], row[n - 2], row[n - 3]) : row[n - 1];
    return row[j];
}

}  // namespace

double DiagramTable::value_at(double theta, double phi) const {
    if (n_phi < 2 || n_theta < 2 ||
        values.size() != static_cast<std::size_t>(n_phi) * n_theta)
        throw std::logic_error("diagram table is not populated");
    const double half_pi = std::acos(-1.0) / 2.0;
    if (phi < -half_pi || phi > 0.0)
        throw std::domain_error("(theta, phi) outside the admissible domain");
    const double lo = std::atan(std::sin(phi));
    const double hi = std::atan(std::cos(phi));
    if (theta < lo || theta > hi)
        throw std::domain_error("(theta, phi) outside the admissible domain");

    const double x = (phi + half_pi) / half_pi * (n_phi - 1);
    const double y = (theta - lo) / (hi - lo) * (n_theta - 1);
    const int jx = std::min(static_cast<int>(x), n_phi - 2);
    const int jy = std::min(static_cast<int>(y), n_theta - 2);
    const double tx = x - jx;
    const double ty = y - jy;

    const auto row_value = [&](int ix) {
        const double* row = values.data() + static_cast<std::size_t>(ix) * n_theta;
        return catmull_rom(fetch(row, jy - 1, n_theta), row[jy], row[jy + 1],
                           fetch(row, jy + 2, n_theta), ty);
    };
    double col[4];
    for (int a = 0; a < 4; ++a) {
        const int ix = jx - 1 + a;
        if (ix >= 0 && ix < n_phi) {
            col[a] = row_value(ix);
        } else if (n_phi >= 3) {
            col[a] = ix < 0 ? edge_ghost(row_value(0), row_value(1), row_value(2))
                            : edge_ghost(row_value(n_phi - 1), row_value(n_phi - 2),
                                         row_value(n_phi - 3));
        } else {
            col[a] = row_value(ix < 0 ? 0 : n_phi - 1);
        }
    }
    return catmull_rom(col[0], col[1], col[2], col[3], tx);
}

double DiagramTable::phi_node(int i_phi) const {
    if (i_phi < 0 || i_phi >= n_phi)
        throw std::out_of_range("phi node index out of range");
    const double half_pi = std::acos(-1.0) / 2.0;
    return -half_pi + half_pi * i_phi / (n_phi - 1);
}

double DiagramTable::theta_node(int i_phi, int i_theta) const {
    if (i_theta < 0 || i_theta >= n_theta)
        throw std::out_of_range("theta node index out of range");
    const double phi = phi_node(i_phi);
    const double lo = std::atan(std::sin(phi));
    const double hi = std::atan(std::cos(phi));
    return lo + (hi - lo) * i_theta / (n_theta - 1);
}

}  // namespace ohlc
