#include "ohlc/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ohlc {

void validate_bar(const OhlcBar& bar) {
    if (!(bar.horizon > 0.0))
        throw std::domain_error("horizon <= 0");
    if (bar.high < std::max(bar.open, bar.close))
        throw std::domain_error("high < max(open, close)");
    if (bar.low > std::min(bar.open, bar.close))
        throw std::domain_error("low > min(open, close)");
}

NormalizedTriple normalize_bar(const OhlcBar& bar, double sigma) {
    if (!(sigma > 0.0))
        throw std::domain_error("sigma <= 0");
    validate_bar(bar);
    const double scale = sigma * std::sqrt(bar.horizon);
    return {(bar.high - bar.open) / scale, (bar.low - bar.open) / scale,
            (bar.close - bar.open) / scale};
}

SphericalTriple to_spherical(const NormalizedTriple& t) {
    const double r = std::sqrt(t.h_bar * t.h_bar + t.l_bar * t.l_bar + t.c_bar * t.c_bar);
    if (r == 0.0)
        return {0.0, 0.0, 0.0, true};
    const double theta = std::asin(t.c_bar / r);
    const double phi = std::atan2(t.l_bar, t.h_bar);
    return {r, theta, phi, false};
}

NormalizedTriple from_spherical(const SphericalTriple& s) {
    if (!(s.r >= 0.0))
        throw std::domain_error("negative radius");
    if (s.r == 0.0)
        return {0.0, 0.0, 0.0};
    constexpr double kSlack = 1e-12;
    const double half_pi = std::asin(1.0);
    if (s.phi < -half_pi - kSlack || s.phi > kSlack)
        throw std::domain_error("phi outside [-pi/2, 0]");
    const double phi = std::clamp(s.phi, -half_pi, 0.0);
    const ThetaBounds b = angular_bounds(phi);
    if (s.theta < b.theta_min - kSlack || s.theta > b.theta_max + kSlack)
        throw std::domain_error("theta outside [s(phi), c(phi)]");
    const double ct = std::cos(s.theta);
    return {s.r * ct * std::cos(phi), s.r * ct * std::sin(phi), s.r * std::sin(s.theta)};
}

ThetaBounds angular_bounds(double phi) {
    const double half_pi = std::asin(1.0);
    if (!(phi >= -half_pi && phi <= 0.0))
        throw std::domain_error("phi outside [-pi/2, 0]");
    return {std::atan(std::sin(phi)), std::atan(std::cos(phi))};
}

}  // namespace ohlc
