#pragma once

namespace ohlc {

// One bar of log-prices over a single observation interval of length horizon.
// high/low are the extremes of the whole path, so high >= max(open, close)
// and low <= min(open, close).
struct OhlcBar {
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
    double horizon = 1.0;
};

// Open-subtracted bar scaled by sigma*sqrt(T).  Satisfies
// h_bar >= 0 >= l_bar and l_bar <= c_bar <= h_bar.
struct NormalizedTriple {
    double h_bar = 0.0;
    double l_bar = 0.0;
    double c_bar = 0.0;
};

// Geographic coordinates of a normalized triple:
//   h = r cos(theta) cos(phi), l = r cos(theta) sin(phi), c = r sin(theta)
// with -pi/2 <= phi <= 0 and atan(sin phi) <= theta <= atan(cos phi).
// A zero triple has no defined angles and is flagged degenerate.
struct SphericalTriple {
    double r = 0.0;
    double theta = 0.0;
    double phi = 0.0;
    bool degenerate = false;
};

// Normalized drift (mu/sigma)*sqrt(T); the one shape parameter of the model.
struct DriftParam {
    double gamma = 0.0;
};

struct ThetaBounds {
    double theta_min = 0.0;
    double theta_max = 0.0;
};

// Throws std::domain_error naming the violated inequality if the bar is not a
// valid OHLC bar (high < max(open, close), low > min(open, close), or
// horizon <= 0).
void validate_bar(const OhlcBar& bar);

// ((high-open), (low-open), (close-open)) / (sigma * sqrt(horizon)).
// sigma <= 0 or horizon <= 0 -> std::domain_error.
NormalizedTriple normalize_bar(const OhlcBar& bar, double sigma);

SphericalTriple to_spherical(const NormalizedTriple& t);

// Inverse of to_spherical; angles outside the admissible domain ->
// std::domain_error.  r = 0 maps to the zero triple.
NormalizedTriple from_spherical(const SphericalTriple& s);

// (atan(sin phi), atan(cos phi)); phi outside [-pi/2, 0] -> std::domain_error.
ThetaBounds angular_bounds(double phi);

}  // namespace ohlc
