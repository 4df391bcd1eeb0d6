#pragma once

#include <stdexcept>
#include <string>

#include "ohlc/core.hpp"

namespace ohlc {

// Truncation control for the image series over m = 0, +-1, +-2, ...
struct SeriesControl {
    int max_terms = 64;
    double tail_tol = 1e-12;
};

// Raised when an image series fails to converge within max_terms.
class series_error : public std::runtime_error {
public:
    series_error(const std::string& what, double last_term)
        : std::runtime_error(what), last_term_(last_term) {}
    double last_term() const noexcept { return last_term_; }

private:
    double last_term_;
};

// Heat kernel exp(-x^2/(2 tau)) / sqrt(2 pi tau); tau <= 0 -> std::domain_error.
double gaussian_kernel(double x, double tau);

// Unit-mass Gaussian centered at gamma: pdf of the normalized close.
double close_pdf(double c, DriftParam gamma);

// Pdf of the normalized high given the close, 2(2h-c) e^{2h(c-h)};
// returns 0 for h < max(0, c).
double cond_high_pdf(double h, double c);

// ((c-2h)^2 - 1) e^{2h(c-h)}; building block of the high/low series.
double d_kernel(double h, double c);

// Joint pdf of (high, low) given the close,
//   4 sum_m m [ m D(m(h-l), c) + (1-m) D(m(h-l)+l, c) ].
// Outside the support (h > 0, l < 0, l < c < h fails) -> 0.
// When h-l is small enough that the true value underflows double precision
// the series is skipped and 0 is returned with *underflow set.
double cond_high_low_pdf(double h, double l, double c, SeriesControl ctl = {},
                         bool* underflow = nullptr);

// close_pdf(c; gamma) * cond_high_low_pdf(h, l, c).  Support conventions as
// above; integrates to 1 over the support.
double joint_pdf(const NormalizedTriple& t, DriftParam gamma, SeriesControl ctl = {});

// Absorbed-at-h transition density g(c - gamma tau, tau)
// - e^{2 h gamma} g(c - 2h - gamma tau, tau); vanishes at c = h.
double single_boundary_density(double c, double h, double tau, DriftParam gamma);

// Transition density absorbed at two moving boundaries c = h + u tau (above)
// and c = l + v tau (below), by the reflection image series; vanishes on both
// boundaries.  Outside (l + v tau, h + u tau), or h <= 0, or l >= 0 -> 0.
double two_boundary_density(double c, double h, double l, double tau, DriftParam gamma,
                            double u, double v, SeriesControl ctl = {});

// Joint pdf of dimensional (high-open, low-open, close-open) = (eta, lambda, xi)
// for drift mu, volatility sigma over horizon T:
//   (1/(sigma^3 T^{3/2})) Qbar(./ (sigma sqrt(T)); (mu/sigma) sqrt(T)).
double dimensional_joint_pdf(double eta, double lambda, double xi, double mu,
                             double sigma, double T, SeriesControl ctl = {});

}  // namespace ohlc
