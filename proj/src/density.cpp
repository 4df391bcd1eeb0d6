#include "ohlc/density.hpp"

#include <cmath>
#include <stdexcept>

namespace ohlc {
namespace {

constexpr double kSqrt2Pi = 2.5066282746310005;

// exp(a) with silent underflow to 0 instead of denormal noise.
double exp_or_zero(double a) {
    return a > -745.0 ? std::exp(a) : 0.0;
}

// First-eigenvalue bound: the probability that a unit-time bridge stays inside
// a corridor of width d decays like exp(-pi^2/(2 d^2)), so below this width the
// conditional high/low density underflows double precision outright.
constexpr double kUnderflowWidth = 0.084;

}  // namespace

double gaussian_kernel(double x, double tau) {
    if (!(tau > 0.0))
        throw std::domain_error("tau <= 0");
    return std::exp(-x * x / (2.0 * tau)) / (kSqrt2Pi * std::sqrt(tau));
}

double close_pdf(double c, DriftParam gamma) {
    const double z = c - gamma.gamma;
    return std::exp(-z * z / 2.0) / kSqrt2Pi;
}

double cond_high_pdf(double h, double c) {
    if (h < 0.0 || h < c)
        return 0.0;
    return 2.0 * (2.0 * h - c) * exp_or_zero(2.0 * h * (c - h));
}

double d_kernel(double h, double c) {
    const double q = c - 2.0 * h;
    return (q * q - 1.0) * exp_or_zero(2.0 * h * (c - h));
}

double cond_high_low_pdf(double h, double l, double c, SeriesControl ctl, bool* underflow) {
    if (underflow)
        *underflow = false;
    if (!(h > 0.0) || !(l < 0.0) || !(c > l) || !(c < h))
        return 0.0;
    const double d = h - l;
    if (d < kUnderflowWidth) {
        if (underflow)
            *underflow = true;
        return 0.0;
    }
    double sum = 0.0;
    int small_run = 0;
    double last = 0.0;
    for (int m = 1; m <= ctl.max_terms; ++m) {
        const double md = m * d;
        double t = static_cast<double>(m) * m * (d_kernel(md, c) + d_kernel(-md, c));
        t += static_cast<double>(m) * (1.0 - m) * d_kernel(md + l, c);
        t -= static_cast<double>(m) * (1.0 + m) * d_kernel(-md + l, c);
        sum += t;
        last = t;
        if (std::abs(t) <= ctl.tail_tol * std::abs(sum))
            ++small_run;
        else
            small_run = 0;
        if (small_run >= 2) {
            // Cancellation can leave a negative residue of order 1e-14 where
            // the true density is far below that; clamp to the support.
            return sum > 0.0 ? 4.0 * sum : 0.0;
        }
    }
    if (d < 0.12) {
        // Non-convergence here only happens for widths whose true density is
        // below the representable range (see kUnderflowWidth).
        if (underflow)
            *underflow = true;
        return 0.0;
    }
    throw series_error("high/low image series not converged", std::abs(last));
}

double joint_pdf(const NormalizedTriple& t, DriftParam gamma, SeriesControl ctl) {
    const double r = cond_high_low_pdf(t.h_bar, t.l_bar, t.c_bar, ctl);
    if (r == 0.0)
        return 0.0;
    return close_pdf(t.c_bar, gamma) * r;
}

double single_boundary_density(double c, double h, double tau, DriftParam gamma) {
    if (!(h > 0.0))
        throw std::domain_error("boundary level h <= 0");
    if (!(tau > 0.0))
        throw std::domain_error("tau <= 0");
    if (c >= h)
        return 0.0;
    const double g = gamma.gamma;
    const double lognorm = -0.5 * std::log(2.0 * std::acos(-1.0) * tau);
    const double x1 = c - g * tau;
    const double x2 = c - 2.0 * h - g * tau;
    const double direct = exp_or_zero(lognorm - x1 * x1 / (2.0 * tau));
    const double image = exp_or_zero(lognorm + 2.0 * h * g - x2 * x2 / (2.0 * tau));
    const double val = direct - image;
    return val > 0.0 ? val : 0.0;
}

double two_boundary_density(double c, double h, double l, double tau, DriftParam gamma,
                            double u, double v, SeriesControl ctl) {
    if (!(tau > 0.0))
        throw std::domain_error("tau <= 0");
    if (!(h > 0.0) || !(l < 0.0))
        return 0.0;
    if (c > h + u * tau || c < l + v * tau)
        return 0.0;
    const double g = gamma.gamma;
    const double d = h - l;
    const double lognorm = -0.5 * std::log(2.0 * std::acos(-1.0) * tau);
    // Reflection images of the free kernel about the moving boundaries
    // c = h + u tau and c = l + v tau.  Each image keeps its amplitude and
    // Gaussian exponent fused so the huge-amplitude / tiny-Gaussian products
    // stay finite.
    const auto term = [&](double expo, double x) {
        return exp_or_zero(expo + lognorm - x * x / (2.0 * tau));
    };
    const auto pair_value = [&](int m) {
        const double mm = static_cast<double>(m);
        const double quad = 2.0 * d * (v - u) * mm * mm;
        const double ea = quad + 2.0 * mm * ((v - g) * h - (u - g) * l);
        const double eb = quad + 2.0 * mm * (h * (g - v) + l * (2.0 * v - u - g)) +
                          2.0 * l * (g - v);
        return term(ea, c - g * tau + 2.0 * d * mm) -
               term(eb, c - g * tau - 2.0 * l - 2.0 * d * mm);
    };
    double sum = pair_value(0);
    int small_run = 0;
    double last = 0.0;
    for (int m = 1; m <= ctl.max_terms; ++m) {
        const double t = pair_value(m) + pair_value(-m);
        sum += t;
        last = t;
        if (std::abs(t) <= ctl.tail_tol * std::abs(sum))
            ++small_run;
        else
            small_run = 0;
        if (small_run >= 2)
            return sum;
    }
    throw series_error("two-boundary image series not converged", std::abs(last));
}

double dimensional_joint_pdf(double eta, double lambda, double xi, double mu, double sigma,
                             double T, SeriesControl ctl) {
    if (!(sigma > 0.0))
        throw std::domain_error("sigma <= 0");
    if (!(T > 0.0))
        throw std::domain_error("T <= 0");
    const double scale = sigma * std::sqrt(T);
    const NormalizedTriple t{eta / scale, lambda / scale, xi / scale};
    const DriftParam gamma{mu / sigma * std::sqrt(T)};
    return joint_pdf(t, gamma, ctl) / (scale * scale * scale);
}

}  // namespace ohlc
