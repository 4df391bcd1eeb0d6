#include "ohlc/mle.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

#include "ohlc/montecarlo.hpp"

namespace ohlc {

namespace {

// Sample mean of s_hat_ML at gamma0 under the continuous model, estimated by
// a fixed desk-scale run (N = 1e5 steps, M = 1e5 paths, seed 3) of the
// bundled engine; this is the gamma0 = 0 normalization of normalized_ml.
constexpr double kMlVolatilityMean0 = 0.91617130518759093;

struct BrentResult {
    double x = 0.0;
    double fx = 0.0;
    int iterations = 0;
};

// Brent minimization on [lo, hi] to the given relative x-tolerance.
template <typename F>
BrentResult brent_minimize(F f, double lo, double hi, double rel_tol) {
    constexpr double golden = 0.3819660112501051;
    double x = lo + golden * (hi - lo);
    double w = x, v = x;
    double fx = f(x);
    double fw = fx, fv = fx;
    double delta = 0.0, delta2 = 0.0;
    BrentResult res;
    for (int iter = 0; iter < 200; ++iter) {
        res.iterations = iter + 1;
        const double mid = 0.5 * (lo + hi);
        const double fract1 = rel_tol * std::abs(x) + rel_tol / 4.0;
        const double fract2 = 2.0 * fract1;
        if (std::abs(x - mid) <= fract2 - 0.5 * (hi - lo))
            break;
        double d = 0.0;
        if (std::abs(delta2) > fract1) {
            // Parabolic fit through (x, w, v); fall back to golden section
            // when the step is unstable or leaves the bracket.
            const double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0)
                p = -p;
            q = std::abs(q);
            const double td = delta2;
            delta2 = delta;
            if (std::abs(p) >= std::abs(0.5 * q * td) || p <= q * (lo - x) ||
                p >= q * (hi - x)) {
                delta2 = (x >= mid) ? lo - x : hi - x;
                d = golden * delta2;
            } else {
                d = p / q;
                const double u = x + d;
                if (u - lo < fract2 || hi - u < fract2)
                    d = (mid - x) < 0.0 ? -fract1 : fract1;
            }
        } else {
            delta2 = (x >= mid) ? lo - x : hi - x;
            d = golden * delta2;
        }
        delta = d;
        const double u =
            std::abs(d) >= fract1 ? x + d : (d > 0.0 ? x + fract1 : x - fract1);
        const double fu = f(u);
        if (fu <= fx) {
            if (u >= x)
                lo = x;
            else
                hi = x;
            v = w;
            w = x;
            x = u;
            fv = fw;
            fw = fx;
            fx = fu;
        } else {
            if (u < x)
                lo = u;
            else
                hi = u;
            if (fu <= fw || w == x) {
                v = w;
                w = u;
                fv = fw;
                fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u;
                fv = fu;
            }
        }
    }
    res.x = x;
    res.fx = fx;
    return res;
}

double calibration_mean(double gamma0) {
    static std::map<double, double> cache;
    static std::mutex mutex;
    if (gamma0 == 0.0)
        return kMlVolatilityMean0;
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find(gamma0);
        if (it != cache.end())
            return it->second;
    }
    SimConfig cfg;
    cfg.steps_N = 20000;
    cfg.paths_M = 20000;
    cfg.gamma = DriftParam{gamma0};
    cfg.seed = 3;
    const MomentResult mom =
        mc_estimator_moments(cfg, [](const NormalizedTriple& t) {
            const OhlcBar bar{0.0, t.h_bar, t.l_bar, t.c_bar, 1.0};
            return ml_volatility(bar).sigma_hat;
        });
    std::lock_guard<std::mutex> lock(mutex);
    return cache.emplace(gamma0, mom.mean).first->second;
}

}  // namespace

double ml_drift(const OhlcBar& bar) {
    validate_bar(bar);
    return (bar.close - bar.open) / bar.horizon;
}

MlResult ml_volatility(const OhlcBar& bar, SeriesControl ctl) {
    validate_bar(bar);
    const double H = bar.high - bar.open;
    const double L = bar.low - bar.open;
    const double C = bar.close - bar.open;
    const double T = bar.horizon;
    const double range = H - L;
    if (range <= 0.0)
        throw std::domain_error("degenerate bar: high equals low");

    const double sqrt_t = std::sqrt(T);
    const double lo = range / (10.0 * sqrt_t);
    const double hi = 10.0 * range / sqrt_t;

    // Negative log-likelihood profile in sigma (drift already maximized out).
    // Past the point where the conditional range density underflows, a
    // monotone ramp keeps the search pointed back toward the interior.
    const auto objective = [&](double s) {
        const double scale = s * sqrt_t;
        const double r = cond_high_low_pdf(H / scale, L / scale, C / scale, ctl);
        if (r <= 0.0 || range / scale < 0.5)
            return 1e6 * (1.0 + scale / range);
        return -(std::log(r) - 3.0 * std::log(s));
    };

    const BrentResult opt = brent_minimize(objective, lo, hi, 1e-8);

    MlResult res;
    res.mu_hat = C / T;
    res.sigma_hat = opt.x;
    res.d_hat = opt.x * opt.x;
    res.iterations = opt.iterations;
    res.bracket_low = lo;
    res.bracket_high = hi;
    // Full log-likelihood of the dimensional triple at (mu_hat, sigma_hat):
    // the close factor is exp(0)/sqrt(2 pi T) at the ML drift.
    res.loglik = -opt.fx - 1.5 * std::log(T) - 0.5 * std::log(2.0 * std::acos(-1.0));
    return res;
}

double ml_variance(const OhlcBar& bar, SeriesControl ctl) {
    return ml_volatility(bar, ctl).d_hat;
}

EstimateResult normalized_ml(const OhlcBar& bar, DriftParam gamma0, SeriesControl ctl) {
    const MlResult ml = ml_volatility(bar, ctl);
    const double mean = calibration_mean(gamma0.gamma);
    EstimateResult res;
    res.point = ml.sigma_hat / mean;
    res.canonical = res.point;  // sigma = 1 reference scale
    res.diagram_value = 0.0;
    res.negative = false;
    return res;
}

}  // namespace ohlc
