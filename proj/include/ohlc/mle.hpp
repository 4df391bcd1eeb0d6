#pragma once

#include "ohlc/core.hpp"
#include "ohlc/density.hpp"
#include "ohlc/estimators.hpp"

namespace ohlc {

struct MlResult {
    double mu_hat = 0.0;
    double sigma_hat = 0.0;
    double d_hat = 0.0;  // sigma_hat^2
    double loglik = 0.0;
    int iterations = 0;
    double bracket_low = 0.0;
    double bracket_high = 0.0;
};

// (close - open) / horizon.
double ml_drift(const OhlcBar& bar);

// Maximizes ln R(H/(s sqrt(T)), L/(s sqrt(T)) | C/(s sqrt(T))) - 3 ln s over
// the bracket [ (H-L)/(10 sqrt(T)), 10 (H-L)/sqrt(T) ] by Brent's method to
// 1e-8 relative bracket width.  Degenerate range (H = L) -> std::domain_error.
MlResult ml_volatility(const OhlcBar& bar, SeriesControl ctl = {});

// sigma_hat^2 of ml_volatility.
double ml_variance(const OhlcBar& bar, SeriesControl ctl = {});

// sigma_hat divided by the precomputed E[s_hat | gamma0] so the estimator is
// unbiased at gamma0.  The gamma0 = 0 constant is frozen from a fixed-seed
// Monte Carlo run at desk scale; other gamma0 are calibrated once per process
// by a smaller fixed-seed run and memoized.
EstimateResult normalized_ml(const OhlcBar& bar, DriftParam gamma0, SeriesControl ctl = {});

}  // namespace ohlc
