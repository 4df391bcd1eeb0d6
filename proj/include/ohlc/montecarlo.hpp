#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ohlc/core.hpp"

namespace ohlc {

enum class Innovation { gaussian, student_t };

struct SimConfig {
    long long steps_N = 100000;
    long long paths_M = 100000;
    DriftParam gamma{0.0};
    std::uint64_t seed = 0;
    Innovation innovation = Innovation::gaussian;
    double nu = 5.0;  // Student-t degrees of freedom; must be > 2
};

struct PathSummary {
    NormalizedTriple triple;
    std::uint64_t path_id = 0;
};

struct MomentResult {
    double mean = 0.0;
    double variance = 0.0;
    double std_error = 0.0;  // standard error of the mean
};

struct StudyRow {
    long long steps_N = 0;
    std::string estimator;
    double gamma = 0.0;
    double mean = 0.0;
    double variance = 0.0;
    double std_error = 0.0;
};

using CanonicalEstimator = std::function<double(const NormalizedTriple&)>;
using NamedEstimator = std::pair<std::string, CanonicalEstimator>;

// Discrete drifted walk v(n) = gamma n/N + (1/sqrt(N)) sum_{k<=n} eps_k with
// unit-variance innovations; the extremes include v(0) = 0.  The generator is
// counter-based and keyed by (seed, path_id, step), so any path is
// reproducible in isolation and results are independent of evaluation order.
PathSummary simulate_path(const SimConfig& cfg, std::uint64_t path_id);

// Sample mean / variance of the estimator over paths_M independent paths,
// with the standard error of the mean.  Reduction is pairwise and
// deterministic.
MomentResult mc_estimator_moments(const SimConfig& cfg, const CanonicalEstimator& estimator);

// Per-path estimator values for paths 0..paths_M-1 (input to distribution
// tests).
std::vector<double> mc_estimator_samples(const SimConfig& cfg, const CanonicalEstimator& estimator);

// mc_estimator_moments over the (gamma, N, estimator) grid at fixed M; one
// row per combination, simulating each (gamma, N) once for all estimators.
std::vector<StudyRow> convergence_study(const std::vector<double>& gammas,
                                        const std::vector<long long>& step_counts,
                                        long long paths_M, std::uint64_t seed,
                                        const std::vector<NamedEstimator>& estimators);

}  // namespace ohlc
