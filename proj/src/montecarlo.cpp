#include "ohlc/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "kernels_detail.hpp"

namespace ohlc {

namespace {

// Philox4x32-10 counter-based generator: 128-bit counter, 64-bit key, four
// 32-bit outputs per invocation.  Any (seed, path, block) cell of the stream
// is addressable directly, which makes paths reproducible independently of
// evaluation order or worker count.
constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void philox_round(std::uint32_t c[4], std::uint32_t k0, std::uint32_t k1) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * c[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    c[0] = hi1 ^ c[1] ^ k0;
    c[1] = lo1;
    c[2] = hi0 ^ c[3] ^ k1;
    c[3] = lo0;
}

struct UniformPair {
    double u0, u1;
};

inline double to_unit(std::uint64_t bits) {
    // 53 random bits centered in (0, 1); never returns 0 or 1.
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1p-53;
}

inline UniformPair draw_block(std::uint64_t seed, std::uint64_t path, std::uint64_t block) {
    std::uint32_t c[4] = {static_cast<std::uint32_t>(block),
                          static_cast<std::uint32_t>(block >> 32),
                          static_cast<std::uint32_t>(path),
                          static_cast<std::uint32_t>(path >> 32)};
    std::uint32_t k0 = static_cast<std::uint32_t>(seed);
    std::uint32_t k1 = static_cast<std::uint32_t>(seed >> 32);
    for (int r = 0; r < 10; ++r) {
        philox_round(c, k0, k1);
        k0 += kPhiloxW0;
        k1 += kPhiloxW1;
    }
    const std::uint64_t a = (static_cast<std::uint64_t>(c[1]) << 32) | c[0];
    const std::uint64_t b = (static_cast<std::uint64_t>(c[3]) << 32) | c[2];
    return {to_unit(a), to_unit(b)};
}

constexpr double kTwoPi = 6.283185307179586;

// Student-t attempts get a private block range per step so the rejection
// loop cannot alias a neighbouring step's draws.
constexpr std::uint64_t kAttemptStride = 64;

class InnovationStream {
public:
    InnovationStream(const SimConfig& cfg, std::uint64_t path)
        : seed_(cfg.seed),
          path_(path),
          student_(cfg.innovation == Innovation::student_t),
          nu_(cfg.nu),
          t_scale_(student_ ? std::sqrt((cfg.nu - 2.0) / cfg.nu) : 1.0) {}

    // Unit-variance innovation for 0-based step index j.
    double next(std::uint64_t j) {
        if (!student_) {
            if (have_spare_) {
                have_spare_ = false;
                return spare_;
            }
            const UniformPair u = draw_block(seed_, path_, j >> 1);
            const double r = std::sqrt(-2.0 * std::log(u.u0));
            spare_ = r * std::sin(kTwoPi * u.u1);
            have_spare_ = true;
            return r * std::cos(kTwoPi * u.u1);
        }
        for (std::uint64_t attempt = 0;; ++attempt) {
            const UniformPair u = draw_block(seed_, path_, j * kAttemptStride + attempt);
            const double x = 2.0 * u.u0 - 1.0;
            const double y = 2.0 * u.u1 - 1.0;
            const double w = x * x + y * y;
            if (w > 0.0 && w <= 1.0)
                return t_scale_ * x *
                       std::sqrt(nu_ * (std::pow(w, -2.0 / nu_) - 1.0) / w);
        }
    }

private:
    std::uint64_t seed_;
    std::uint64_t path_;
    bool student_;
    double nu_;
    double t_scale_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

void validate_config(const SimConfig& cfg) {
    if (cfg.steps_N < 2)
        throw std::domain_error("steps_N must be at least 2");
    if (cfg.paths_M < 1)
        throw std::domain_error("paths_M must be at least 1");
    if (cfg.innovation == Innovation::student_t && !(cfg.nu > 2.0))
        throw std::domain_error("student_t innovations require nu > 2");
}

template <typename PerPath>
void for_each_path(long long paths, PerPath&& body) {
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(
        std::min<long long>(workers, std::max<long long>(paths, 1)));
    if (workers <= 1) {
        for (long long p = 0; p < paths; ++p)
            body(p);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const long long chunk = (paths + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const long long begin = w * chunk;
        const long long end = std::min<long long>(begin + chunk, paths);
        if (begin >= end)
            break;
        pool.emplace_back([&body, begin, end] {
            for (long long p = begin; p < end; ++p)
                body(p);
        });
    }
    for (std::thread& t : pool)
        t.join();
}

MomentResult moments_of(const std::vector<double>& values) {
    MomentResult res;
    const std::size_t m = values.size();
    res.mean = detail::pairwise_sum(values) / static_cast<double>(m);
    if (m > 1) {
        std::vector<double> sq(m);
        for (std::size_t i = 0; i < m; ++i) {
            const double d = values[i] - res.mean;
            sq[i] = d * d;
        }
        res.variance = detail::pairwise_sum(sq) / static_cast<double>(m - 1);
    }
    res.std_error = std::sqrt(res.variance / static_cast<double>(m));
    return res;
}

}  // namespace

PathSummary simulate_path(const SimConfig& cfg, std::uint64_t path_id) {
    validate_config(cfg);
    InnovationStream stream(cfg, path_id);
    const long long n_steps = cfg.steps_N;
    const double drift_step = cfg.gamma.gamma / static_cast<double>(n_steps);
    const double diff_step = 1.0 / std::sqrt(static_cast<double>(n_steps));
    double v = 0.0;
    double hi = 0.0;  // extremes over the closed path, v(0) = 0 included
    double lo = 0.0;
    for (long long n = 0; n < n_steps; ++n) {
        v += drift_step + diff_step * stream.next(static_cast<std::uint64_t>(n));
        hi = std::max(hi, v);
        lo = std::min(lo, v);
    }
    return {NormalizedTriple{hi, lo, v}, path_id};
}

MomentResult mc_estimator_moments(const SimConfig& cfg, const CanonicalEstimator& estimator) {
    return moments_of(mc_estimator_samples(cfg, estimator));
}

std::vector<double> mc_estimator_samples(const SimConfig& cfg,
                                         const CanonicalEstimator& estimator) {
    validate_config(cfg);
    std::vector<double> values(static_cast<std::size_t>(cfg.paths_M));
    for_each_path(cfg.paths_M, [&](long long p) {
        values[static_cast<std::size_t>(p)] =
            estimator(simulate_path(cfg, static_cast<std::uint64_t>(p)).triple);
    });
    return values;
}

std::vector<StudyRow> convergence_study(const std::vector<double>& gammas,
                                        const std::vector<long long>& step_counts,
                                        long long paths_M, std::uint64_t seed,
                                        const std::vector<NamedEstimator>& estimators) {
    std::vector<StudyRow> rows;
    for (double gamma : gammas) {
        for (long long n : step_counts) {
            SimConfig cfg;
            cfg.steps_N = n;
            cfg.paths_M = paths_M;
            cfg.gamma = DriftParam{gamma};
            cfg.seed = seed;
            validate_config(cfg);
            // One simulation per (gamma, N) cell shared by all estimators.
            std::vector<std::vector<double>> values(
                estimators.size(), std::vector<double>(static_cast<std::size_t>(paths_M)));
            for_each_path(paths_M, [&](long long p) {
                const PathSummary path = simulate_path(cfg, static_cast<std::uint64_t>(p));
                for (std::size_t e = 0; e < estimators.size(); ++e)
                    values[e][static_cast<std::size_t>(p)] =
                        estimators[e].second(path.triple);
            });
            for (std::size_t e = 0; e < estimators.size(); ++e) {
                const MomentResult mom = moments_of(values[e]);
                rows.push_back({n, estimators[e].first, gamma, mom.mean, mom.variance,
                                mom.std_error});
            }
        }
    }
    return rows;
}

}  // namespace ohlc
