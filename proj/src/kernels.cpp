#include "ohlc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "kernels_detail.hpp"

namespace ohlc {
namespace detail {

void leggauss(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const double pi = std::acos(-1.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15)
                break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
}

double pairwise_sum(const double* x, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s += x[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

double pairwise_sum(const std::vector<double>& x) {
    return pairwise_sum(x.data(), x.size());
}

double erfcx(double x) {
    // Scaled complementary error function e^{x^2} erfc(x).  The arguments used
    // here stay well inside [-26, 26], where the two product forms below hold
    // full double precision.
    if (x >= 0.0) {
        if (x > 26.0) {
            const double r = 1.0 / x;
            const double r2 = r * r;
            return r * (1.0 - 0.5 * r2 + 0.75 * r2 * r2) / std::sqrt(std::acos(-1.0));
        }
        return std::exp(x * x) * std::erfc(x);
    }
    return 2.0 * std::exp(x * x) - erfcx(-x);
}

namespace {

constexpr double kSqrt2Pi = 2.5066282746310005;

// Ray integrals of one image term:
//   I_n(a, c, gamma) = int_0^inf rho^{2+n} ((2a-c)^2 rho^2 - 1)
//                      exp(-(2a-c)^2 rho^2 / 2 + gamma c rho) drho
// through the Gaussian moment recurrence
//   M_0 = sqrt(pi/(2A)) erfcx(-b/sqrt(2A)),  M_1 = (1 + b M_0)/A,
//   M_{k+1} = (b M_k + k M_{k-1})/A,  A = (2a-c)^2, b = gamma c,
// giving I_n = A M_{4+n} - M_{2+n} for the orders 0, 1, 2, 4 at once.
struct InQuad {
    double i0, i1, i2, i4;
};

InQuad in_all(double a, double c, double b) {
    const double q = 2.0 * a - c;
    const double A = q * q;
    double M[9];
    M[0] = std::sqrt(std::acos(-1.0) / (2.0 * A)) * erfcx(-b / std::sqrt(2.0 * A));
    M[1] = (1.0 + b * M[0]) / A;
    for (int k = 1; k <= 7; ++k)
        M[k + 1] = (b * M[k] + k * M[k - 1]) / A;
    return {A * M[4] - M[2], A * M[5] - M[3], A * M[6] - M[4], A * M[8] - M[6]};
}

struct RayGeom {
    double ht, lt, ct, d, b;
};

// Pair term of the image series at (possibly non-integer) index m, all orders.
GnQuad series_term(const RayGeom& r, double m) {
    GnQuad t{0.0, 0.0, 0.0, 0.0};
    const double md = m * r.d;
    const InQuad p1 = in_all(md, r.ct, r.b);
    const InQuad p2 = in_all(-md, r.ct, r.b);
    const double m2 = m * m;
    t.g0 += m2 * (p1.i0 + p2.i0);
    t.g1 += m2 * (p1.i1 + p2.i1);
    t.g2 += m2 * (p1.i2 + p2.i2);
    t.g4 += m2 * (p1.i4 + p2.i4);
    const double cf = m * (1.0 - m);
    if (cf != 0.0) {
        const InQuad p3 = in_all(md + r.lt, r.ct, r.b);
        t.g0 += cf * p3.i0;
        t.g1 += cf * p3.i1;
        t.g2 += cf * p3.i2;
        t.g4 += cf * p3.i4;
    }
    const double cg = m * (1.0 + m);
    const InQuad p4 = in_all(-md + r.lt, r.ct, r.b);
    t.g0 -= cg * p4.i0;
    t.g1 -= cg * p4.i1;
    t.g2 -= cg * p4.i2;
    t.g4 -= cg * p4.i4;
    return t;
}

struct Gl32 {
    std::vector<double> x, w;
    Gl32() { leggauss(32, x, w); }
};
const Gl32& gl32() {
    static const Gl32 g;
    return g;
}

}  // namespace

GnQuad gn_all(double theta, double phi, double gamma) {
    RayGeom r;
    r.ht = std::cos(theta) * std::cos(phi);
    r.lt = std::cos(theta) * std::sin(phi);
    r.ct = std::sin(theta);
    r.d = r.ht - r.lt;
    r.b = gamma * r.ct;

    constexpr int kTerms = 24;
    GnQuad sum{0.0, 0.0, 0.0, 0.0};
    for (int m = 1; m <= kTerms; ++m) {
        const GnQuad t = series_term(r, static_cast<double>(m));
        sum.g0 += t.g0;
        sum.g1 += t.g1;
        sum.g2 += t.g2;
        sum.g4 += t.g4;
    }
    // Euler-Maclaurin tail over real m:
    //   sum_{m>M} t(m) = int_{M+1/2}^inf t + t'(M+1/2)/24 + O(t''').
    // The integral maps to u in (0,1) by m = (M+1/2)/u.
    const double a = kTerms + 0.5;
    const Gl32& g = gl32();
    GnQuad tail{0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < g.x.size(); ++i) {
        const double u = 0.5 + 0.5 * g.x[i];
        const double wu = 0.5 * g.w[i] * a / (u * u);
        const GnQuad t = series_term(r, a / u);
        tail.g0 += wu * t.g0;
        tail.g1 += wu * t.g1;
        tail.g2 += wu * t.g2;
        tail.g4 += wu * t.g4;
    }
    const double h = 0.25;
    const GnQuad tp = series_term(r, a + h);
    const GnQuad tm = series_term(r, a - h);
    const double pref = 4.0 / kSqrt2Pi * std::exp(-gamma * gamma / 2.0);
    GnQuad out;
    out.g0 = pref * (sum.g0 + tail.g0 + (tp.g0 - tm.g0) / (2.0 * h) / 24.0);
    out.g1 = pref * (sum.g1 + tail.g1 + (tp.g1 - tm.g1) / (2.0 * h) / 24.0);
    out.g2 = pref * (sum.g2 + tail.g2 + (tp.g2 - tm.g2) / (2.0 * h) / 24.0);
    out.g4 = pref * (sum.g4 + tail.g4 + (tp.g4 - tm.g4) / (2.0 * h) / 24.0);
    return out;
}

namespace {

std::mutex cache_mutex;

}  // namespace

const AngularGrid& angular_grid(int n_phi, int n_theta) {
    static std::map<std::pair<int, int>, AngularGrid> cache;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find({n_phi, n_theta});
    if (it != cache.end())
        return it->second;
    AngularGrid grid;
    grid.n_phi = n_phi;
    grid.n_theta = n_theta;
    const double half_pi = std::acos(-1.0) / 2.0;
    std::vector<double> xp, wp, xt, wt;
    leggauss(n_phi, xp, wp);
    leggauss(n_theta, xt, wt);
    grid.theta.reserve(static_cast<std::size_t>(n_phi) * n_theta);
    grid.phi.reserve(grid.theta.capacity());
    grid.weight.reserve(grid.theta.capacity());
    for (int j = 0; j < n_phi; ++j) {
        const double phi = -half_pi / 2.0 + xp[j] * half_pi / 2.0;
        const double wphi = wp[j] * half_pi / 2.0;
        const double lo = std::atan(std::sin(phi));
        const double hi = std::atan(std::cos(phi));
        const double mid = (hi + lo) / 2.0;
        const double half = (hi - lo) / 2.0;
        for (int i = 0; i < n_theta; ++i) {
            const double theta = mid + half * xt[i];
            grid.theta.push_back(theta);
            grid.phi.push_back(phi);
            grid.weight.push_back(wphi * wt[i] * half * std::cos(theta));
        }
    }
    return cache.emplace(std::make_pair(n_phi, n_theta), std::move(grid)).first->second;
}

const std::vector<GnQuad>& gn_on_grid(double gamma, const AngularGrid& grid) {
    static std::map<std::tuple<double, int, int>, std::vector<GnQuad>> cache;
    const auto key = std::make_tuple(gamma, grid.n_phi, grid.n_theta);
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find(key);
        if (it != cache.end())
            return it->second;
    }
    std::vector<GnQuad> vals(grid.theta.size());
    for (std::size_t i = 0; i < vals.size(); ++i)
        vals[i] = gn_all(grid.theta[i], grid.phi[i], gamma);
    std::lock_guard<std::mutex> lock(cache_mutex);
    return cache.emplace(key, std::move(vals)).first->second;
}

}  // namespace detail

namespace {

void check_order(int n) {
    if (n != 0 && n != 1 && n != 2 && n != 4)
        throw std::invalid_argument("kernel order n must be one of {0, 1, 2, 4}");
}

// -1: outside (error), 0: on the boundary, 1: strictly inside.
int classify_ray(double theta, double phi) {
    const double half_pi = std::acos(-1.0) / 2.0;
    if (phi < -half_pi || phi > 0.0)
        return -1;
    if (phi == -half_pi || phi == 0.0)
        return 0;
    const double lo = std::atan(std::sin(phi));
    const double hi = std::atan(std::cos(phi));
    if (theta < lo || theta > hi)
        return -1;
    if (theta == lo || theta == hi)
        return 0;
    return 1;
}

double pick_order(const detail::GnQuad& q, int n) {
    switch (n) {
        case 0: return q.g0;
        case 1: return q.g1;
        case 2: return q.g2;
        default: return q.g4;
    }
}

// Functional integrands over the cached kernel grids, evaluated at the config
// resolution and once more at double resolution (Richardson step); the finer
// value is returned.
template <typename F>
double refined_grid_integral(const QuadratureConfig& cfg, F&& node_value) {
    double coarse = 0.0;
    double fine = 0.0;
    for (int level = 0; level < 2; ++level) {
        const int np = cfg.n_phi << level;
        const int nt = cfg.n_theta << level;
        const detail::AngularGrid& grid = detail::angular_grid(np, nt);
        std::vector<double> terms(grid.theta.size());
        for (std::size_t i = 0; i < terms.size(); ++i)
            terms[i] = grid.weight[i] * node_value(grid, i);
        (level == 0 ? coarse : fine) = detail::pairwise_sum(terms);
    }
    (void)coarse;
    return fine;
}

template <typename F>
double refined_kernel_integral(double gamma, const QuadratureConfig& cfg, F&& f) {
    return refined_grid_integral(cfg, [&](const detail::AngularGrid& grid, std::size_t i) {
        const detail::GnQuad& q = detail::gn_on_grid(gamma, grid)[i];
        return f(q, grid.theta[i], grid.phi[i]);
    });
}

}  // namespace

KernelValue g_n_series(int n, double theta, double phi, DriftParam gamma, QuadratureConfig cfg) {
    (void)cfg;
    check_order(n);
    const int cls = classify_ray(theta, phi);
    if (cls < 0)
        throw std::domain_error("(theta, phi) outside the admissible domain");
    KernelValue kv{n, theta, phi, gamma.gamma, 0.0, 0.0};
    if (cls == 0)
        return kv;
    const detail::GnQuad q = detail::gn_all(theta, phi, gamma.gamma);
    kv.value = std::max(pick_order(q, n), 0.0);
    kv.est_error = 1e-11 * std::max(kv.value, 1.0);
    return kv;
}

KernelValue g_n_radial(int n, double theta, double phi, DriftParam gamma, QuadratureConfig cfg) {
    check_order(n);
    const int cls = classify_ray(theta, phi);
    if (cls < 0)
        throw std::domain_error("(theta, phi) outside the admissible domain");
    KernelValue kv{n, theta, phi, gamma.gamma, 0.0, 0.0};
    if (cls == 0)
        return kv;
    const double ht = std::cos(theta) * std::cos(phi);
    const double lt = std::cos(theta) * std::sin(phi);
    const double ct = std::sin(theta);
    const double half_pi = std::acos(-1.0) / 2.0;
    const auto integrand = [&](double s) {
        const double rho = std::tan(half_pi * s);
        const double jac = half_pi * (1.0 + rho * rho);
        const NormalizedTriple t{rho * ht, rho * lt, rho * ct};
        const double q = joint_pdf(t, gamma);
        if (q == 0.0)
            return 0.0;
        return jac * std::pow(rho, 2 + n) * q;
    };
    double prev = 0.0;
    double val = 0.0;
    double err = 0.0;
    bool ok = false;
    for (int nodes = 64; nodes <= 1024; nodes *= 2) {
        std::vector<double> x, w;
        detail::leggauss(nodes, x, w);
        std::vector<double> terms(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            terms[i] = w[i] * 0.5 * integrand(0.5 + 0.5 * x[i]);
        val = detail::pairwise_sum(terms);
        if (nodes > 64) {
            err = std::abs(val - prev);
            if (err <= cfg.radial_tol * std::abs(val) + 1e-13) {
                ok = true;
                break;
            }
        }
        prev = val;
    }
    if (!ok)
        throw std::runtime_error("radial quadrature not converged (partial value " +
                                 std::to_string(val) + ")");
    kv.value = std::max(val, 0.0);
    kv.est_error = err;
    return kv;
}

double angular_integral(const std::function<double(double, double)>& f, QuadratureConfig cfg) {
    double prev = 0.0;
    double val = 0.0;
    for (int level = 0; level < 3; ++level) {
        const int np = cfg.n_phi << level;
        const int nt = cfg.n_theta << level;
        const detail::AngularGrid& grid = detail::angular_grid(np, nt);
        std::vector<double> terms(grid.theta.size());
        for (std::size_t i = 0; i < terms.size(); ++i)
            terms[i] = grid.weight[i] * f(grid.theta[i], grid.phi[i]);
        val = detail::pairwise_sum(terms);
        if (level > 0 && std::abs(val - prev) <= cfg.angular_tol * std::abs(val))
            return val;
        prev = val;
    }
    return val;
}

double cal_E(DriftParam gamma0, QuadratureConfig cfg) {
    return refined_kernel_integral(gamma0.gamma, cfg,
                                   [](const detail::GnQuad& q, double, double) {
                                       return q.g2 * q.g2 / q.g4;
                                   });
}

double cal_F(DriftParam gamma0, QuadratureConfig cfg) {
    return refined_kernel_integral(gamma0.gamma, cfg,
                                   [](const detail::GnQuad& q, double, double) {
                                       return q.g1 * q.g1 / q.g2;
                                   });
}

double cal_E_cross(DriftParam gamma, DriftParam gamma0, QuadratureConfig cfg) {
    return refined_grid_integral(cfg, [&](const detail::AngularGrid& grid, std::size_t i) {
        const detail::GnQuad& qa = detail::gn_on_grid(gamma.gamma, grid)[i];
        const detail::GnQuad& qb = detail::gn_on_grid(gamma0.gamma, grid)[i];
        return qa.g2 * qb.g2 / qb.g4;
    });
}

double cal_M_cross(DriftParam gamma, DriftParam gamma0, QuadratureConfig cfg) {
    return refined_grid_integral(cfg, [&](const detail::AngularGrid& grid, std::size_t i) {
        const detail::GnQuad& qa = detail::gn_on_grid(gamma.gamma, grid)[i];
        const detail::GnQuad& qb = detail::gn_on_grid(gamma0.gamma, grid)[i];
        const double ratio = qb.g2 / qb.g4;
        return qa.g4 * ratio * ratio;
    });
}

double k_moments(const DiagramTable& diagram, int n, DriftParam gamma, QuadratureConfig cfg) {
    if (n != 1 && n != 2)
        throw std::invalid_argument("k_moments order must be 1 or 2");
    return refined_kernel_integral(gamma.gamma, cfg,
                                   [&](const detail::GnQuad& q, double theta, double phi) {
                                       const double d = diagram.value_at(theta, phi);
                                       return n == 1 ? d * q.g2 : d * d * q.g4;
                                   });
}

double s_moments(const DiagramTable& diagram, int n, DriftParam gamma, QuadratureConfig cfg) {
    if (n != 1 && n != 2)
        throw std::invalid_argument("s_moments order must be 1 or 2");
    return refined_kernel_integral(gamma.gamma, cfg,
                                   [&](const detail::GnQuad& q, double theta, double phi) {
                                       const double d = diagram.value_at(theta, phi);
                                       return n == 1 ? d * q.g1 : d * d * q.g2;
                                   });
}

}  // namespace ohlc
