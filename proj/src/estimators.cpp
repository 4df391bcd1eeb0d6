#include "ohlc/estimators.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "kernels_detail.hpp"

namespace ohlc {

namespace {

constexpr double kGk1 = 0.511;
constexpr double kGk2 = 0.019;
constexpr double kGk3 = 0.383;

struct BarTerms {
    double H, L, C, T;
};

BarTerms open_subtracted(const OhlcBar& bar) {
    validate_bar(bar);
    return {bar.high - bar.open, bar.low - bar.open, bar.close - bar.open, bar.horizon};
}

double rs_diagram_value(double theta, double phi) {
    const double ct = std::cos(theta);
    return ct * ct - 0.5 * std::sin(2.0 * theta) * (std::cos(phi) + std::sin(phi));
}

double gk_diagram_value(double theta, double phi) {
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    const double range = std::cos(phi) - std::sin(phi);
    const double cross =
        0.5 * std::sin(2.0 * theta) * (std::cos(phi) + std::sin(phi)) -
        ct * ct * std::sin(2.0 * phi);
    return kGk1 * ct * ct * range * range - kGk2 * cross - kGk3 * st * st;
}

constexpr int kDiagramGrid = 128;

DiagramTable tabulate(DiagramKind kind, std::optional<double> gamma0,
                      const std::function<double(double, double)>& f) {
    DiagramTable t;
    t.kind = kind;
    t.gamma0 = gamma0;
    t.n_phi = kDiagramGrid;
    t.n_theta = kDiagramGrid;
    t.values.resize(static_cast<std::size_t>(kDiagramGrid) * kDiagramGrid);
    for (int i = 0; i < kDiagramGrid; ++i) {
        const double phi = t.phi_node(i);
        for (int j = 0; j < kDiagramGrid; ++j)
            t.values[static_cast<std::size_t>(i) * kDiagramGrid + j] =
                f(t.theta_node(i, j), phi);
    }
    return t;
}

// At the corner rays (theta = 0, phi = 0) and (theta = 0, phi = -pi/2) the
// density vanishes identically along the ray (the close is pinned at the low
// resp. high at zero), so every g_n is 0 and kernel ratios are 0/0.  The
// tabulated diagram stores the continuous extension instead: quadratic
// extrapolation along the adjacent edge row.
void repair_degenerate_corners(DiagramTable& t) {
    const int n = t.n_theta;
    double* last_phi_row = t.values.data() + static_cast<std::size_t>(t.n_phi - 1) * n;
    last_phi_row[0] = 3.0 * last_phi_row[1] - 3.0 * last_phi_row[2] + last_phi_row[3];
    double* first_phi_row = t.values.data();
    first_phi_row[n - 1] =
        3.0 * first_phi_row[n - 2] - 3.0 * first_phi_row[n - 3] + first_phi_row[n - 4];
}

}  // namespace

double rs_variance(const OhlcBar& bar) {
    const BarTerms b = open_subtracted(bar);
    return (b.H * (b.H - b.C) + b.L * (b.L - b.C)) / b.T;
}

double gk_variance(const OhlcBar& bar, bool* negative) {
    const BarTerms b = open_subtracted(bar);
    const double range = b.H - b.L;
    const double v = (kGk1 * range * range -
                      kGk2 * (b.C * (b.H + b.L) - 2.0 * b.H * b.L) -
                      kGk3 * b.C * b.C) /
                     b.T;
    if (negative)
        *negative = v < 0.0;
    return v;
}

double parkinson_variance(const OhlcBar& bar) {
    const BarTerms b = open_subtracted(bar);
    const double range = b.H - b.L;
    return range * range / (4.0 * std::log(2.0) * b.T);
}

DiagramTable classic_diagram(ClassicKind kind) {
    return tabulate(DiagramKind::variance, std::nullopt,
                    kind == ClassicKind::rs ? rs_diagram_value : gk_diagram_value);
}

DiagramTable efficient_variance_diagram(DriftParam gamma0, QuadratureConfig cfg) {
    const double norm = cal_E(gamma0, cfg);
    DiagramTable t = tabulate(DiagramKind::variance, gamma0.gamma,
                              [&](double theta, double phi) {
                                  const detail::GnQuad q =
                                      detail::gn_all(theta, phi, gamma0.gamma);
                                  return q.g2 / (q.g4 * norm);
                              });
    repair_degenerate_corners(t);
    return t;
}

DiagramTable efficient_volatility_diagram(DriftParam gamma0, QuadratureConfig cfg) {
    const double norm = cal_F(gamma0, cfg);
    DiagramTable t = tabulate(DiagramKind::volatility, gamma0.gamma,
                              [&](double theta, double phi) {
                                  const detail::GnQuad q =
                                      detail::gn_all(theta, phi, gamma0.gamma);
                                  return q.g1 / (q.g2 * norm);
                              });
    repair_degenerate_corners(t);
    return t;
}

double lower_bound_variance(DriftParam gamma, QuadratureConfig cfg) {
    return 1.0 / cal_E(gamma, cfg) - 1.0;
}

double lower_bound_volatility(DriftParam gamma, QuadratureConfig cfg) {
    return 1.0 / cal_F(gamma, cfg) - 1.0;
}

EstimateResult apply_diagram(const OhlcBar& bar, const DiagramTable& diagram, double sigma0) {
    if (sigma0 <= 0.0)
        throw std::domain_error("sigma0 must be positive");
    const BarTerms b = open_subtracted(bar);
    // Angles are scale-free, so the open-subtracted bar can be used directly.
    const SphericalTriple s = to_spherical(NormalizedTriple{b.H, b.L, b.C});
    EstimateResult res;
    if (s.degenerate)
        return res;
    res.diagram_value = diagram.value_at(s.theta, s.phi);
    res.negative = res.diagram_value < 0.0;
    const double sqrt_t = std::sqrt(b.T);
    if (diagram.kind == DiagramKind::variance) {
        res.point = s.r * s.r * res.diagram_value / (sigma0 * sigma0);
        res.canonical = s.r * s.r * res.diagram_value / (sqrt_t * sqrt_t);
    } else {
        res.point = s.r * res.diagram_value / sigma0;
        res.canonical = s.r * res.diagram_value / sqrt_t;
    }
    return res;
}

double canonical_estimate(const NormalizedTriple& t, const DiagramTable& diagram) {
    const SphericalTriple s = to_spherical(t);
    if (s.degenerate)
        return 0.0;
    const double v = diagram.value_at(s.theta, s.phi);
    return diagram.kind == DiagramKind::variance ? s.r * s.r * v : s.r * v;
}

DiagramTable renormalize(const DiagramTable& diagram, DriftParam gamma, QuadratureConfig cfg) {
    const double mean = diagram.kind == DiagramKind::variance
                            ? k_moments(diagram, 1, gamma, cfg)
                            : s_moments(diagram, 1, gamma, cfg);
    if (mean <= 0.0)
        throw std::domain_error("estimator mean is not positive; cannot renormalize");
    DiagramTable out = diagram;
    for (double& v : out.values)
        v /= mean;
    return out;
}

namespace {

// int dphi int dtheta cos(theta) node_value(theta, phi) at the configured
// resolution; the pdf integrands are smooth, so no refinement pass is taken.
double pdf_integral(const QuadratureConfig& cfg,
                    const std::function<double(double, double)>& node_value) {
    const detail::AngularGrid& grid = detail::angular_grid(cfg.n_phi, cfg.n_theta);
    std::vector<double> terms(grid.theta.size());
    for (std::size_t i = 0; i < terms.size(); ++i)
        terms[i] = grid.weight[i] * node_value(grid.theta[i], grid.phi[i]);
    return detail::pairwise_sum(terms);
}

}  // namespace

double estimator_pdf_variance(double u, const DiagramTable& diagram, DriftParam gamma,
                              QuadratureConfig cfg) {
    if (diagram.kind != DiagramKind::variance)
        throw std::invalid_argument("variance pdf requires a variance diagram");
    if (u < 0.0)
        throw std::domain_error("estimator value must be nonnegative");
    if (u == 0.0)
        return 0.0;
    const double integral = pdf_integral(cfg, [&](double theta, double phi) {
        const double d = diagram.value_at(theta, phi);
        if (d <= 0.0)
            throw std::domain_error("variance diagram not positive on the interior");
        const double rho = std::sqrt(u / d);
        const NormalizedTriple t{rho * std::cos(theta) * std::cos(phi),
                                 rho * std::cos(theta) * std::sin(phi),
                                 rho * std::sin(theta)};
        return joint_pdf(t, gamma) / (d * std::sqrt(d));
    });
    return 0.5 * std::sqrt(u) * integral;
}

double estimator_pdf_volatility(double u, const DiagramTable& diagram, DriftParam gamma,
                                QuadratureConfig cfg) {
    if (diagram.kind != DiagramKind::volatility)
        throw std::invalid_argument("volatility pdf requires a volatility diagram");
    if (u < 0.0)
        throw std::domain_error("estimator value must be nonnegative");
    if (u == 0.0)
        return 0.0;
    const double integral = pdf_integral(cfg, [&](double theta, double phi) {
        const double p = diagram.value_at(theta, phi);
        if (p <= 0.0)
            throw std::domain_error("volatility diagram not positive on the interior");
        const double rho = u / p;
        const NormalizedTriple t{rho * std::cos(theta) * std::cos(phi),
                                 rho * std::cos(theta) * std::sin(phi),
                                 rho * std::sin(theta)};
        return joint_pdf(t, gamma) / (p * p * p);
    });
    return u * u * integral;
}

void write_diagram_csv(const DiagramTable& diagram, std::ostream& out) {
    out << "phi,theta,value\n";
    char line[128];
    for (int i = 0; i < diagram.n_phi; ++i) {
        const double phi = diagram.phi_node(i);
        for (int j = 0; j < diagram.n_theta; ++j) {
            std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n", phi,
                          diagram.theta_node(i, j),
                          diagram.values[static_cast<std::size_t>(i) * diagram.n_theta + j]);
            out << line;
        }
    }
}

}  // namespace ohlc
