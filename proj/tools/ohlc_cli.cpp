// Command-line front end: estimator application to OHLC data, analytic
// curve/diagram/pdf emission, quasi-unbiased weight construction, and Monte
// Carlo simulation studies.  Every command writes a JSON run manifest next to
// its output.  Exit codes: 0 success, 2 input error, 3 numerical
// non-convergence, 4 ill-conditioned system.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ohlc/core.hpp"
#include "ohlc/density.hpp"
#include "ohlc/diagram.hpp"
#include "ohlc/estimators.hpp"
#include "ohlc/kernels.hpp"
#include "ohlc/mle.hpp"
#include "ohlc/montecarlo.hpp"
#include "ohlc/quasi.hpp"

namespace {

constexpr const char* kToolVersion = "1.0.0";

constexpr int kExitInput = 2;
constexpr int kExitNonConvergence = 3;
constexpr int kExitIllConditioned = 4;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

struct ManifestClock {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

void write_manifest(const std::string& out_path, const std::string& command,
                    const nlohmann::ordered_json& parameters, std::uint64_t seed,
                    const ManifestClock& clock) {
    nlohmann::ordered_json m;
    m["command"] = command;
    m["parameters"] = parameters;
    m["seed"] = seed;
    m["tool_version"] = kToolVersion;
    m["wall_time"] = clock.elapsed();
    std::ofstream f(out_path + ".manifest.json");
    f << m.dump(2) << "\n";
}

// Estimator selection shared by several commands.
struct Selection {
    bool rs = false;
    bool gk = false;
    bool parkinson = false;
    std::vector<double> eff;  // reference drifts gamma0
    bool mle = false;
};

void add_selection_flags(CLI::App* cmd, Selection& sel, bool with_mle) {
    cmd->add_flag("--rs", sel.rs, "Rogers-Satchell estimator");
    cmd->add_flag("--gk", sel.gk, "Garman-Klass estimator");
    cmd->add_flag("--parkinson", sel.parkinson, "Parkinson estimator");
    cmd->add_option("--eff", sel.eff,
                    "most efficient estimator at reference drift gamma0 (repeatable)");
    if (with_mle)
        cmd->add_flag("--mle", sel.mle, "maximum likelihood estimator");
}

// The Parkinson diagram phi(theta, phi) = (cos phi - sin phi)^2 cos^2 theta
// / (4 ln 2); tabulated here because only R&S and G&K ship closed-form tables.
ohlc::DiagramTable parkinson_diagram() {
    ohlc::DiagramTable t;
    t.kind = ohlc::DiagramKind::variance;
    t.n_phi = 128;
    t.n_theta = 128;
    t.values.resize(static_cast<std::size_t>(t.n_phi) * t.n_theta);
    const double c = 1.0 / (4.0 * std::log(2.0));
    for (int i = 0; i < t.n_phi; ++i) {
        const double phi = t.phi_node(i);
        const double w = std::cos(phi) - std::sin(phi);
        for (int j = 0; j < t.n_theta; ++j) {
            const double ct = std::cos(t.theta_node(i, j));
            t.values[static_cast<std::size_t>(i) * t.n_theta + j] = c * w * w * ct * ct;
        }
    }
    return t;
}

// Volatility diagram of a classic estimator: psi = sqrt(phi).
ohlc::DiagramTable sqrt_diagram(ohlc::DiagramTable t) {
    t.kind = ohlc::DiagramKind::volatility;
    for (double& v : t.values)
        v = std::sqrt(std::max(v, 0.0));
    return t;
}

struct NamedDiagram {
    std::string name;
    ohlc::DiagramTable variance;
};

std::vector<NamedDiagram> selected_diagrams(const Selection& sel,
                                            const ohlc::QuadratureConfig& cfg) {
    std::vector<NamedDiagram> out;
    if (sel.rs)
        out.push_back({"rs", ohlc::classic_diagram(ohlc::ClassicKind::rs)});
    if (sel.gk)
        out.push_back({"gk", ohlc::classic_diagram(ohlc::ClassicKind::gk)});
    if (sel.parkinson)
        out.push_back({"parkinson", parkinson_diagram()});
    for (double g0 : sel.eff)
        out.push_back({"eff(" + fmt_short(g0) + ")",
                       ohlc::efficient_variance_diagram({g0}, cfg)});
    return out;
}

std::vector<double> gamma_grid(double lo, double hi, double step) {
    std::vector<double> g;
    const int n = static_cast<int>(std::round((hi - lo) / step));
    for (int i = 0; i <= n; ++i)
        g.push_back(lo + i * step);
    if (g.empty())
        g.push_back(lo);
    return g;
}

// ---- CSV input -------------------------------------------------------------

struct BarRow {
    ohlc::OhlcBar bar;
    long long line = 0;
};

// Reads `open,high,low,close[,horizon]`.  Malformed rows or OHLC invariant
// violations stop the load with exit-2 semantics: the message names the row.
std::vector<BarRow> load_bars(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open input file: " + path);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("empty input file: " + path);
    auto split = [](const std::string& s) {
        std::vector<std::string> f;
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ','))
            f.push_back(tok);
        return f;
    };
    const std::vector<std::string> header = split(line);
    if (header.size() < 4 || header[0] != "open" || header[1] != "high" ||
        header[2] != "low" || header[3] != "close")
        throw std::runtime_error("input header must be open,high,low,close[,horizon]");
    const bool has_horizon = header.size() >= 5 && header[4] == "horizon";
    std::vector<BarRow> rows;
    long long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        const std::vector<std::string> f = split(line);
        if (f.size() < (has_horizon ? 5u : 4u))
            throw std::runtime_error("row " + std::to_string(lineno) + ": expected " +
                                     std::to_string(has_horizon ? 5 : 4) + " fields");
        ohlc::OhlcBar bar;
        try {
            bar.open = std::stod(f[0]);
            bar.high = std::stod(f[1]);
            bar.low = std::stod(f[2]);
            bar.close = std::stod(f[3]);
            bar.horizon = has_horizon ? std::stod(f[4]) : 1.0;
        } catch (const std::exception&) {
            throw std::runtime_error("row " + std::to_string(lineno) +
                                     ": malformed number");
        }
        try {
            ohlc::validate_bar(bar);
        } catch (const std::domain_error& e) {
            throw std::runtime_error("row " + std::to_string(lineno) + ": " + e.what());
        }
        rows.push_back({bar, lineno});
    }
    return rows;
}

// ---- commands --------------------------------------------------------------

int cmd_estimate(const std::string& input, const Selection& sel, double gamma0,
                 const ohlc::QuadratureConfig& cfg, const std::string& out_path,
                 const nlohmann::ordered_json& params) {
    ManifestClock clock;
    std::vector<BarRow> rows;
    try {
        rows = load_bars(input);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    std::optional<ohlc::DiagramTable> eff_var, eff_vol;
    if (!sel.eff.empty()) {
        eff_var = ohlc::efficient_variance_diagram({sel.eff.front()}, cfg);
        eff_vol = ohlc::efficient_volatility_diagram({sel.eff.front()}, cfg);
    }
    std::ofstream out(out_path);
    out << "open,high,low,close,horizon";
    if (sel.rs)
        out << ",rs_variance,rs_volatility";
    if (sel.gk)
        out << ",gk_variance,gk_volatility";
    if (sel.parkinson)
        out << ",parkinson_variance,parkinson_volatility";
    if (eff_var)
        out << ",eff_variance,eff_volatility";
    if (sel.mle)
        out << ",mle_variance,mle_volatility";
    out << "\n";
    for (const BarRow& r : rows) {
        const double T = r.bar.horizon;
        const double s0 = std::sqrt(T);
        out << fmt(r.bar.open) << "," << fmt(r.bar.high) << "," << fmt(r.bar.low) << ","
            << fmt(r.bar.close) << "," << fmt(T);
        auto put_pair = [&](double var, double vol) {
            out << "," << fmt(var) << "," << fmt(vol);
        };
        if (sel.rs) {
            const double v = ohlc::rs_variance(r.bar);
            put_pair(v, std::sqrt(std::max(v, 0.0)));
        }
        if (sel.gk) {
            const double v = ohlc::gk_variance(r.bar);
            put_pair(v, std::sqrt(std::max(v, 0.0)));
        }
        if (sel.parkinson) {
            const double v = ohlc::parkinson_variance(r.bar);
            put_pair(v, std::sqrt(std::max(v, 0.0)));
        }
        if (eff_var)
            put_pair(ohlc::apply_diagram(r.bar, *eff_var, s0).point,
                     ohlc::apply_diagram(r.bar, *eff_vol, s0).point);
        if (sel.mle) {
            if (r.bar.high == r.bar.low) {  // flat bar: zero estimate by convention
                put_pair(0.0, 0.0);
            } else {
                const ohlc::MlResult ml = ohlc::ml_volatility(r.bar);
                put_pair(ml.d_hat, ml.sigma_hat);
            }
        }
        out << "\n";
    }
    (void)gamma0;
    write_manifest(out_path, "estimate", params, 0, clock);
    return 0;
}

int cmd_curves(const std::string& curve, const Selection& sel,
               const std::vector<double>& grid, const ohlc::QuadratureConfig& cfg,
               const std::string& out_path, const nlohmann::ordered_json& params) {
    ManifestClock clock;
    std::ofstream out(out_path);
    double current_gamma = 0.0;
    try {
        if (curve == "bound_V" || curve == "bound_W") {
            out << "gamma,value\n";
            for (double g : grid) {
                current_gamma = g;
                const double v = curve == "bound_V"
                                     ? ohlc::lower_bound_variance({g}, cfg)
                                     : ohlc::lower_bound_volatility({g}, cfg);
                out << fmt(g) << "," << fmt(v) << "\n";
            }
        } else {
            const std::vector<NamedDiagram> diagrams = selected_diagrams(sel, cfg);
            if (diagrams.empty()) {
                std::cerr << "error: select at least one estimator\n";
                return kExitInput;
            }
            out << "gamma,estimator,value\n";
            for (const NamedDiagram& d : diagrams) {
                for (double g : grid) {
                    current_gamma = g;
                    const double k1 = ohlc::k_moments(d.variance, 1, {g}, cfg);
                    double value = 0.0;
                    if (curve == "mean") {
                        value = k1;
                    } else if (curve == "variance") {
                        const double k2 = ohlc::k_moments(d.variance, 2, {g}, cfg);
                        value = k2 - k1 * k1;
                    } else {  // renorm_variance
                        const double k2 = ohlc::k_moments(d.variance, 2, {g}, cfg);
                        value = k2 / (k1 * k1) - 1.0;
                    }
                    out << fmt(g) << "," << d.name << "," << fmt(value) << "\n";
                }
            }
        }
    } catch (const std::runtime_error& e) {
        std::cerr << "error: quadrature failure at gamma=" << fmt_short(current_gamma)
                  << ": " << e.what() << "\n";
        return kExitNonConvergence;
    }
    write_manifest(out_path, "curves", params, 0, clock);
    return 0;
}

int cmd_diagram(const Selection& sel, bool volatility, const ohlc::QuadratureConfig& cfg,
                const std::string& out_path, const nlohmann::ordered_json& params) {
    ManifestClock clock;
    const int n_selected = (sel.rs ? 1 : 0) + (sel.gk ? 1 : 0) + (sel.parkinson ? 1 : 0) +
                           static_cast<int>(sel.eff.size());
    if (n_selected != 1) {
        std::cerr << "error: select exactly one estimator for the diagram\n";
        return kExitInput;
    }
    ohlc::DiagramTable t;
    try {
        if (sel.rs)
            t = ohlc::classic_diagram(ohlc::ClassicKind::rs);
        else if (sel.gk)
            t = ohlc::classic_diagram(ohlc::ClassicKind::gk);
        else if (sel.parkinson)
            t = parkinson_diagram();
        else
            t = volatility ? ohlc::efficient_volatility_diagram({sel.eff.front()}, cfg)
                           : ohlc::efficient_variance_diagram({sel.eff.front()}, cfg);
        if (volatility && t.kind == ohlc::DiagramKind::variance)
            t = sqrt_diagram(std::move(t));
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNonConvergence;
    }
    std::ofstream out(out_path);
    ohlc::write_diagram_csv(t, out);
    write_manifest(out_path, "diagram", params, 0, clock);
    return 0;
}

int cmd_pdf(const std::string& kind, const Selection& sel, double gamma, double u_min,
            double u_max, double u_step, const ohlc::QuadratureConfig& cfg,
            const std::string& out_path, const nlohmann::ordered_json& params) {
    ManifestClock clock;
    std::vector<NamedDiagram> diagrams;
    try {
        diagrams = selected_diagrams(sel, cfg);
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNonConvergence;
    }
    if (diagrams.empty()) {
        std::cerr << "error: select at least one estimator\n";
        return kExitInput;
    }
    const bool volatility = kind == "volatility";
    std::ofstream out(out_path);
    out << "u,estimator,density\n";
    try {
        for (NamedDiagram& d : diagrams) {
            ohlc::DiagramTable table = d.variance;
            if (volatility) {
                // eff tables get the dedicated psi diagram; classics take sqrt(phi)
                if (d.name.rfind("eff(", 0) == 0) {
                    const double g0 = d.variance.gamma0.value_or(0.0);
                    table = ohlc::efficient_volatility_diagram({g0}, cfg);
                } else {
                    table = sqrt_diagram(std::move(table));
                }
            }
            for (double u = u_min; u <= u_max + 1e-12; u += u_step) {
                const double f = volatility
                                     ? ohlc::estimator_pdf_volatility(u, table, {gamma}, cfg)
                                     : ohlc::estimator_pdf_variance(u, table, {gamma}, cfg);
                out << fmt(u) << "," << d.name << "," << fmt(f) << "\n";
            }
        }
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNonConvergence;
    }
    write_manifest(out_path, "pdf", params, 0, clock);
    return 0;
}

int cmd_quasi(int K, double Gamma, const std::vector<double>& grid,
              const ohlc::QuadratureConfig& cfg, const std::string& out_path,
              const nlohmann::ordered_json& params) {
    ManifestClock clock;
    ohlc::QuasiSpec spec;
    try {
        spec = ohlc::make_quasi(K, Gamma, cfg);
    } catch (const ohlc::ill_conditioned_error& e) {
        std::cerr << "error: " << e.what() << " (condition " << fmt_short(e.condition())
                  << ")\n";
        return kExitIllConditioned;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    const std::string weights_path = out_path + ".weights.csv";
    {
        std::ofstream wout(weights_path);
        ohlc::write_quasi_csv(spec, wout);
    }
    std::ofstream out(out_path);
    out << "gamma,mean,variance\n";
    try {
        const ohlc::DiagramTable composed = ohlc::composed_diagram(spec, cfg);
        for (double g : grid) {
            const double k1 = ohlc::k_moments(composed, 1, {g}, cfg);
            const double k2 = ohlc::k_moments(composed, 2, {g}, cfg);
            out << fmt(g) << "," << fmt(k1) << "," << fmt(k2 - k1 * k1) << "\n";
        }
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNonConvergence;
    }
    write_manifest(out_path, "quasi", params, 0, clock);
    return 0;
}

int cmd_simulate(const std::vector<long long>& Ns, long long M,
                 const std::vector<double>& gammas, std::uint64_t seed,
                 const Selection& sel, bool student_t, double nu,
                 const ohlc::QuadratureConfig& cfg, const std::string& out_path,
                 const nlohmann::ordered_json& params) {
    ManifestClock clock;
    std::vector<ohlc::NamedEstimator> estimators;
    if (sel.rs)
        estimators.push_back({"rs", [](const ohlc::NormalizedTriple& t) {
                                  return ohlc::rs_variance({0.0, t.h_bar, t.l_bar, t.c_bar, 1.0});
                              }});
    if (sel.gk)
        estimators.push_back({"gk", [](const ohlc::NormalizedTriple& t) {
                                  return ohlc::gk_variance({0.0, t.h_bar, t.l_bar, t.c_bar, 1.0});
                              }});
    if (sel.parkinson)
        estimators.push_back({"parkinson", [](const ohlc::NormalizedTriple& t) {
                                  return ohlc::parkinson_variance(
                                      {0.0, t.h_bar, t.l_bar, t.c_bar, 1.0});
                              }});
    for (double g0 : sel.eff) {
        auto diagram = std::make_shared<ohlc::DiagramTable>(
            ohlc::efficient_variance_diagram({g0}, cfg));
        estimators.push_back({"eff(" + fmt_short(g0) + ")",
                              [diagram](const ohlc::NormalizedTriple& t) {
                                  return ohlc::canonical_estimate(t, *diagram);
                              }});
    }
    if (sel.mle)
        estimators.push_back({"mle", [](const ohlc::NormalizedTriple& t) {
                                  return ohlc::ml_volatility({0.0, t.h_bar, t.l_bar, t.c_bar, 1.0})
                                      .sigma_hat;
                              }});
    if (estimators.empty()) {
        std::cerr << "error: select at least one estimator\n";
        return kExitInput;
    }
    std::vector<ohlc::StudyRow> rows;
    if (!student_t) {
        rows = ohlc::convergence_study(gammas, Ns, M, seed, estimators);
    } else {
        for (double g : gammas) {
            for (long long n : Ns) {
                ohlc::SimConfig sc;
                sc.steps_N = n;
                sc.paths_M = M;
                sc.gamma = {g};
                sc.seed = seed;
                sc.innovation = ohlc::Innovation::student_t;
                sc.nu = nu;
                for (const ohlc::NamedEstimator& est : estimators) {
                    const ohlc::MomentResult m = ohlc::mc_estimator_moments(sc, est.second);
                    rows.push_back({n, est.first, g, m.mean, m.variance, m.std_error});
                }
            }
        }
    }
    std::ofstream out(out_path);
    out << "N,estimator,gamma,mean,variance,std_error\n";
    for (const ohlc::StudyRow& r : rows)
        out << r.steps_N << "," << r.estimator << "," << fmt(r.gamma) << ","
            << fmt(r.mean) << "," << fmt(r.variance) << "," << fmt(r.std_error) << "\n";
    write_manifest(out_path, "simulate", params, seed, clock);
    return 0;
}

int cmd_mle(const std::string& input, const std::string& out_path,
            const nlohmann::ordered_json& params) {
    ManifestClock clock;
    std::vector<BarRow> rows;
    try {
        rows = load_bars(input);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    std::ofstream out(out_path);
    out << "mu_hat,sigma_hat,d_hat,loglik,error\n";
    long long ok_rows = 0;
    for (const BarRow& r : rows) {
        try {
            const ohlc::MlResult ml = ohlc::ml_volatility(r.bar);
            out << fmt(ohlc::ml_drift(r.bar)) << "," << fmt(ml.sigma_hat) << ","
                << fmt(ml.d_hat) << "," << fmt(ml.loglik) << ",0\n";
            ++ok_rows;
        } catch (const std::domain_error&) {
            out << "nan,nan,nan,nan," << kExitInput << "\n";
        } catch (const std::runtime_error&) {
            out << "nan,nan,nan,nan," << kExitNonConvergence << "\n";
        }
    }
    write_manifest(out_path, "mle", params, 0, clock);
    if (ok_rows == 0 && !rows.empty()) {
        std::cerr << "error: no row could be estimated\n";
        return kExitInput;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Homogeneous OHLC volatility and variance estimators"};
    app.require_subcommand(1);

    ohlc::QuadratureConfig cfg;
    app.add_option("--tol-radial", cfg.radial_tol, "radial quadrature tolerance");
    app.add_option("--tol-angular", cfg.angular_tol, "angular quadrature tolerance");

    std::string input, out_path;
    double gamma0 = 0.0;
    double gamma_min = -2.0, gamma_max = 2.0, gamma_step = 0.05;
    std::string curve, pdf_kind = "variance";
    bool volatility = false;
    double gamma_single = 0.0;
    double u_min = 0.0, u_max = 5.0, u_step = 0.01;
    int quasi_K = 1;
    double quasi_Gamma = 1.0;
    std::vector<long long> sim_N{100000};
    long long sim_M = 100000;
    std::vector<double> sim_gamma{0.0};
    std::uint64_t seed = 0;
    bool student_t = false;
    double nu = 5.0;
    Selection sel;

    CLI::App* est = app.add_subcommand("estimate", "apply estimators to an OHLC CSV");
    est->add_option("--input", input, "input CSV open,high,low,close[,horizon]")
        ->required();
    est->add_option("--gamma0", gamma0, "reference drift for --eff");
    add_selection_flags(est, sel, true);
    est->add_option("--out", out_path, "output CSV path")->required();

    CLI::App* cur = app.add_subcommand("curves", "estimator curves over a gamma grid");
    cur->add_option("curve", curve,
                    "one of bound_V, bound_W, mean, variance, renorm_variance")
        ->required()
        ->check(CLI::IsMember(
            {"bound_V", "bound_W", "mean", "variance", "renorm_variance"}));
    add_selection_flags(cur, sel, false);
    cur->add_option("--gamma-min", gamma_min, "grid start");
    cur->add_option("--gamma-max", gamma_max, "grid end");
    cur->add_option("--gamma-step", gamma_step, "grid step");
    cur->add_option("--out", out_path, "output CSV path")->required();

    CLI::App* dia = app.add_subcommand("diagram", "emit a diagram grid CSV");
    add_selection_flags(dia, sel, false);
    dia->add_flag("--volatility", volatility, "emit the volatility diagram psi");
    dia->add_option("--out", out_path, "output CSV path")->required();

    CLI::App* pdf = app.add_subcommand("pdf", "estimator pdf over a value grid");
    pdf->add_option("--kind", pdf_kind, "variance or volatility")
        ->check(CLI::IsMember({"variance", "volatility"}));
    add_selection_flags(pdf, sel, false);
    pdf->add_option("--gamma", gamma_single, "true drift gamma");
    pdf->add_option("--u-min", u_min, "value grid start");
    pdf->add_option("--u-max", u_max, "value grid end");
    pdf->add_option("--u-step", u_step, "value grid step");
    pdf->add_option("--out", out_path, "output CSV path")->required();

    CLI::App* qua = app.add_subcommand("quasi", "quasi-unbiased composed estimator");
    qua->add_option("--K", quasi_K, "order (2K+1 nodes)")->required();
    qua->add_option("--Gamma", quasi_Gamma, "band width")->required();
    qua->add_option("--gamma-min", gamma_min, "curve grid start");
    qua->add_option("--gamma-max", gamma_max, "curve grid end");
    qua->add_option("--gamma-step", gamma_step, "curve grid step");
    qua->add_option("--out", out_path, "curve CSV path (weights go to <out>.weights.csv)")
        ->required();

    CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo simulation study");
    sim->add_option("--N", sim_N, "steps per path (repeatable for a convergence study)");
    sim->add_option("--M", sim_M, "number of paths");
    sim->add_option("--gamma", sim_gamma, "normalized drift (repeatable)");
    sim->add_option("--seed", seed, "RNG seed");
    add_selection_flags(sim, sel, true);
    sim->add_flag("--student-t", student_t, "Student-t innovations");
    sim->add_option("--nu", nu, "Student-t degrees of freedom (> 2)");
    sim->add_option("--out", out_path, "output CSV path")->required();

    CLI::App* mle = app.add_subcommand("mle", "per-bar maximum likelihood estimates");
    mle->add_option("--input", input, "input CSV open,high,low,close[,horizon]")
        ->required();
    mle->add_option("--out", out_path, "output CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    nlohmann::ordered_json params;
    params["tol_radial"] = cfg.radial_tol;
    params["tol_angular"] = cfg.angular_tol;
    auto record_selection = [&] {
        params["rs"] = sel.rs;
        params["gk"] = sel.gk;
        params["parkinson"] = sel.parkinson;
        params["eff"] = sel.eff;
        params["mle"] = sel.mle;
    };

    try {
        if (est->parsed()) {
            params["input"] = input;
            params["gamma0"] = gamma0;
            record_selection();
            params["out"] = out_path;
            return cmd_estimate(input, sel, gamma0, cfg, out_path, params);
        }
        if (cur->parsed()) {
            params["curve"] = curve;
            record_selection();
            params["gamma_min"] = gamma_min;
            params["gamma_max"] = gamma_max;
            params["gamma_step"] = gamma_step;
            params["out"] = out_path;
            return cmd_curves(curve, sel, gamma_grid(gamma_min, gamma_max, gamma_step),
                              cfg, out_path, params);
        }
        if (dia->parsed()) {
            record_selection();
            params["volatility"] = volatility;
            params["out"] = out_path;
            return cmd_diagram(sel, volatility, cfg, out_path, params);
        }
        if (pdf->parsed()) {
            params["kind"] = pdf_kind;
            record_selection();
            params["gamma"] = gamma_single;
            params["u_min"] = u_min;
            params["u_max"] = u_max;
            params["u_step"] = u_step;
            params["out"] = out_path;
            return cmd_pdf(pdf_kind, sel, gamma_single, u_min, u_max, u_step, cfg,
                           out_path, params);
        }
        if (qua->parsed()) {
            params["K"] = quasi_K;
            params["Gamma"] = quasi_Gamma;
            params["gamma_min"] = gamma_min;
            params["gamma_max"] = gamma_max;
            params["gamma_step"] = gamma_step;
            params["out"] = out_path;
            return cmd_quasi(quasi_K, quasi_Gamma,
                             gamma_grid(gamma_min, gamma_max, gamma_step), cfg, out_path,
                             params);
        }
        if (sim->parsed()) {
            params["N"] = sim_N;
            params["M"] = sim_M;
            params["gamma"] = sim_gamma;
            record_selection();
            params["student_t"] = student_t;
            params["nu"] = nu;
            params["out"] = out_path;
            return cmd_simulate(sim_N, sim_M, sim_gamma, seed, sel, student_t, nu, cfg,
                                out_path, params);
        }
        if (mle->parsed()) {
            params["input"] = input;
            params["out"] = out_path;
            return cmd_mle(input, out_path, params);
        }
    } catch (const ohlc::ill_conditioned_error& e) {
        std::cerr << "error: " << e.what() << " (condition " << fmt_short(e.condition())
                  << ")\n";
        return kExitIllConditioned;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNonConvergence;
    }
    return 0;
}
