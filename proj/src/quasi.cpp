#include "ohlc/quasi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <utility>

#include "ohlc/estimators.hpp"

namespace ohlc {

std::vector<double> build_nodes(int K, double Gamma) {
    if (K < 0)
        throw std::domain_error("order K must be nonnegative");
    if (K == 0)
        return {0.0};
    if (Gamma <= 0.0)
        throw std::domain_error("band width Gamma must be positive");
    std::vector<double> nodes;
    nodes.reserve(2 * K + 1);
    for (int i = -K; i <= K; ++i)
        nodes.push_back(i * Gamma / K);
    return nodes;
}

std::vector<std::vector<double>> epsilon_matrix(const std::vector<double>& nodes,
                                                QuadratureConfig cfg) {
    const std::size_t n = nodes.size();
    std::vector<double> norm(n);
    for (std::size_t i = 0; i < n; ++i)
        norm[i] = cal_E(DriftParam{nodes[i]}, cfg);
    std::vector<std::vector<double>> eps(n, std::vector<double>(n));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            eps[j][i] = cal_E_cross(DriftParam{nodes[j]}, DriftParam{nodes[i]}, cfg) / norm[i];
    return eps;
}

namespace {

// Dense solve with partial pivoting; returns false on a (numerically)
// singular matrix.  a is overwritten; b holds the solution on exit.
bool gauss_solve(std::vector<std::vector<double>>& a, std::vector<double>& b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col]))
                pivot = r;
        if (a[pivot][col] == 0.0)
            return false;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            if (f == 0.0)
                continue;
            for (std::size_t c = col; c < n; ++c)
                a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    for (std::size_t row = n; row-- > 0;) {
        double s = b[row];
        for (std::size_t c = row + 1; c < n; ++c)
            s -= a[row][c] * b[c];
        b[row] = s / a[row][row];
    }
    return true;
}

double one_norm(const std::vector<std::vector<double>>& a) {
    const std::size_t n = a.size();
    double best = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r)
            s += std::abs(a[r][c]);
        best = std::max(best, s);
    }
    return best;
}

}  // namespace

std::vector<double> solve_weights(const std::vector<std::vector<double>>& eps,
                                  double* residual, double* condition) {
    const std::size_t n = eps.size();
    if (n == 0 || n % 2 == 0)
        throw std::invalid_argument("epsilon matrix must be (2K+1) x (2K+1)");
    for (const auto& row : eps)
        if (row.size() != n)
            throw std::invalid_argument("epsilon matrix must be square");
    const std::size_t K = n / 2;

    // The drift-reversal symmetry eps[j][i] = eps[-j][-i] makes h_i = h_{-i};
    // fold the system onto the K+1 unknowns h_0..h_K using the rows j >= 0 so
    // the symmetry holds exactly in the output.
    std::vector<std::vector<double>> folded(K + 1, std::vector<double>(K + 1));
    for (std::size_t j = 0; j <= K; ++j) {
        folded[j][0] = eps[K + j][K];
        for (std::size_t i = 1; i <= K; ++i)
            folded[j][i] = eps[K + j][K + i] + eps[K + j][K - i];
    }

    double cond = 0.0;
    {
        // 1-norm condition estimate through the explicit inverse; the system
        // is tiny (K+1 <= a few), so this is exact and cheap.
        std::vector<std::vector<double>> inv(K + 1, std::vector<double>(K + 1));
        bool ok = true;
        for (std::size_t c = 0; c <= K && ok; ++c) {
            std::vector<std::vector<double>> a = folded;
            std::vector<double> e(K + 1, 0.0);
            e[c] = 1.0;
            ok = gauss_solve(a, e);
            for (std::size_t r = 0; r <= K; ++r)
                inv[r][c] = e[r];
        }
        cond = ok ? one_norm(folded) * one_norm(inv)
                  : std::numeric_limits<double>::infinity();
    }
    if (condition)
        *condition = cond;
    if (!(cond < 1e12))
        throw ill_conditioned_error("quasi-unbiased weight system is ill-conditioned", cond);

    std::vector<std::vector<double>> a = folded;
    std::vector<double> half(K + 1, 1.0);
    if (!gauss_solve(a, half))
        throw ill_conditioned_error("quasi-unbiased weight system is singular", cond);

    std::vector<double> h(n);
    h[K] = half[0];
    for (std::size_t i = 1; i <= K; ++i) {
        h[K + i] = half[i];
        h[K - i] = half[i];
    }
    if (residual) {
        double worst = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double s = -1.0;
            for (std::size_t i = 0; i < n; ++i)
                s += eps[j][i] * h[i];
            worst = std::max(worst, std::abs(s));
        }
        *residual = worst;
    }
    return h;
}

QuasiSpec make_quasi(int K, double Gamma, QuadratureConfig cfg) {
    QuasiSpec spec;
    spec.order_K = K;
    spec.band_width_Gamma = Gamma;
    spec.nodes = build_nodes(K, Gamma);
    const auto eps = epsilon_matrix(spec.nodes, cfg);
    spec.weights = solve_weights(eps, &spec.residual, &spec.condition);
    return spec;
}

DiagramTable composed_diagram(const QuasiSpec& spec, QuadratureConfig cfg) {
    if (spec.nodes.size() != spec.weights.size() || spec.nodes.empty())
        throw std::invalid_argument("quasi spec has no solved weights");
    DiagramTable out;
    for (std::size_t i = 0; i < spec.nodes.size(); ++i) {
        DiagramTable part = efficient_variance_diagram(DriftParam{spec.nodes[i]}, cfg);
        if (i == 0) {
            out = part;
            out.gamma0.reset();
            for (double& v : out.values)
                v *= spec.weights[0];
        } else {
            for (std::size_t k = 0; k < out.values.size(); ++k)
                out.values[k] += spec.weights[i] * part.values[k];
        }
    }
    return out;
}

double quasi_expectation(const QuasiSpec& spec, DriftParam gamma, QuadratureConfig cfg) {
    if (spec.nodes.size() != spec.weights.size() || spec.nodes.empty())
        throw std::invalid_argument("quasi spec has no solved weights");
    double mean = 0.0;
    for (std::size_t i = 0; i < spec.nodes.size(); ++i) {
        const DriftParam node{spec.nodes[i]};
        mean += spec.weights[i] * cal_E_cross(gamma, node, cfg) / cal_E(node, cfg);
    }
    return mean;
}

void write_quasi_csv(const QuasiSpec& spec, std::ostream& out) {
    char line[160];
    std::snprintf(line, sizeof(line), "# K=%d Gamma=%.17g residual=%.17g condition=%.17g\n",
                  spec.order_K, spec.band_width_Gamma, spec.residual, spec.condition);
    out << line << "i,gamma_i,h_i\n";
    const int K = spec.order_K;
    for (std::size_t k = 0; k < spec.nodes.size(); ++k) {
        std::snprintf(line, sizeof(line), "%d,%.17g,%.17g\n", static_cast<int>(k) - K,
                      spec.nodes[k], spec.weights[k]);
        out << line;
    }
}

}  // namespace ohlc
