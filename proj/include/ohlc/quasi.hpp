#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "ohlc/core.hpp"
#include "ohlc/diagram.hpp"
#include "ohlc/kernels.hpp"

namespace ohlc {

// Composed estimator d_hat = sum_i h_i d_hat_eff(gamma_i), exactly unbiased at
// the 2K+1 nodes gamma_i = i Gamma / K.
struct QuasiSpec {
    int order_K = 0;
    double band_width_Gamma = 0.0;
    std::vector<double> nodes;    // gamma_{-K} .. gamma_{K}
    std::vector<double> weights;  // h_{-K} .. h_{K}, h_i = h_{-i} exactly
    double residual = 0.0;        // max |sum_i eps_ij h_i - 1| over nodes
    double condition = 0.0;       // 1-norm condition estimate of the folded system
};

class ill_conditioned_error : public std::runtime_error {
public:
    ill_conditioned_error(const std::string& what, double condition)
        : std::runtime_error(what), condition_(condition) {}
    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

// gamma_i = i Gamma / K for i = -K..K; K = 0 yields {0}.  K < 0 or Gamma <= 0
// (with K > 0) -> std::domain_error.
std::vector<double> build_nodes(int K, double Gamma);

// eps[j][i] = cal_E(gamma_j, gamma_i) / cal_E(gamma_i), the expectation of the
// node-i estimator under true drift gamma_j; rows j, columns i.
std::vector<std::vector<double>> epsilon_matrix(const std::vector<double>& nodes,
                                                QuadratureConfig cfg = {});

// Solves sum_i eps[j][i] h_i = 1 on the folded (K+1)-dimensional system so the
// weight symmetry h_i = h_{-i} holds exactly.  Residual and a 1-norm condition
// estimate are reported through the out-parameters when non-null.  Condition
// above 1e12 or a singular system -> ill_conditioned_error.
std::vector<double> solve_weights(const std::vector<std::vector<double>>& eps,
                                  double* residual = nullptr, double* condition = nullptr);

// Node placement + epsilon matrix + weight solve in one step.
QuasiSpec make_quasi(int K, double Gamma, QuadratureConfig cfg = {});

// Pointwise weighted sum of the most efficient variance diagrams at the nodes.
DiagramTable composed_diagram(const QuasiSpec& spec, QuadratureConfig cfg = {});

// E[d_hat | gamma] = sum_i h_i cal_E(gamma, gamma_i) / cal_E(gamma_i).
double quasi_expectation(const QuasiSpec& spec, DriftParam gamma, QuadratureConfig cfg = {});

// CSV export `i,gamma_i,h_i` preceded by comment lines recording K, Gamma,
// solver residual, and condition number.
void write_quasi_csv(const QuasiSpec& spec, std::ostream& out);

}  // namespace ohlc
