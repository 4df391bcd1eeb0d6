#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "ohlc/estimators.hpp"
#include "ohlc/kernels.hpp"
#include "ohlc/quasi.hpp"

using namespace ohlc;

namespace {

// Each weight solve costs a dozen angular quadratures; cache the specs the
// cases below share.
const QuasiSpec& spec_half() {
    static const QuasiSpec spec = make_quasi(1, 0.5);
    return spec;
}

const QuasiSpec& spec_one() {
    static const QuasiSpec spec = make_quasi(1, 1.0);
    return spec;
}

}  // namespace

TEST_SUITE("quasi") {

TEST_CASE("nodes form the uniform band grid") {
    const auto nodes = build_nodes(2, 1.0);
    REQUIRE(nodes.size() == 5);
    const double want[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(nodes[i] == want[i]);

    const auto wide = build_nodes(3, 1.5);
    REQUIRE(wide.size() == 7);
    CHECK(wide.front() == -1.5);
    CHECK(wide[4] == 0.5);
    CHECK(wide.back() == 1.5);

    // K = 0 collapses to the single node at zero and ignores the band width.
    const auto center = build_nodes(0, 1.0);
    REQUIRE(center.size() == 1);
    CHECK(center[0] == 0.0);
    CHECK(build_nodes(0, 0.0) == center);
}

TEST_CASE("nodes reject bad orders and band widths") {
    CHECK_THROWS_AS(build_nodes(-1, 1.0), std::domain_error);
    CHECK_THROWS_AS(build_nodes(1, 0.0), std::domain_error);
    CHECK_THROWS_AS(build_nodes(1, -0.5), std::domain_error);
}

TEST_CASE("weight solver validates the matrix shape") {
    CHECK_THROWS_AS(solve_weights({}), std::invalid_argument);
    CHECK_THROWS_AS(solve_weights({{1.0, 0.0}, {0.0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(solve_weights({{1.0, 0.0, 0.0}, {0.0, 1.0}, {0.0, 0.0, 1.0}}),
                    std::invalid_argument);

    // Minimal well-posed system: one node, eps h = 1.
    double res = -1.0, cond = 0.0;
    const auto h = solve_weights({{2.0}}, &res, &cond);
    REQUIRE(h.size() == 1);
    CHECK(h[0] == 0.5);
    CHECK(res == 0.0);
    CHECK(cond == 1.0);
}

TEST_CASE("near-singular folded systems are refused") {
    // Only rows j >= 0 enter the fold, so rig those: the folded 2x2 becomes
    // [[1, 2], [1, 2 + 1e-14]] with 1-norm condition ~1e15.
    const std::vector<std::vector<double>> close_call = {
        {1.0, 1.0, 1.0},
        {1.0, 1.0, 1.0},
        {1.0, 1.0, 1.0 + 1e-14},
    };
    CHECK_THROWS_AS(solve_weights(close_call), ill_conditioned_error);
    try {
        solve_weights(close_call);
        FAIL("expected ill_conditioned_error");
    } catch (const ill_conditioned_error& e) {
        CHECK(e.condition() > 1e12);
    }

    // An exactly rank-deficient fold reports an infinite condition.
    const std::vector<std::vector<double>> singular(3, std::vector<double>(3, 1.0));
    try {
        solve_weights(singular);
        FAIL("expected ill_conditioned_error");
    } catch (const ill_conditioned_error& e) {
        CHECK(std::isinf(e.condition()));
    }
}

TEST_CASE("order-1 weights solve the folded 2x2 closed form") {
    const auto nodes = build_nodes(1, 0.5);
    const auto eps = epsilon_matrix(nodes);
    for (int i = 0; i < 3; ++i)
        CHECK(eps[i][i] == doctest::Approx(1.0).epsilon(1e-12));
    // Drift reversal pairs entries across the center.
    CHECK(eps[1][0] == doctest::Approx(eps[1][2]).epsilon(1e-9));
    CHECK(eps[0][1] == doctest::Approx(eps[2][1]).epsilon(1e-9));
    CHECK(eps[0][2] == doctest::Approx(eps[2][0]).epsilon(1e-9));
    // Expectations of the node estimators under neighbouring drifts, frozen
    // from an independent high-precision evaluation.
    CHECK(eps[2][1] == doctest::Approx(1.032687767124112).epsilon(1e-10));
    CHECK(eps[1][2] == doctest::Approx(1.003193395601908).epsilon(1e-10));
    CHECK(eps[0][2] == doctest::Approx(1.072737098628561).epsilon(1e-10));

    // Cramer's rule on the exact folded rows reproduces the solver.
    const double a = eps[1][1];
    const double b = eps[1][2] + eps[1][0];
    const double c = eps[2][1];
    const double d = eps[2][2] + eps[2][0];
    const double det = a * d - b * c;
    const double h0 = (d - b) / det;
    const double hp = (a - c) / det;
    const auto h = solve_weights(eps);
    REQUIRE(h.size() == 3);
    CHECK(h[0] == h[2]);
    CHECK(h[1] == doctest::Approx(h0).epsilon(1e-10));
    CHECK(h[2] == doctest::Approx(hp).epsilon(1e-10));
    // Idealized unbiasedness equations with the symmetrized entries.
    CHECK(h[1] + 2.0 * eps[1][2] * h[2] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(eps[2][1] * h[1] + (1.0 + eps[0][2]) * h[2] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("order-1 solves reproduce frozen weights") {
    const QuasiSpec& half = spec_half();
    CHECK(half.order_K == 1);
    CHECK(half.band_width_Gamma == 0.5);
    REQUIRE(half.nodes.size() == 3);
    CHECK(half.nodes[0] == -0.5);
    CHECK(half.nodes[2] == 0.5);
    REQUIRE(half.weights.size() == 3);
    CHECK(half.weights[0] == half.weights[2]);
    CHECK(half.weights[1] == doctest::Approx(86.61883470993371).epsilon(1e-10));
    CHECK(half.weights[2] == doctest::Approx(-42.67314512101765).epsilon(1e-10));
    CHECK(half.residual <= 1e-8);
    CHECK(half.condition > 1e4);
    CHECK(half.condition < 1e5);

    const QuasiSpec& one = spec_one();
    REQUIRE(one.weights.size() == 3);
    CHECK(one.weights[0] == one.weights[2]);
    CHECK(one.weights[1] == doctest::Approx(23.39473509719474).epsilon(1e-10));
    CHECK(one.weights[2] == doctest::Approx(-11.08361518284785).epsilon(1e-10));
    CHECK(one.residual <= 1e-8);
    // Widening the band tames the conditioning by an order of magnitude.
    CHECK(one.condition > 5e2);
    CHECK(one.condition < 5e3);
    CHECK(one.condition < half.condition);
}

TEST_CASE("order-2 solve reproduces frozen weights") {
    const QuasiSpec spec = make_quasi(2, 1.0);
    REQUIRE(spec.nodes.size() == 5);
    CHECK(spec.nodes[1] == -0.5);
    REQUIRE(spec.weights.size() == 5);
    CHECK(spec.weights[0] == spec.weights[4]);
    CHECK(spec.weights[1] == spec.weights[3]);
    CHECK(spec.weights[2] == doctest::Approx(7371.352438798388).epsilon(1e-7));
    CHECK(spec.weights[3] == doctest::Approx(-4904.332796214060).epsilon(1e-7));
    CHECK(spec.weights[4] == doctest::Approx(1222.273718349368).epsilon(1e-7));
    CHECK(spec.residual <= 1e-8);
    CHECK(spec.condition > 1e7);
    CHECK(spec.condition < 1e9);
}

TEST_CASE("expectation is one at every node") {
    for (double g : {-1.0, 0.0, 1.0})
        CHECK(quasi_expectation(spec_one(), {g}) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("order-0 composition degenerates to the efficient diagram") {
    const QuasiSpec spec = make_quasi(0, 1.0);
    REQUIRE(spec.weights.size() == 1);
    CHECK(spec.weights[0] == 1.0);
    CHECK(spec.condition == 1.0);

    const DiagramTable composed = composed_diagram(spec);
    const DiagramTable eff = efficient_variance_diagram({0.0});
    CHECK(composed.kind == DiagramKind::variance);
    CHECK_FALSE(composed.gamma0.has_value());
    REQUIRE(composed.values.size() == eff.values.size());
    for (std::size_t k = 0; k < eff.values.size(); ++k)
        CHECK(composed.values[k] == eff.values[k]);
}

TEST_CASE("composed estimator is unbiased at the nodes") {
    const DiagramTable composed = composed_diagram(spec_one());
    CHECK(composed.kind == DiagramKind::variance);
    const double k1m = k_moments(composed, 1, {-1.0});
    const double k10 = k_moments(composed, 1, {0.0});
    const double k1p = k_moments(composed, 1, {1.0});
    CHECK(k1m == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(k10 == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(k1p == doctest::Approx(1.0).epsilon(1e-6));

    // Price of the unbiased band: variance at the center, frozen from an
    // independent high-precision evaluation.
    const double k20 = k_moments(composed, 2, {0.0});
    CHECK(k20 - k10 * k10 == doctest::Approx(0.3003812918357949).epsilon(1e-6));
}

TEST_CASE("composition and expectation require solved weights") {
    QuasiSpec empty;
    CHECK_THROWS_AS(composed_diagram(empty), std::invalid_argument);
    CHECK_THROWS_AS(quasi_expectation(empty, {0.0}), std::invalid_argument);

    QuasiSpec mismatched;
    mismatched.nodes = {-0.5, 0.0, 0.5};
    mismatched.weights = {1.0};
    CHECK_THROWS_AS(composed_diagram(mismatched), std::invalid_argument);
}

TEST_CASE("csv export records the band and the weights") {
    QuasiSpec spec;
    spec.order_K = 1;
    spec.band_width_Gamma = 0.5;
    spec.nodes = {-0.5, 0.0, 0.5};
    spec.weights = {-42.5, 86.0, -42.5};
    spec.residual = 2.5e-13;
    spec.condition = 16537.0;
    std::ostringstream out;
    write_quasi_csv(spec, out);

    std::istringstream in(out.str());
    std::string line;
    REQUIRE(std::getline(in, line));
    std::istringstream head(line);
    std::string hash, kf, gf, rf, cf;
    head >> hash >> kf >> gf >> rf >> cf;
    CHECK(hash == "#");
    CHECK(kf == "K=1");
    CHECK(gf == "Gamma=0.5");
    REQUIRE(rf.rfind("residual=", 0) == 0);
    CHECK(std::stod(rf.substr(9)) == spec.residual);
    REQUIRE(cf.rfind("condition=", 0) == 0);
    CHECK(std::stod(cf.substr(10)) == spec.condition);

    REQUIRE(std::getline(in, line));
    CHECK(line == "i,gamma_i,h_i");
    int rows = 0;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string f0, f1, f2;
        REQUIRE(std::getline(row, f0, ','));
        REQUIRE(std::getline(row, f1, ','));
        REQUIRE(std::getline(row, f2));
        CHECK(std::stoi(f0) == rows - 1);
        CHECK(std::stod(f1) == spec.nodes[rows]);
        CHECK(std::stod(f2) == spec.weights[rows]);
        ++rows;
    }
    CHECK(rows == 3);
}

}  // TEST_SUITE
