#include <cmath>
#include <random>

#include "doctest.h"
#include "ohlc/kernels.hpp"

using namespace ohlc;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Composite Simpson on [a, b]; n must be even.
template <typename F>
double simpson(F f, double a, double b, int n) {
    const double h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int i = 1; i < n; ++i)
        sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

// F(n) = 2^{(1+n)/2} (2+n) Gamma((3+n)/2): the gamma = 0 value of the ray
// moment of one image term times |2a-c|^{3+n}.
double f_const(int n) {
    return std::pow(2.0, 0.5 * (1.0 + n)) * (2.0 + n) * std::tgamma(0.5 * (3.0 + n));
}

// Defining integral of the single-image ray moment at gamma = 0:
//   I_n(a, c, 0) = int_0^inf rho^{2+n} ((2a-c)^2 rho^2 - 1)
//                  exp(-(2a-c)^2 rho^2 / 2) drho.
double in_gamma0(int n, double a, double c) {
    const double q = 2.0 * a - c;
    const double A = q * q;
    const double span = 14.0 / std::sqrt(A);
    return simpson(
        [&](double rho) {
            return std::pow(rho, 2 + n) * (A * rho * rho - 1.0) *
                   std::exp(-0.5 * A * rho * rho);
        },
        0.0, span, 20000);
}

struct GnRow {
    double gamma, theta, phi, g0, g1, g2, g4;
};

// Radial moments of the joint density on fixed rays, frozen from a
// high-precision independent evaluation of the image series.
const GnRow kGnRows[] = {
    {0.0, 0.3, -0.9, 3.067557039454318e-01, 3.110936272642258e-01, 3.324408236023954e-01,
     4.428844295701392e-01},
    {0.0, 0.0, -0.7853981633974483, 2.536056924121503e-01, 2.300432818021511e-01,
     2.184558715157301e-01, 2.255370145625667e-01},
    {0.0, -0.2, -1.2, 3.505701950791601e-01, 3.663703631775275e-01, 4.023336662296902e-01,
     5.617791652636904e-01},
    {0.0, 0.5, -0.3, 8.279808757069923e-01, 1.130544856816155e+00, 1.644664201218315e+00,
     4.168763584595383e+00},
    {0.0, 0.72, -0.1, 4.357713352782609e+00, 1.022109004753232e+01, 2.573404110777464e+01,
     1.975648754798147e+02},
    {0.0, -0.55, -1.35, 1.192767937603257e+00, 1.841150628484406e+00, 3.034398125629212e+00,
     9.903989584793367e+00},
    {0.5, 0.3, -0.9, 3.146651384752913e-01, 3.217131175697031e-01, 3.467036240388110e-01,
     4.700442948024418e-01},
    {0.5, 0.0, -0.7853981633974483, 2.238062380315443e-01, 2.030124836507936e-01,
     1.927866299640502e-01, 1.990357167696419e-01},
    {0.5, -0.2, -1.2, 2.789469596025300e-01, 2.899932164315636e-01, 3.167220785507032e-01,
     4.372240168201647e-01},
    {0.5, 0.5, -0.3, 1.017257661960859e+00, 1.419519108486020e+00, 2.111546041544867e+00,
     5.595889437656375e+00},
    {0.5, 0.72, -0.1, 8.524892275935107e+00, 2.119217390423455e+01, 5.650234714004343e+01,
     4.841467200460626e+02},
    {0.5, -0.55, -1.35, 7.069922601143884e-01, 1.062412421661877e+00, 1.703661325230114e+00,
     5.265425701342496e+00},
    {1.0, 0.3, -0.9, 2.516905638283597e-01, 2.594540825612094e-01, 2.820103134597658e-01,
     3.891626008759522e-01},
    {1.0, 0.0, -0.7853981633974483, 1.538196279256207e-01, 1.395283034739180e-01,
     1.325001838685340e-01, 1.367951142322514e-01},
    {1.0, -0.2, -1.2, 1.729533044742882e-01, 1.788703188588505e-01, 1.943008760512490e-01,
     2.652070686914955e-01},
    {1.0, 0.5, -0.3, 9.805613663850333e-01, 1.399299622997592e+00, 2.129453202228196e+00,
     5.904288159122624e+00},
    {1.0, 0.72, -0.1, 1.363666547933344e+01, 3.601746299886501e+01, 1.018695163572480e+02,
     9.762117589430122e+02},
    {1.0, -0.55, -1.35, 3.297589118083681e-01, 4.828777985796576e-01, 7.540123173345907e-01,
     2.209049510321012e+00},
    {2.0, 0.3, -0.9, 7.635548042793712e-02, 8.004568031358492e-02, 8.853562676671102e-02,
     1.266474903291860e-01},
    {2.0, 0.0, -0.7853981633974483, 3.432179821301564e-02, 3.113297269937404e-02,
     2.956478724628241e-02, 3.052311574616501e-02},
    {2.0, -0.2, -1.2, 3.145655531041569e-02, 3.220128704597935e-02, 3.460714054536197e-02,
     4.619129345404754e-02},
    {2.0, 0.5, -0.3, 4.406974042165492e-01, 6.589408802307730e-01, 1.051075206836155e+00,
     3.195623736536803e+00},
    {2.0, 0.72, -0.1, 1.946412322931700e+01, 5.835306486950884e+01, 1.863793550956862e+02,
     2.241596448511056e+03},
    {2.0, -0.55, -1.35, 3.486930894336226e-02, 4.862590350202811e-02, 7.217567459920399e-02,
     1.906838158845238e-01},
};

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("series kernels match frozen values on fixed rays") {
    for (const GnRow& r : kGnRows) {
        const DriftParam g{r.gamma};
        CHECK(g_n_series(0, r.theta, r.phi, g).value ==
              doctest::Approx(r.g0).epsilon(1e-12));
        CHECK(g_n_series(1, r.theta, r.phi, g).value ==
              doctest::Approx(r.g1).epsilon(1e-12));
        CHECK(g_n_series(2, r.theta, r.phi, g).value ==
              doctest::Approx(r.g2).epsilon(1e-12));
        CHECK(g_n_series(4, r.theta, r.phi, g).value ==
              doctest::Approx(r.g4).epsilon(1e-12));
    }
}

TEST_CASE("kernel metadata carries the query point") {
    const KernelValue kv = g_n_series(2, 0.3, -0.9, DriftParam{0.5});
    CHECK(kv.n == 2);
    CHECK(kv.theta == 0.3);
    CHECK(kv.phi == -0.9);
    CHECK(kv.gamma == 0.5);
    CHECK(kv.est_error > 0.0);
    CHECK(kv.est_error < 1e-6 * kv.value + 1e-9);
}

TEST_CASE("boundary rays evaluate to zero, outside rays throw") {
    const double phi = -0.9;
    const double lo = std::atan(std::sin(phi));
    const double hi = std::atan(std::cos(phi));
    for (int n : {0, 1, 2, 4}) {
        CHECK(g_n_series(n, lo, phi, DriftParam{0.5}).value == 0.0);
        CHECK(g_n_series(n, hi, phi, DriftParam{0.5}).value == 0.0);
        CHECK(g_n_series(n, 0.3, 0.0, DriftParam{0.5}).value == 0.0);
        CHECK(g_n_series(n, -0.3, -kPi / 2.0, DriftParam{0.5}).value == 0.0);
        CHECK_THROWS_AS(g_n_series(n, hi + 1e-3, phi, DriftParam{0.5}), std::domain_error);
        CHECK_THROWS_AS(g_n_series(n, lo - 1e-3, phi, DriftParam{0.5}), std::domain_error);
        CHECK_THROWS_AS(g_n_series(n, 0.1, 0.2, DriftParam{0.5}), std::domain_error);
        CHECK_THROWS_AS(g_n_radial(n, 0.1, 0.2, DriftParam{0.5}), std::domain_error);
    }
}

TEST_CASE("radial quadrature agrees with the series route") {
    struct Pt {
        double theta, phi, gamma;
    };
    const Pt pts[] = {{0.3, -0.9, 0.5}, {0.5, -0.3, 1.0}, {-0.55, -1.35, 2.0},
                      {0.0, -kPi / 4.0, 0.0}};
    for (const Pt& p : pts)
        for (int n : {1, 2, 4}) {
            const double a = g_n_series(n, p.theta, p.phi, DriftParam{p.gamma}).value;
            const double b = g_n_radial(n, p.theta, p.phi, DriftParam{p.gamma}).value;
            CHECK(b == doctest::Approx(a).epsilon(1e-6));
        }
}

TEST_CASE("kernel reflection symmetry (theta,phi,gamma) -> (-theta,-pi/2-phi,-gamma)") {
    struct Pt {
        double theta, phi, gamma;
    };
    const Pt pts[] = {{0.3, -0.9, 0.7}, {0.2, -0.4, 1.3}, {-0.1, -1.0, 0.5}};
    for (const Pt& p : pts)
        for (int n : {0, 1, 2, 4}) {
            const double a = g_n_series(n, p.theta, p.phi, DriftParam{p.gamma}).value;
            const double b =
                g_n_series(n, -p.theta, -kPi / 2.0 - p.phi, DriftParam{-p.gamma}).value;
            CHECK(b == doctest::Approx(a).epsilon(1e-8));
        }
}

TEST_CASE("single-image ray moment at gamma = 0 matches the closed form") {
    const double samples[][2] = {{0.8, 0.3}, {-0.5, 0.2}, {1.2, -0.4}, {0.35, -0.15}};
    for (const auto& s : samples)
        for (int n : {0, 1, 2, 4}) {
            const double scale = std::pow(std::abs(2.0 * s[0] - s[1]), 3 + n);
            CHECK(in_gamma0(n, s[0], s[1]) * scale ==
                  doctest::Approx(f_const(n)).epsilon(1e-8));
        }
    CHECK(f_const(1) == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(f_const(2) == doctest::Approx(15.03976964778600).epsilon(1e-14));
}

TEST_CASE("angular integral of 1 is the exact weighted area pi/2") {
    const double area = angular_integral([](double, double) { return 1.0; });
    CHECK(area == doctest::Approx(kPi / 2.0).epsilon(1e-10));
}

TEST_CASE("angular integral is linear") {
    auto f = [](double t, double p) { return std::cos(t) + 0.3 * p; };
    auto g = [](double t, double p) { return t * p; };
    const double fi = angular_integral(f);
    const double gi = angular_integral(g);
    const double combo = angular_integral(
        [&](double t, double p) { return 2.0 * f(t, p) - 0.7 * g(t, p); });
    CHECK(combo == doctest::Approx(2.0 * fi - 0.7 * gi).epsilon(1e-10));
}

TEST_CASE("radial-angular decomposition of total mass and E[R^2]") {
    for (double gamma : {0.0, 0.5, 1.0}) {
        const double mass = angular_integral([&](double t, double p) {
            return g_n_series(0, t, p, DriftParam{gamma}).value;
        });
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-5));
    }
    for (double gamma : {0.0, 1.0, 1.7}) {
        const double er2 = angular_integral([&](double t, double p) {
            return g_n_series(2, t, p, DriftParam{gamma}).value;
        });
        CHECK(er2 == doctest::Approx(3.0 + 2.0 * gamma * gamma).epsilon(1e-5));
    }
}

TEST_CASE("efficiency functionals against frozen values") {
    CHECK(cal_E(DriftParam{0.0}) == doctest::Approx(7.947148713898461e-01).epsilon(1e-12));
    CHECK(cal_E(DriftParam{0.5}) == doctest::Approx(7.934361597776458e-01).epsilon(1e-12));
    CHECK(cal_E(DriftParam{1.0}) == doctest::Approx(7.915823933982720e-01).epsilon(1e-12));
    CHECK(cal_E(DriftParam{2.0}) == doctest::Approx(8.010275905529887e-01).epsilon(1e-12));
    CHECK(cal_F(DriftParam{0.0}) == doctest::Approx(9.415476516139907e-01).epsilon(1e-12));
    CHECK(cal_F(DriftParam{1.5}) == doctest::Approx(9.389750664188690e-01).epsilon(1e-12));
}

TEST_CASE("functionals are even in gamma and bounded by 1") {
    CHECK(cal_E(DriftParam{-1.0}) ==
          doctest::Approx(cal_E(DriftParam{1.0})).epsilon(1e-12));
    CHECK(cal_F(DriftParam{-0.5}) ==
          doctest::Approx(cal_F(DriftParam{0.5})).epsilon(1e-12));
    for (double g : {0.0, 0.7, 1.5}) {
        const double e = cal_E(DriftParam{g});
        const double f = cal_F(DriftParam{g});
        CHECK(e > 0.0);
        CHECK(e < 1.0);
        CHECK(f > 0.0);
        CHECK(f < 1.0);
        CHECK(f > e);  // volatility estimation is the easier problem
    }
}

TEST_CASE("cross functionals: diagonal consistency and frozen values") {
    CHECK(cal_E_cross(DriftParam{0.5}, DriftParam{0.5}) ==
          doctest::Approx(cal_E(DriftParam{0.5})).epsilon(1e-10));
    CHECK(cal_E_cross(DriftParam{1.0}, DriftParam{0.0}) ==
          doctest::Approx(9.019902751821129e-01).epsilon(1e-12));
    CHECK(cal_E_cross(DriftParam{2.0}, DriftParam{0.5}) ==
          doctest::Approx(1.124716099236678e+00).epsilon(1e-12));
    CHECK(cal_E_cross(DriftParam{0.0}, DriftParam{1.0}) ==
          doctest::Approx(7.997064908564808e-01).epsilon(1e-12));
    CHECK(cal_M_cross(DriftParam{1.0}, DriftParam{0.0}) ==
          doctest::Approx(1.041586845738400e+00).epsilon(1e-12));
    CHECK(cal_M_cross(DriftParam{1.5}, DriftParam{1.0}) ==
          doctest::Approx(9.541461396870254e-01).epsilon(1e-12));
    // Reflection of both arguments.
    CHECK(cal_E_cross(DriftParam{-1.5}, DriftParam{-0.5}) ==
          doctest::Approx(cal_E_cross(DriftParam{1.5}, DriftParam{0.5})).epsilon(1e-10));
}

TEST_CASE("cross functionals give the published mean/variance at gamma0 = 0") {
    const double e0 = cal_E(DriftParam{0.0});
    const double ec = cal_E_cross(DriftParam{1.5}, DriftParam{0.0});
    const double mc = cal_M_cross(DriftParam{1.5}, DriftParam{0.0});
    CHECK(ec / e0 == doctest::Approx(1.316277376124605e+00).epsilon(1e-10));
    CHECK((mc - ec * ec) / (e0 * e0) ==
          doctest::Approx(4.987775964843632e-01).epsilon(1e-9));
}

TEST_CASE("moments of a constant diagram reduce to plain kernel integrals") {
    DiagramTable ones;
    ones.kind = DiagramKind::variance;
    ones.n_phi = 16;
    ones.n_theta = 16;
    ones.values.assign(16 * 16, 1.0);
    CHECK(k_moments(ones, 1, DriftParam{0.0}) == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(k_moments(ones, 1, DriftParam{1.0}) == doctest::Approx(5.0).epsilon(1e-6));
}

}  // TEST_SUITE
