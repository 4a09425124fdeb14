#include <cmath>
#include <random>

#include <doctest.h>

#include "desitter/errors.hpp"
#include "desitter/kernels.hpp"
#include "desitter/quadrature.hpp"
#include "desitter/special_fn.hpp"

using namespace desitter;

TEST_CASE("cone classification") {
    CHECK(classify_cone(ConeQuery::line(0, 1, 0, 0)) == ConeClass::Forward);
    CHECK(classify_cone(ConeQuery::line(std::expm1(1.0), 1, 0, 0)) == ConeClass::Boundary);
    CHECK(classify_cone(ConeQuery::line(5, 1, 0, 0)) == ConeClass::Outside);
    CHECK(classify_cone(ConeQuery::line(0, 0, 0, 1)) == ConeClass::Backward);
    CHECK(classify_cone(ConeQuery::line(0.2, 1, 0, 1)) == ConeClass::Outside);
    ConeQuery q3{{0.3, 0.4, 0.0}, 1.0, {0, 0, 0}, 0.0};
    CHECK(q3.distance() == doctest::Approx(0.5));
    CHECK(classify_cone(q3) == ConeClass::Forward);
}

TEST_CASE("propagator values") {
    const double b = 0.0, t = 1.0;
    const double edge = std::exp(t) - std::exp(b);
    CHECK(propagator_E(ConeQuery::line(edge, t, 0, b)).value == doctest::Approx(0.5 * std::exp(-0.5)).epsilon(1e-14));
    CHECK(propagator_E(ConeQuery::line(0, 1, 0, 1)).value == doctest::Approx(0.5 * std::exp(-1.0)).epsilon(1e-14));
    CHECK(propagator_E(ConeQuery::line(0.3, 1, 0, 0)).value == propagator_E(ConeQuery::line(-0.3, 1, 0, 0)).value);
    CHECK(propagator_E(ConeQuery::line(0.3, 1, 0, 0)).value == doctest::Approx(0.2858109349275178).epsilon(1e-14));
    CHECK_THROWS_AS(propagator_E(ConeQuery::line(5, 1, 0, 0)), SupportError);
}

TEST_CASE("Riemann function") {
    CharCoords c{2.0, -1.0, 2.0, -1.0};
    CHECK(riemann_R(c) == doctest::Approx(1.0).epsilon(1e-15));
    auto cc = CharCoords::from_spacetime(0.4, 1.3, 0.2);
    CHECK(cc.x() == doctest::Approx(0.4));
    CHECK(cc.t() == doctest::Approx(1.3));
    const double R = riemann_R(cc);
    CHECK(R == doctest::Approx(2 * std::exp(1.3) * propagator_E(ConeQuery::line(0.4, 1.3, 0, 0.2)).value).epsilon(1e-13));
    CHECK_THROWS_AS(riemann_R(CharCoords{-5.0, -6.0, 1.0, -1.0}), DomainError);
}

TEST_CASE("K1 values") {
    CHECK(kernel_K1(std::expm1(1.0), 1.0).value == doctest::Approx(0.5 * std::exp(-0.5)).epsilon(1e-14));
    CHECK(kernel_K1(0.0, std::log(2.0)).value == doctest::Approx(0.34322012515458754).epsilon(1e-14));
    CHECK_THROWS_AS(kernel_K1(2.0, 1.0), SupportError);
    CHECK_THROWS_AS(kernel_K1(-0.1, 1.0), SupportError);
}

TEST_CASE("K0 values against an independent oracle") {
    CHECK(kernel_K0(0.5, 1.0).value == doctest::Approx(0.1100286671474231).epsilon(1e-13));
    CHECK(kernel_K0(0.0, 2.0).value == doctest::Approx(0.0423180801006555).epsilon(1e-13));
    CHECK(kernel_K0(1.5, 2.0).value == doctest::Approx(0.04313159961524543).epsilon(1e-13));
    CHECK(kernel_K0(3.0, 2.0).value == doctest::Approx(0.04587073781139554).epsilon(1e-13));
    CHECK(kernel_K0(0.0, 0.1).value == doctest::Approx(0.2317204332).epsilon(1e-9));
    CHECK(kernel_K0(0.0, 1.0).value == doctest::Approx(0.1087122406).epsilon(1e-9));
    CHECK(kernel_K0(0.0, 5.0).value == doctest::Approx(0.0021445172).epsilon(1e-8));
    const KernelValue deep = kernel_K0(100.0, 12.0);
    CHECK(deep.regime == KernelRegime::NearSingularLocus);
    CHECK(deep.value == doctest::Approx(1.955763903601772e-06).epsilon(1e-10));
    CHECK(kernel_K0(0.0, 12.0).value == doctest::Approx(1.955763534438144e-06).epsilon(1e-10));
    CHECK_THROWS_AS(kernel_K0(std::expm1(1.0), 1.0), SingularityError);
}

TEST_CASE("K0 stays bounded up to the edge of its support") {
    const double t = 1.0, phi = std::expm1(t);
    const double edge = kernel_K0_unchecked(phi, t);
    CHECK(edge == doctest::Approx(0.127670).epsilon(1e-5));
    for (double d : {1e-3, 1e-6, 1e-9}) {
        CHECK(std::abs(kernel_K0(phi - d, t).value - edge) < 1e-2);
    }
}

TEST_CASE("K0 matches the explicit bracket and the b-derivative of E") {
    for (double t : {0.3, 1.0, 2.0}) {
        const double phi = std::expm1(t);
        for (double frac : {0.0, 0.3, 0.7}) {
            const double z = frac * phi;
            CHECK(kernel_K0(z, t).value == doctest::Approx(-dE_dt0_bracket(z, t)).epsilon(1e-10));
        }
    }
    const double h = 1e-5;
    auto E = [](double b) { return propagator_E(ConeQuery::line(0.5, 1.0, 0.0, b)).value; };
    const double fd = (E(-h) - E(h)) / (2 * h);
    CHECK(std::abs(fd - kernel_K0(0.5, 1.0).value) < 1e-6);
}

TEST_CASE("kernel masses") {
    QuadratureConfig cfg;
    cfg.rule = Rule::DoubleExponential;
    for (double t : {0.1, 0.5, 1.0, 2.0, 4.0}) {
        const double phi = std::expm1(t);
        auto k1 = [t](double z) { return kernel_K1(z, t).value; };
        auto k0 = [t](double z, double pz) { return kernel_K0_unchecked(z, t, pz); };
        const double m1 = integrate(k1, 0.0, phi, cfg).value;
        const double m0 = integrate_to_endpoint(k0, 0.0, phi, cfg).value;
        CHECK(m1 == doctest::Approx(t / 2).epsilon(1e-10));
        CHECK(m0 == doctest::Approx((1 - std::exp(-t / 2)) / 2).epsilon(1e-10));
    }
}

TEST_CASE("identity ledger") {
    LedgerConfig cfg;
    cfg.t_samples = {0.5, 1.0, 2.0};
    cfg.samples_per_t = 10;
    const LedgerReport rep = identity_ledger(cfg);
    CHECK(rep.rows.size() == 9u * 30u);
    for (const auto& [id, err] : rep.max_abs_err) {
        INFO(id);
        CHECK(err <= 1e-8);
    }
    // explicit check of the boundary value at (1,1)
    const double lhs = propagator_E(ConeQuery::line(1.0, 1.0, 0.0, std::log(std::exp(1.0) - 1.0))).value;
    CHECK(lhs == doctest::Approx(0.2313532287).epsilon(1e-9));
}
