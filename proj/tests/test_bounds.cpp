#include <cmath>

#include <doctest.h>

#include "desitter/bounds.hpp"
#include "desitter/errors.hpp"
#include "desitter/special_fn.hpp"

using namespace desitter;

namespace {
const QuadratureConfig kQuad{Rule::DoubleExponential, 1e-15, 1e-10, 12};
}

TEST_CASE("K1 power bound at rho = 1") {
    // int K1 = t/2 = ln(z)/2
    CHECK(bound_lhs(BoundKind::K1Power, 2.0, 1.0, kQuad) == doctest::Approx(std::log(2.0) / 2.0).epsilon(1e-10));
    // (1 + ln 2) F(1/2,1/2;3/2;1/9) / 3, and F(1/2,1/2;3/2;x^2) = asin(x)/x
    const double rhs = (1.0 + std::log(2.0)) * std::asin(1.0 / 3.0);
    CHECK(bound_rhs(BoundKind::K1Power, 2.0, 1.0) == doctest::Approx(rhs).epsilon(1e-13));
    CHECK(bound_rhs(BoundKind::K1Power, 2.0, 1.0) == doctest::Approx(0.575393905092452).epsilon(1e-13));
}

TEST_CASE("closed-form right-hand shapes") {
    const double z = 5.0;
    CHECK(bound_rhs(BoundKind::K0Power, z, 1.5) == doctest::Approx(std::pow(4.0, 1.0 / 1.5) / 6.0));
    CHECK(bound_rhs(BoundKind::WeightedK0, z, -0.5) == doctest::Approx(std::pow(4.0, 0.5) / 5.0));
    CHECK(bound_rhs(BoundKind::WeightedE, z, 0.0) == doctest::Approx(4.0 * (1.0 + std::log(5.0)) / 5.0));
    CHECK(bound_rhs(BoundKind::WeightedK1, z, 0.0) == bound_rhs(BoundKind::WeightedE, z, 0.0));
}

TEST_CASE("weighted bound ratio near z = 1") {
    // the unweighted integral is (z-1)/2 to leading order, the shape (z-1)
    const double z = 1.0 + 1e-6;
    const double lhs = bound_lhs(BoundKind::WeightedE, z, 0.0, kQuad);
    CHECK(lhs / bound_rhs(BoundKind::WeightedE, z, 0.0) == doctest::Approx(0.5).epsilon(1e-5));
    // E at t0 = 0 is K1
    for (double a : {-0.5, 0.0}) {
        CHECK(bound_lhs(BoundKind::WeightedK1, 3.0, a, kQuad) ==
              doctest::Approx(bound_lhs(BoundKind::WeightedE, 3.0, a, kQuad)).epsilon(1e-9));
    }
}

TEST_CASE("K0 power at rho = 1 dominates the signed mass") {
    for (double t : {0.5, 1.0, 3.0}) {
        const double z = std::exp(t);
        const double abs_mass = bound_lhs(BoundKind::K0Power, z, 1.0, kQuad);
        CHECK(abs_mass >= (1.0 - std::exp(-0.5 * t)) / 2.0 * (1 - 1e-10));
        CHECK(abs_mass == doctest::Approx(bound_lhs(BoundKind::WeightedK0, z, 0.0, kQuad)).epsilon(1e-9));
    }
}

TEST_CASE("bound names and parameter checks") {
    for (auto k : {BoundKind::K1Power, BoundKind::WeightedE, BoundKind::WeightedK1, BoundKind::K0Power,
                   BoundKind::WeightedK0}) {
        CHECK(parse_bound_kind(to_string(k)) == k);
    }
    CHECK_THROWS_AS(parse_bound_kind("k2"), ValidationError);
    CHECK_THROWS_AS(bound_rhs(BoundKind::K1Power, 2.0, 2.0), ValidationError);
    CHECK_THROWS_AS(bound_rhs(BoundKind::WeightedE, 2.0, -1.0), ValidationError);
    CHECK_THROWS(bound_rhs(BoundKind::WeightedE, 1.0, 0.0));
}

TEST_CASE("log grid") {
    const auto g = log_grid(1.01, std::exp(8.0), 40);
    REQUIRE(g.size() == 40);
    CHECK(g.front() == 1.01);
    CHECK(g.back() == doctest::Approx(std::exp(8.0)).epsilon(1e-14));
    CHECK(g[1] / g[0] == doctest::Approx(g[39] / g[38]));
}

TEST_CASE("audit of one bound") {
    BoundsConfig cfg;
    cfg.z_grid = log_grid(1.01, 100.0, 12);
    cfg.fresh_points = 8;
    const BoundAudit a = audit_bound(BoundKind::K1Power, 1.5, cfg);
    CHECK(a.finite());
    CHECK(a.points.size() == 12);
    CHECK(a.flagged == 0);
    CHECK(a.refinement_change < 0.01);
    CHECK(a.fresh_ok);
    for (const auto& p : a.points) CHECK(p.ratio <= a.sup_ratio);
}

TEST_CASE("K0 integrability constant") {
    BoundsConfig cfg;
    const K0MassAudit m = audit_k0_mass({0.1, 1.0, 5.0}, cfg);
    REQUIRE(m.mass.size() == 3);
    CHECK(std::isfinite(m.constant));
    CHECK(m.constant == doctest::Approx(*std::max_element(m.mass.begin(), m.mass.end())));
    CHECK(m.refinement_change < 0.01);
}
