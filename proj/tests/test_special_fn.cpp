#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "desitter/errors.hpp"
#include "desitter/special_fn.hpp"

using namespace desitter;
using namespace desitter::special;

namespace {
bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }
}

TEST_CASE("agm fixed points and reference value") {
    CHECK(agm(1.0, 1.0) == 1.0);
    CHECK(agm(4.0, 4.0) == 4.0);
    CHECK(agm(1.0, 0.70710678) == doctest::Approx(0.847213084144361).epsilon(1e-14));
    CHECK_THROWS_AS(agm(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(agm(1.0, -2.0), DomainError);
}

TEST_CASE("hyp_half values") {
    CHECK(hyp_half(0.0) == 1.0);
    CHECK(rel_close(hyp_half(0.5), 1.180340599016096, 1e-14));
    CHECK(rel_close(hyp_half(1.0 / 9.0), 1.0296603754637626, 1e-14));
    CHECK(std::abs(hyp_half(0.5) - 2.0 / std::numbers::pi * 1.8540746773) <= 1e-12);
    CHECK(rel_close(hyp_half(HyperArg::with_complement(1 - 1e-3, 1e-3)), 3.0819607086988163, 1e-13));
    CHECK(rel_close(hyp_half(HyperArg::with_complement(1 - 1e-8, 1e-8)), 6.746027206919547, 1e-13));
    CHECK(rel_close(hyp_half(HyperArg::with_complement(1.0, 1e-14)), 11.143640784922621, 1e-13));
    CHECK_THROWS_AS(hyp_half(1.0), SingularityError);
    CHECK_THROWS_AS(hyp_half(-0.1), DomainError);
}

TEST_CASE("hyp_minus_half values") {
    CHECK(hyp_minus_half(0.0) == 1.0);
    CHECK(rel_close(hyp_minus_half(1.0), 2.0 / std::numbers::pi, 1e-15));
    CHECK(rel_close(hyp_minus_half(0.5), 0.8598466001022378, 1e-14));
    CHECK(rel_close(hyp_minus_half(0.9), 0.7033214388515227, 1e-14));
    CHECK(rel_close(hyp_minus_half(HyperArg::with_complement(1 - 1e-3, 1e-3)), 0.6380017407344635, 1e-13));
    CHECK(rel_close(hyp_minus_half(HyperArg::with_complement(1 - 1e-8, 1e-8)), 0.636619804506168, 1e-13));
    CHECK(rel_close(hyp_minus_half(HyperArg::with_complement(1.0, 1e-14)), 0.6366197723676355, 1e-13));
    CHECK_THROWS_AS(hyp_minus_half(1.5), DomainError);
    CHECK_THROWS_AS(hyp_minus_half(-1e-3), DomainError);
}

TEST_CASE("hyp_minus_half agrees with its Gauss series") {
    for (double z : {0.01, 0.1, 0.3, 0.6}) {
        CHECK(rel_close(hyp_minus_half(z), hyp_series(-0.5, 0.5, 1.0, z).value, 1e-13));
        CHECK(rel_close(hyp_half(z), hyp_series(0.5, 0.5, 1.0, z).value, 1e-13));
    }
}

TEST_CASE("hyp_aux values and routes") {
    CHECK(hyp_aux(0.5, 0.0) == 1.0);
    CHECK(rel_close(hyp_aux(0.5, 0.25), 1.0471975511965976, 1e-12));  // asin(1/2)/(1/2)
    CHECK(rel_close(hyp_aux(1.0, 0.5), std::atanh(std::sqrt(0.5)) / std::sqrt(0.5), 1e-12));
    CHECK(rel_close(hyp_aux(0.75, 0.999), 2.2675001255106627, 1e-10));
    CHECK(rel_close(hyp_aux(1.5, 0.999), 31.622776601683793, 1e-10));
    CHECK(rel_close(hyp_aux(0.25, 0.95), 1.156149312557948, 1e-10));
    CHECK(rel_close(hyp_aux(0.75, 1.0), 2.6220575542921198, 1e-12));
    CHECK_THROWS_AS(hyp_aux(1.0, 1.0), SingularityError);
    // series route against the Euler-integral route across the switch point
    for (double beta : {0.5, 0.75, 1.5}) {
        const double z = 0.9;
        const double series = hyp_series(0.5, beta, 1.5, z).value;
        CHECK(rel_close(hyp_aux(beta, HyperArg::with_complement(0.9000000001, 0.0999999999)), series, 1e-9));
    }
}

TEST_CASE("series truncation tail bound shrinks with more terms") {
    const SeriesValue a = hyp_log_expansion(0.5, 0.5, 1.0, HyperArg::with_complement(0.95, 0.05), {4});
    const SeriesValue b = hyp_log_expansion(0.5, 0.5, 1.0, HyperArg::with_complement(0.95, 0.05), {8});
    CHECK(a.truncation.tail_bound >= 0.0);
    CHECK(b.truncation.tail_bound < a.truncation.tail_bound);
    const double exact = hyp_half(HyperArg::with_complement(0.95, 0.05));
    CHECK(std::abs(a.value - exact) <= a.truncation.tail_bound);
    CHECK(std::abs(b.value - exact) <= b.truncation.tail_bound);
}

TEST_CASE("log expansion agrees with the AGM route on the overlap") {
    for (double w : {0.099, 0.05, 0.01, 1e-3, 1e-4}) {
        const HyperArg z = HyperArg::with_complement(1.0 - w, w);
        CHECK(rel_close(hyp_log_expansion(0.5, 0.5, 1.0, z).value, hyp_half(z), 1e-9));
    }
    // deep in the logarithmic regime, compare two truncation orders
    const HyperArg deep = HyperArg::with_complement(1.0 - 1e-6, 1e-6);
    const double v2 = hyp_log_expansion(0.5, 0.5, 1.0, deep, {2}).value;
    const double v64 = hyp_log_expansion(0.5, 0.5, 1.0, deep).value;
    CHECK(rel_close(v2, v64, 1e-9));
    CHECK(rel_close(v64, hyp_half(deep), 1e-12));
    CHECK(v64 == doctest::Approx(-std::log(1e-6) / std::numbers::pi + 4 * std::log(2.0) / std::numbers::pi).epsilon(1e-5));
    CHECK_THROWS_AS(hyp_log_expansion(-0.5, 0.5, 1.0, deep), OutOfRegimeError);
    CHECK_THROWS_AS(hyp_log_expansion(0.5, 0.5, 1.0, HyperArg::of(0.5)), OutOfRegimeError);
}

TEST_CASE("kernel bracket function F(1/2,3/2;2;z)") {
    CHECK(rel_close(hyp_kernel_h(0.3), 1.1396613687192053, 1e-13));
    CHECK(rel_close(hyp_kernel_h(0.7), 1.516414778425047, 1e-12));
    CHECK(rel_close(hyp_kernel_h(HyperArg::with_complement(1 - 1e-3, 1e-3)), 4.892810746675381, 1e-12));
    CHECK(rel_close(hyp_kernel_h(HyperArg::with_complement(1 - 1e-8, 1e-8)), 12.218814927014907, 1e-12));
    CHECK(rel_close(hyp_kernel_h(HyperArg::with_complement(1.0, 1e-14)), 21.01404202511018, 1e-12));
    // the three routes meet
    for (double z : {0.45, 0.55, 0.94, 0.96}) {
        const HyperArg a = HyperArg::of(z);
        CHECK(rel_close(hyp_kernel_h(a), hyp_series(0.5, 1.5, 2.0, z).value, 1e-9));
    }
    const HyperArg near = HyperArg::with_complement(0.95, 0.05);
    CHECK(rel_close(hyp_log_expansion(0.5, 1.5, 2.0, near).value,
                    2.0 * (hyp_half(near) - hyp_minus_half(near)) / 0.95, 1e-9));
}

TEST_CASE("derivative of hyp_half") {
    CHECK(hyp_half_derivative(0.0) == 0.25);
    CHECK(hyp_half_derivative(1e-12) == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(rel_close(hyp_half_derivative(0.5), 0.5393526011883794, 1e-12));
    CHECK(rel_close(hyp_half_derivative(0.2), 0.3209681302552804, 1e-12));
    CHECK(rel_close(hyp_half_derivative(0.99), 31.478506120863237, 1e-11));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.01, 0.95);
    for (int i = 0; i < 100; ++i) {
        const double z = U(rng);
        const double h = 1e-6;
        const double fd = (hyp_half(z + h) - hyp_half(z - h)) / (2 * h);
        CHECK(rel_close(hyp_half_derivative(z), fd, 1e-6));
    }
    CHECK_THROWS_AS(hyp_half_derivative(1.0), SingularityError);
}

TEST_CASE("Legendre relation") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.05, 0.95);
    const double c = 2.0 / std::numbers::pi;
    for (int i = 0; i < 20; ++i) {
        const double k2 = U(rng);
        const double kc2 = 1.0 - k2;
        const double K = hyp_half(k2) / c, Kp = hyp_half(kc2) / c;
        const double E = hyp_minus_half(k2) / c, Ep = hyp_minus_half(kc2) / c;
        CHECK(std::abs(E * Kp + Ep * K - K * Kp - std::numbers::pi / 2) <= 1e-12);
    }
}
