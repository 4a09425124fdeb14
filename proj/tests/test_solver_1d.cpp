#include <cmath>
#include <random>

#include <doctest.h>

#include "desitter/errors.hpp"
#include "desitter/reference_fd.hpp"
#include "desitter/solver_1d.hpp"

using namespace desitter;

namespace {
CauchyData data_of(const std::string& p0, const std::string& p1, const std::string& f = "zero") {
    CauchyData d;
    d.phi0 = make_field_1d(FamilySpec::parse(p0));
    d.phi1 = make_field_1d(FamilySpec::parse(p1));
    d.f = make_source_1d(FamilySpec::parse(f));
    return d;
}
}  // namespace

TEST_CASE("exact solutions for constant data") {
    for (double t : {0.5, 1.0, 2.0}) {
        CHECK(solve_cauchy_1d(data_of("constant:1", "zero"), 0.3, t).u == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(solve_cauchy_1d(data_of("zero", "constant:1"), 0.3, t).u == doctest::Approx(t).epsilon(1e-9));
        const Source1D one = make_source_1d(FamilySpec::parse("constant:1"));
        CHECK(solve_source_1d(one, -0.7, t).u == doctest::Approx(t * t / 2).epsilon(1e-9));
        CHECK(solve_source_duhamel(one, -0.7, t).u == doctest::Approx(t * t / 2).epsilon(1e-9));
    }
    CHECK(solve_source_1d(Source1D::zero(), 0.0, 1.0).u == 0.0);
}

TEST_CASE("source data cut off outside the backward cone still gives t^2/2") {
    // cone of (0,1) reaches |y| <= e - 1 < 2
    const Source1D cut = make_source_1d(FamilySpec::parse("constant:1:2"));
    CHECK(solve_source_1d(cut, 0.0, 1.0).u == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("odd source gives zero at the origin") {
    const Source1D odd = make_source_1d(FamilySpec::parse("xgauss:1"));
    CHECK(std::abs(solve_source_duhamel(odd, 0.0, 1.2).u) < 1e-12);
    CHECK(std::abs(solve_source_1d(odd, 0.0, 1.2).u) < 1e-12);
}

TEST_CASE("two source routes agree") {
    QuadratureConfig cfg;
    cfg.abs_tol = 1e-13;
    cfg.rel_tol = 1e-12;
    Source1D f;
    f.value = [](double x, double t) { return std::exp(-(x - 0.3) * (x - 0.3)) * (1.0 + 0.5 * std::sin(t)); };
    f.support_radius = kUnbounded;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> X(-2, 2), T(0.2, 2.0);
    for (int i = 0; i < 5; ++i) {
        const double x = X(rng), t = T(rng);
        const double a = solve_source_1d(f, x, t, cfg).u;
        const double b = solve_source_duhamel(f, x, t, cfg).u;
        CHECK(std::abs(a - b) <= 1e-9);
    }
}

TEST_CASE("linearity") {
    const CauchyData d1 = data_of("gaussian:4", "zero");
    const CauchyData d2 = data_of("zero", "bump:1");
    CauchyData mix;
    const double a = 1.7, b = -0.6;
    mix.phi0.value = [&](double x) { return a * d1.phi0.value(x); };
    mix.phi0.support_radius = d1.phi0.support_radius;
    mix.phi1.value = [&](double x) { return b * d2.phi1.value(x); };
    mix.phi1.support_radius = d2.phi1.support_radius;
    for (double x : {-1.0, 0.2, 1.5}) {
        const double lhs = solve_cauchy_1d(mix, x, 1.0).u;
        const double rhs = a * solve_cauchy_1d(d1, x, 1.0).u + b * solve_cauchy_1d(d2, x, 1.0).u;
        CHECK(std::abs(lhs - rhs) < 1e-9);
    }
}

TEST_CASE("finite propagation speed") {
    const CauchyData d = data_of("bump:0.5", "bump:0.5");
    const double t = 1.0;
    const double edge = 0.5 + std::expm1(t);
    const SolutionSample out = solve_cauchy_1d(d, edge + 0.01, t);
    CHECK(std::abs(out.u) <= out.est_err + 1e-300);
    CHECK(std::abs(solve_cauchy_1d(d, edge - 0.2, t).u) > 1e-4);
}

TEST_CASE("initial traces") {
    const TraceReport r0 = initial_trace_check(data_of("gaussian:1", "zero"), {0.0, 0.5});
    CHECK(r0.pass);
    CHECK(r0.rows[0].u0 == doctest::Approx(1.0).epsilon(1e-4));
    const TraceReport r1 = initial_trace_check(data_of("zero", "gaussian:1"), {0.0});
    CHECK(r1.pass);
    CHECK(r1.rows[0].ut0 == doctest::Approx(1.0).epsilon(1e-4));
    const TraceReport rz = initial_trace_check(data_of("zero", "zero"), {0.0});
    CHECK(rz.pass);
    CHECK(rz.rows[0].u0 == 0.0);
    const TraceFit fit = extrapolate_trace(0.1, 1 + 0.2 + 0.03, 1 + 0.4 + 0.12, 1 + 0.8 + 0.48);
    CHECK(fit.value == doctest::Approx(1.0));
    CHECK(fit.slope == doctest::Approx(2.0));
}

TEST_CASE("closed form against the finite-difference oracle") {
    const CauchyData d = data_of("gaussian:4", "zero");
    FdGrid g{-6.0, 6.0, 2001, 0.9, 1.0};
    const FdSolution fd = fd_solve_1d(d, g);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < fd.field.x.size(); i += 20) {
        const double u = solve_cauchy_1d(d, fd.field.x[i], 1.0).u;
        num += (u - fd.field.u[i]) * (u - fd.field.u[i]);
        den += u * u;
    }
    CHECK(std::sqrt(num / den) < 1e-3);
    // spot value from the operation's example
    const double x = 0.5;
    const double u = solve_cauchy_1d(d, x, 1.0).u;
    const auto i = static_cast<std::size_t>(std::lround((x - g.x_min) / fd.dx));
    CHECK(std::abs(u - fd.field.u[i]) < 1e-3 * std::abs(u) + 1e-4);
}
