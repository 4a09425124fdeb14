#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "desitter/errors.hpp"
#include "desitter/solver_nd.hpp"
#include "desitter/spectral.hpp"

using namespace desitter;

namespace {

constexpr double kPi = std::numbers::pi;

SolutionField radial3(const std::function<double(double)>& g, double R, double h) {
    SolutionField f;
    f.n = 3;
    f.geometry = SolutionField::Geometry::Radial;
    for (double r = 0.0; r <= R + 1e-12; r += h) {
        f.x.push_back(r);
        f.u.push_back(g(r));
    }
    f.support_lo = 0.0;
    f.support_hi = f.x.back();
    return f;
}

// (-Laplacian)^{-s} of a radial function in R^3 by direct quadrature of the Riesz kernel:
// c int rho^2 g(rho) [2 pi ((r+rho)^{2s-1} - |r-rho|^{2s-1}) / (r rho (2s-1))] drho.
double riesz3(const std::function<double(double)>& g, double s, double r, double R) {
    const double c = std::tgamma(1.5 - s) / (std::pow(4.0, s) * std::pow(kPi, 1.5) * std::tgamma(s));
    QuadratureConfig q{Rule::DoubleExponential, 1e-13, 1e-11, 14};
    if (r == 0.0) {
        // the sphere average tends to 4 pi rho^{2s-3}
        auto at0 = [&](double rho) { return rho == 0.0 ? 0.0 : 4.0 * kPi * g(rho) * std::pow(rho, 2.0 * s - 1.0); };
        return c * integrate(at0, 0.0, R, q).value;
    }
    const double e = 2.0 * s - 1.0;
    // rho = r -+ u^2 removes the |r - rho|^{2s-1} singularity
    auto side = [&](double sign) {
        return [&, sign](double u) {
            const double rho = r + sign * u * u;
            if (rho <= 0.0) return 0.0;
            // 2u |r - rho|^{2s-1} = 2 u^{4s-1}, the Jacobian folded in
            const double bracket = 2.0 * u * std::pow(r + rho, e) - 2.0 * std::pow(u, 2.0 * e + 1.0);
            return rho * g(rho) * 2.0 * kPi * bracket / (r * e);
        };
    };
    const QuadratureConfig gl{Rule::GaussLegendreComposite, 1e-13, 1e-11, 14};
    return c * (integrate(side(-1.0), 0.0, std::sqrt(r), gl).value + integrate(side(1.0), 0.0, std::sqrt(R - r), gl).value);
}

double interp(const SolutionField& f, double x) {
    const auto it = std::lower_bound(f.x.begin(), f.x.end(), x);
    const std::size_t i = std::clamp<std::size_t>(it - f.x.begin(), 1, f.x.size() - 1);
    const double w = (x - f.x[i - 1]) / (f.x[i] - f.x[i - 1]);
    return (1 - w) * f.u[i - 1] + w * f.u[i];
}

}  // namespace

TEST_CASE("periodic multiplier: plane waves are eigenfunctions") {
    const double L = kPi;
    const double s = 0.3;
    SUBCASE("n = 1") {
        const int N = 64;
        std::vector<double> u(N);
        for (int i = 0; i < N; ++i) u[i] = std::sin(3.0 * (-L + 2 * L * i / N));
        const auto v = frac_laplacian_periodic(u, 1, {N, 1, 1}, L, s);
        for (int i = 0; i < N; ++i) CHECK(v[i] == doctest::Approx(std::pow(9.0, -s) * u[i]).epsilon(1e-12));
    }
    SUBCASE("n = 2") {
        const int N = 32;
        std::vector<double> u(N * N);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                u[i * N + j] = std::sin(2.0 * (-L + 2 * L * i / N)) * std::cos(3.0 * (-L + 2 * L * j / N));
        const auto v = frac_laplacian_periodic(u, 2, {N, N, 1}, L, s);
        for (std::size_t k = 0; k < u.size(); ++k) CHECK(v[k] == doctest::Approx(std::pow(13.0, -s) * u[k]).scale(1));
    }
    SUBCASE("n = 3") {
        const int N = 16;
        std::vector<double> u(N * N * N);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                for (int k = 0; k < N; ++k)
                    u[(i * N + j) * N + k] = std::cos(1.0 * (-L + 2 * L * i / N)) *
                                             std::sin(2.0 * (-L + 2 * L * j / N)) *
                                             std::cos(2.0 * (-L + 2 * L * k / N));
        const auto v = frac_laplacian_periodic(u, 3, {N, N, N}, L, s);
        for (std::size_t k = 0; k < u.size(); ++k) CHECK(v[k] == doctest::Approx(std::pow(9.0, -s) * u[k]).scale(1));
    }
}

TEST_CASE("periodic multiplier commutes with grid translations") {
    const int N = 24;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1, 1);
    std::vector<double> u(N * N);
    for (double& v : u) v = U(rng);
    auto shift = [&](const std::vector<double>& a) {
        std::vector<double> b(a.size());
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) b[((i + 5) % N) * N + (j + 2) % N] = a[i * N + j];
        return b;
    };
    const auto a = frac_laplacian_periodic(shift(u), 2, {N, N, 1}, 2.0, 0.4);
    const auto b = shift(frac_laplacian_periodic(u, 2, {N, N, 1}, 2.0, 0.4));
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == doctest::Approx(b[k]).scale(1).epsilon(1e-12));
}

TEST_CASE("periodic multiplier rejects bad input") {
    CHECK_THROWS_AS(frac_laplacian_periodic({1, 2, 3}, 4, {3, 1, 1}, 1.0, 0.2), UnsupportedDimension);
    CHECK_THROWS_AS(frac_laplacian_periodic({1, 2, 3}, 1, {4, 1, 1}, 1.0, 0.2), SetupError);
    CHECK_THROWS_AS(frac_laplacian_periodic({1, 2, 3}, 1, {3, 1, 1}, 1.0, -0.2), DomainError);
    CHECK(frac_laplacian_periodic({1, 2, 3}, 1, {3, 1, 1}, 1.0, 0.0) == std::vector<double>{1, 2, 3});
}

TEST_CASE("radial R^3 multiplier against the Riesz potential") {
    const double s = 0.25;
    SUBCASE("gaussian, large period") {
        auto g = [](double r) { return std::exp(-r * r); };
        const SolutionField f = radial3(g, 7.0, 0.01);
        std::vector<std::string> warn;
        const SolutionField w = frac_laplacian_neg_s(f, s, 64.0 * 7.0, 1 << 15, &warn);
        CHECK(warn.size() == 1);  // non-zero mass
        for (double r : {0.0, 0.5, 1.5}) {
            const double ref = riesz3(g, s, r, 7.0);
            CHECK(interp(w, r) == doctest::Approx(ref).epsilon(1e-3));
        }
    }
    SUBCASE("zero mass profile, default-sized period") {
        // (3 - 2 r^2) e^{-r^2} has zero integral over R^3
        auto g = [](double r) { return (3.0 - 2.0 * r * r) * std::exp(-r * r); };
        const SolutionField f = radial3(g, 7.0, 0.01);
        std::vector<std::string> warn;
        const SolutionField w = frac_laplacian_neg_s(f, s, 8.0 * 7.0, 4096, &warn);
        CHECK(warn.empty());
        for (double r : {0.5, 1.0, 2.0}) CHECK(interp(w, r) == doctest::Approx(riesz3(g, s, r, 7.0)).epsilon(1e-4));
    }
}

TEST_CASE("line multiplier") {
    SolutionField f;
    f.n = 1;
    for (int i = -600; i <= 600; ++i) {
        f.x.push_back(i * 0.01);
        f.u.push_back(std::sin(kPi * i * 0.01) * std::exp(-0.5 * i * i * 1e-4));
    }
    f.support_lo = -6;
    f.support_hi = 6;
    CHECK_THROWS_AS(frac_laplacian_neg_s(f, 0.2, 20.0, 4096), SetupError);  // L < 4x support
    CHECK_THROWS_AS(frac_laplacian_neg_s(f, 0.2, 24.0, 8), SetupError);
    CHECK(frac_laplacian_neg_s(f, 0.0, 24.0, 4096).u == f.u);
    const SolutionField w = frac_laplacian_neg_s(f, 0.2, 48.0, 8192);
    CHECK(w.support_lo == -24.0);
    // odd input, odd output
    CHECK(interp(w, 1.3) == doctest::Approx(-interp(w, -1.3)).epsilon(1e-10));
    f.n = 2;
    CHECK_THROWS_AS(frac_laplacian_neg_s(f, 0.2, 48.0, 4096), UnsupportedDimension);
}

TEST_CASE("projection from R^3 to the plane") {
    SUBCASE("gaussian profiles") {
        // sqrt(k/pi) e^{-k r^2} projects to e^{-k rho^2}
        const double k = 2.0;
        const SolutionField f = radial3([&](double r) { return std::sqrt(k / kPi) * std::exp(-k * r * r); }, 6.0, 0.005);
        const SolutionField p = project_radial_to_plane(f, {0.0, 0.4, 1.1, 7.0}, {});
        CHECK(p.n == 2);
        CHECK(p.u[0] == doctest::Approx(1.0).epsilon(1e-7));
        CHECK(p.u[1] == doctest::Approx(std::exp(-k * 0.16)).epsilon(1e-7));
        CHECK(p.u[2] == doctest::Approx(std::exp(-k * 1.21)).epsilon(1e-7));
        CHECK(p.u[3] == 0.0);
    }
    SUBCASE("projected solution equals the solution in the plane") {
        // phi1 = sqrt(k/pi) gaussian:k in R^3 projects to gaussian:k in R^2
        const double k = 1.0, t = 1.0;
        const FamilySpec fam{"gaussian", k};
        const RadialOperand phi3 = make_operand(fam, 3);
        const RadialOperand zero3 = RadialOperand::zero(3);
        const double R = phi3.support_radius + std::expm1(t);
        SolutionField u3;
        u3.n = 3;
        u3.geometry = SolutionField::Geometry::Radial;
        for (double r = 0.0; r <= R + 1e-12; r += 0.01) {
            u3.x.push_back(r);
            u3.u.push_back(std::sqrt(k / kPi) * solve_cauchy_nd(zero3, phi3, {r, 0, 0}, t).u);
        }
        u3.support_lo = 0.0;
        u3.support_hi = R;
        const SolutionField p = project_radial_to_plane(u3, {0.0, 0.8}, {std::expm1(t)});
        const RadialOperand phi2 = make_operand(fam, 2);
        const RadialOperand zero2 = RadialOperand::zero(2);
        CHECK(p.u[0] == doctest::Approx(solve_cauchy_nd(zero2, phi2, {0.0, 0, 0}, t).u).epsilon(1e-6));
        CHECK(p.u[1] == doctest::Approx(solve_cauchy_nd(zero2, phi2, {0.8, 0, 0}, t).u).epsilon(1e-6));
    }
    SolutionField line;
    line.x = {0, 1, 2, 3};
    line.u = {0, 0, 0, 0};
    CHECK_THROWS_AS(project_radial_to_plane(line, {0.0}, {}), UnsupportedDimension);
}
