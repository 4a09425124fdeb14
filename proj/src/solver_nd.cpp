#include "desitter/solver_nd.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "desitter/errors.hpp"
#include "desitter/kernels.hpp"

namespace desitter {

namespace {

constexpr double kPi = std::numbers::pi;

void check_dim(int n) {
    if (n != 2 && n != 3) throw UnsupportedDimension("only n = 2 and n = 3 are supported");
}

struct Angular {
    double value;
    double err;
};

// Doubles the angular resolution until two successive sums agree.
template <class Sum>
Angular adapt_angular(const Sum& sum, const SphericalMeanCfg& cfg) {
    int N = cfg.n_angular;
    double prev = sum(N);
    for (;;) {
        N *= 2;
        const double cur = sum(N);
        const double diff = std::abs(cur - prev);
        if (diff <= cfg.radial_rule.abs_tol + cfg.radial_rule.rel_tol * std::abs(cur)) return {cur, diff};
        if (N >= cfg.max_angular) throw AccuracyError("angular resolution exhausted", cur, diff);
        prev = cur;
    }
}

// Mean of h over the unit sphere S^2 (GL in cos(theta) x trapezoid in azimuth).
template <class H>
double sphere_sum(const H& h, int N) {
    const GaussRule& g = gauss_legendre_rule(N);
    double total = 0.0;
    for (int i = 0; i < N; ++i) {
        const double mu = g.x[i];
        const double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
        double ring = 0.0;
        for (int j = 0; j < N; ++j) {
            const double az = 2.0 * kPi * (j + 0.5) / N;
            ring += h(Vec3{s * std::cos(az), s * std::sin(az), mu});
        }
        total += g.w[i] * ring / N;
    }
    return 0.5 * total;
}

template <class H>
double circle_sum(const H& h, int N) {
    double total = 0.0;
    for (int j = 0; j < N; ++j) {
        const double az = 2.0 * kPi * j / N;
        total += h(Vec3{std::cos(az), std::sin(az), 0.0});
    }
    return total / N;
}

// (1/2pi) * int_{|y|<=1} h(y) / sqrt(1-|y|^2) dy with |y| = sin(eta).
template <class H>
double disc_sum(const H& h, int N) {
    const GaussRule& g = gauss_legendre_rule(N);
    double total = 0.0;
    for (int i = 0; i < N; ++i) {
        const double eta = 0.25 * kPi * (g.x[i] + 1.0);
        const double s = std::sin(eta);
        double ring = 0.0;
        for (int j = 0; j < N; ++j) {
            const double az = 2.0 * kPi * j / N;
            ring += h(Vec3{s * std::cos(az), s * std::sin(az), 0.0});
        }
        total += g.w[i] * s * ring / N;
    }
    return 0.25 * kPi * total;
}

Vec3 shifted(const Vec3& x, double r, const Vec3& y) { return {x[0] + r * y[0], x[1] + r * y[1], x[2] + r * y[2]}; }

// Closed form for radial data in R^3: r v solves the string equation in |x|.
double radial3_wave(const RadialOperand& op, double rho, double r) {
    auto G = [&](double s) { return s * op.profile(std::abs(s)); };
    if (rho < 1e-7) return op.profile(r) + r * op.profile_deriv(r);
    return (G(r + rho) - G(r - rho)) / (2.0 * rho);
}

struct Window {
    double lo;
    double hi;
};

// Radii r in [0, L] at which the wave solution at x can feel data supported in |y| <= R.
std::vector<Window> radius_windows(int n, double rho, double R, double L) {
    std::vector<Window> out;
    if (!std::isfinite(R)) {
        out.push_back({0.0, L});
        return out;
    }
    const double lo = std::max(0.0, rho - R);
    const double hi = n == 3 ? std::min(L, rho + R) : L;
    if (!(hi > lo)) return out;
    // kinks where the sphere first touches, swallows, or leaves the support
    std::vector<double> br{lo, hi};
    for (double c : {R - rho, rho + R}) {
        if (c > lo && c < hi) br.push_back(c);
    }
    std::sort(br.begin(), br.end());
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
        if (br[i + 1] > br[i]) out.push_back({br[i], br[i + 1]});
    }
    return out;
}

}  // namespace

void SphericalMeanCfg::validate() const {
    if (n_angular < 16 || n_angular % 2 != 0) throw SetupError("n_angular must be even and at least 16");
    radial_rule.validate();
}

double spherical_mean(const RadialOperand& op, const Vec3& x, double r, const SphericalMeanCfg& cfg) {
    check_dim(op.n);
    cfg.validate();
    if (r < 0.0) r = -r;  // even extension
    if (r == 0.0) return op.value(x);
    auto h = [&](const Vec3& y) { return op.value(shifted(x, r, y)); };
    if (op.n == 3) return adapt_angular([&](int N) { return sphere_sum(h, N); }, cfg).value;
    return adapt_angular([&](int N) { return circle_sum(h, N); }, cfg).value;
}

WaveValue wave_kirchhoff(const RadialOperand& op, const Vec3& x, double r, const SphericalMeanCfg& cfg) {
    check_dim(op.n);
    if (r < 0.0) throw DomainError("wave_kirchhoff: r must be non-negative");
    if (r == 0.0) return {op.value(x), 0.0};
    const double rho = norm(x);
    if (cfg.use_radial_profile && op.is_radial()) {
        if (op.n == 3) return {radial3_wave(op, rho, r), 0.0};
        if (rho == 0.0) {
            auto g = [&](double eta) {
                const double s = std::sin(eta);
                return (op.profile(r * s) + r * s * op.profile_deriv(r * s)) * s;
            };
            const QuadResult q = integrate(g, 0.0, 0.5 * kPi, cfg.radial_rule);
            return {q.value, q.est_err};
        }
    }
    // value plus r times the radial derivative, both from one angular pass
    auto h = [&](const Vec3& y) {
        const Vec3 p = shifted(x, r, y);
        const Vec3 gr = op.gradient(p);
        return op.value(p) + r * dot(gr, y);
    };
    Angular a = op.n == 3 ? adapt_angular([&](int N) { return sphere_sum(h, N); }, cfg)
                          : adapt_angular([&](int N) { return disc_sum(h, N); }, cfg);
    return {a.value, a.err};
}

SolutionSample solve_cauchy_nd(const RadialOperand& phi0, const RadialOperand& phi1, const Vec3& x, double t,
                               const SphericalMeanCfg& cfg) {
    check_dim(phi0.n);
    if (phi1.n != phi0.n) throw UnsupportedDimension("phi0 and phi1 live in different dimensions");
    if (!(t > 0.0)) throw DomainError("solve_cauchy_nd: t must be positive");
    cfg.validate();
    const double phi = std::expm1(t);
    const double rho = norm(x);
    SolutionSample out{0.0, 0.0, t, x[0]};
    double wave_err = 0.0;
    auto v = [&](const RadialOperand& op, double r) {
        const WaveValue w = wave_kirchhoff(op, x, r, cfg);
        wave_err = std::max(wave_err, w.est_err);
        return w.value;
    };

    const WaveValue edge = wave_kirchhoff(phi0, x, phi, cfg);
    out.u = std::exp(-0.5 * t) * edge.value;
    out.est_err = edge.est_err;

    const QuadratureConfig de = cfg.radial_rule.with_rule(Rule::DoubleExponential);
    if (phi0.support_radius > 0.0) {
        for (const Window& w : radius_windows(phi0.n, rho, phi0.support_radius, phi)) {
            QuadResult q;
            if (w.hi >= phi) {
                auto g = [&](double r, double pr) { return 2.0 * v(phi0, r) * kernel_K0_unchecked(r, t, pr); };
                q = integrate_to_endpoint(g, w.lo, phi, de);
            } else {
                auto g = [&](double r) { return 2.0 * v(phi0, r) * kernel_K0_unchecked(r, t); };
                q = integrate(g, w.lo, w.hi, de);
            }
            out.u += q.value;
            out.est_err += q.est_err;
        }
    }
    if (phi1.support_radius > 0.0) {
        for (const Window& w : radius_windows(phi1.n, rho, phi1.support_radius, phi)) {
            auto g = [&](double r) { return 2.0 * v(phi1, r) * propagator_value(r, t, 0.0); };
            const QuadResult q = integrate(g, w.lo, w.hi, cfg.radial_rule);
            out.u += q.value;
            out.est_err += q.est_err;
        }
    }
    // kernel masses are at most 1 and t respectively
    out.est_err += wave_err * (1.0 + t);
    return out;
}

SolutionSample solve_source_nd(const SourceND& f, const Vec3& x, double t, const SphericalMeanCfg& cfg) {
    check_dim(f.n);
    if (!(t > 0.0)) throw DomainError("solve_source_nd: t must be positive");
    cfg.validate();
    SolutionSample out{0.0, 0.0, t, x[0]};
    const double R = f.support_radius;
    if (R == 0.0) return out;
    const double et = std::exp(t);
    const double rho = norm(x);
    double inner_err = 0.0;
    QuadratureConfig icfg = cfg.radial_rule;
    icfg.abs_tol *= 0.1;
    icfg.rel_tol *= 0.1;

    auto inner = [&](double b) {
        const double w = et - std::exp(b);
        const RadialOperand op = f.at_time(b);
        QuadResult acc;
        for (const Window& win : radius_windows(f.n, rho, R, w)) {
            auto g = [&](double r) {
                const WaveValue v = wave_kirchhoff(op, x, r, cfg);
                inner_err = std::max(inner_err, v.est_err * t);
                return 2.0 * v.value * propagator_value(std::min(r, w), t, b);
            };
            acc += integrate(g, win.lo, win.hi, icfg);
        }
        inner_err = std::max(inner_err, acc.est_err);
        return acc.value;
    };

    std::vector<double> br{0.0, t};
    if (t > 2e-2) br.push_back(t - 1e-2);
    if (std::isfinite(R)) {
        for (double c : {rho - R, R - rho, rho + R}) {
            if (c > 0.0 && c < et - 1.0) br.push_back(std::log(et - c));
        }
    }
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    QuadResult total;
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
        const bool tail = i + 2 == br.size() && br.size() > 2;
        total += integrate(inner, br[i], br[i + 1],
                           tail ? cfg.radial_rule.with_rule(Rule::DoubleExponential) : cfg.radial_rule);
    }
    out.u = total.value;
    out.est_err = total.est_err + t * inner_err;
    return out;
}

HuygensReport huygens_tail_probe(const RadialOperand& phi1, const Vec3& x, const std::vector<double>& t_grid,
                                 const SphericalMeanCfg& cfg) {
    if (phi1.n != 3) throw UnsupportedDimension("the Huygens probe is defined for n = 3");
    const RadialOperand zero = RadialOperand::zero(3);
    HuygensReport rep;
    const double R = phi1.support_radius;
    const double rho = norm(x);
    for (double t : t_grid) {
        HuygensRow row;
        row.t = t;
        const SolutionSample s = solve_cauchy_nd(zero, phi1, x, t, cfg);
        row.u_desitter = s.u;
        row.est_err = s.est_err;
        const double tau = std::expm1(t);
        row.u_flat = tau * spherical_mean(phi1, x, tau, cfg);
        if (tau > rho + R) rep.tail_max = std::max(rep.tail_max, std::abs(row.u_desitter));
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace desitter
