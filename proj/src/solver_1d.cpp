#include "desitter/solver_1d.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "desitter/errors.hpp"
#include "desitter/kernels.hpp"

namespace desitter {

namespace {

struct Window {
    double lo;
    double hi;
};

// Part of [0, L] on which z -> field(x + sign*z) can be nonzero.
std::optional<Window> data_window(double x, int sign, double R, double L) {
    if (!std::isfinite(R)) return Window{0.0, L};
    const double c = -sign * x;  // |x + sign z| <= R  <=>  |z - c| <= R
    const double lo = std::max(0.0, c - R);
    const double hi = std::min(L, c + R);
    if (!(hi > lo)) return std::nullopt;
    return Window{lo, hi};
}

QuadratureConfig inner_config(const QuadratureConfig& cfg) {
    QuadratureConfig c = cfg;
    c.abs_tol *= 0.1;
    c.rel_tol *= 0.1;
    return c;
}

// Outer breakpoints in b: the log-factor split near b = t and the times at which the
// backward cone of (x,t) starts to clip the support of f.
std::vector<double> source_breaks(double x, double t, double R) {
    std::vector<double> br{0.0, t};
    if (t > 2e-2) br.push_back(t - 1e-2);
    if (std::isfinite(R)) {
        const double et = std::exp(t);
        for (double w : {std::abs(x - R), std::abs(x + R), std::abs(x) - R}) {
            if (w > 0.0 && w < et - 1.0) br.push_back(std::log(et - w));
        }
    }
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    return br;
}

template <class Inner>
SolutionSample integrate_over_b(double x, double t, double R, const QuadratureConfig& cfg, Inner inner) {
    double inner_err = 0.0;
    auto outer = [&](double b) {
        const QuadResult r = inner(b);
        inner_err = std::max(inner_err, r.est_err);
        return r.value;
    };
    const std::vector<double> br = source_breaks(x, t, R);
    QuadResult total;
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
        // the piece next to b = t uses the double-exponential rule
        const bool tail = (i + 2 == br.size()) && br.size() > 2;
        total += integrate(outer, br[i], br[i + 1], tail ? cfg.with_rule(Rule::DoubleExponential) : cfg);
    }
    return {total.value, total.est_err + t * inner_err, t, x};
}

void check_time(double t) {
    if (!(t > 0.0)) throw DomainError("solver: t must be positive");
}

}  // namespace

SolutionSample solve_source_1d(const Source1D& f, double x, double t, const QuadratureConfig& cfg) {
    check_time(t);
    cfg.validate();
    const double R = f.support_radius;
    if (R == 0.0) return {0.0, 0.0, t, x};
    const double et = std::exp(t);
    const QuadratureConfig icfg = inner_config(cfg);
    auto inner = [&](double b) -> QuadResult {
        const double w = et - std::exp(b);
        double lo = x - w, hi = x + w;
        if (std::isfinite(R)) {
            lo = std::max(lo, -R);
            hi = std::min(hi, R);
        }
        if (!(hi > lo)) return {};
        auto g = [&](double y) {
            const double d = std::min(std::abs(x - y), w);
            return f.value(y, b) * propagator_value(d, t, b);
        };
        return integrate(g, lo, hi, icfg);
    };
    return integrate_over_b(x, t, R, cfg, inner);
}

SolutionSample solve_source_duhamel(const Source1D& f, double x, double t, const QuadratureConfig& cfg) {
    check_time(t);
    cfg.validate();
    const double R = f.support_radius;
    if (R == 0.0) return {0.0, 0.0, t, x};
    const double et = std::exp(t);
    const QuadratureConfig icfg = inner_config(cfg);
    auto inner = [&](double b) -> QuadResult {
        const double w = et - std::exp(b);
        QuadResult acc;
        for (int sign : {+1, -1}) {
            const auto win = data_window(x, sign, R, w);
            if (!win) continue;
            // string solution v = (f(x+z) + f(x-z))/2, the two halves integrated separately
            auto g = [&](double z) { return f.value(x + sign * z, b) * propagator_value(z, t, b); };
            acc += integrate(g, win->lo, win->hi, icfg);
        }
        return acc;
    };
    return integrate_over_b(x, t, R, cfg, inner);
}

SolutionSample solve_cauchy_1d(const CauchyData& data, double x, double t, const QuadratureConfig& cfg) {
    check_time(t);
    cfg.validate();
    const double phi = std::expm1(t);
    SolutionSample out{0.0, 0.0, t, x};

    const Field1D& p0 = data.phi0;
    const Field1D& p1 = data.phi1;
    out.u = 0.5 * std::exp(-0.5 * t) * (p0.value(x + phi) + p0.value(x - phi));

    const QuadratureConfig de = cfg.with_rule(Rule::DoubleExponential);
    for (int sign : {+1, -1}) {
        if (p0.support_radius > 0.0) {
            if (const auto win = data_window(x, sign, p0.support_radius, phi)) {
                QuadResult r;
                if (win->hi >= phi) {
                    auto g = [&](double z, double pz) { return p0.value(x + sign * z) * kernel_K0_unchecked(z, t, pz); };
                    r = integrate_to_endpoint(g, win->lo, phi, de);
                } else {
                    auto g = [&](double z) { return p0.value(x + sign * z) * kernel_K0_unchecked(z, t); };
                    r = integrate(g, win->lo, win->hi, de);
                }
                out.u += r.value;
                out.est_err += r.est_err;
            }
        }
        if (p1.support_radius > 0.0) {
            if (const auto win = data_window(x, sign, p1.support_radius, phi)) {
                auto g = [&](double z) { return p1.value(x + sign * z) * propagator_value(z, t, 0.0); };
                const QuadResult r = integrate(g, win->lo, win->hi, cfg);
                out.u += r.value;
                out.est_err += r.est_err;
            }
        }
    }
    if (data.f.support_radius > 0.0) {
        const SolutionSample s = solve_source_1d(data.f, x, t, cfg);
        out.u += s.u;
        out.est_err += s.est_err;
    }
    return out;
}

TraceFit extrapolate_trace(double h, double u1, double u2, double u4) {
    const double slope = (5.0 * u2 - 4.0 * u1 - u4) / (2.0 * h);
    const double curv = (u2 - u1 - slope * h) / (3.0 * h * h);
    return {u1 - slope * h - curv * h * h, slope};
}

TraceReport initial_trace_check(const CauchyData& data, const std::vector<double>& xs, const QuadratureConfig& cfg) {
    TraceReport rep;
    QuadratureConfig tight = cfg;
    tight.abs_tol = std::min(cfg.abs_tol, 1e-12);
    tight.rel_tol = std::min(cfg.rel_tol, 1e-11);
    const double h = 1e-3;
    for (double x : xs) {
        const double u1 = solve_cauchy_1d(data, x, h, tight).u;
        const double u2 = solve_cauchy_1d(data, x, 2 * h, tight).u;
        const double u4 = solve_cauchy_1d(data, x, 4 * h, tight).u;
        const TraceFit fit = extrapolate_trace(h, u1, u2, u4);
        TraceRow row{x, fit.value, data.phi0.value(x), fit.slope, data.phi1.value(x), false};
        row.pass = std::abs(row.u0 - row.phi0) <= rep.tol && std::abs(row.ut0 - row.phi1) <= rep.tol;
        rep.pass = rep.pass && row.pass;
        rep.rows.push_back(row);
    }
    return rep;
}

std::vector<SolutionSample> solve_grid_1d(Solve1DKind kind, const CauchyData& data, const std::vector<double>& xs,
                                          double t, const QuadratureConfig& cfg) {
    std::vector<SolutionSample> out;
    out.reserve(xs.size());
    for (double x : xs) {
        switch (kind) {
            case Solve1DKind::Cauchy: out.push_back(solve_cauchy_1d(data, x, t, cfg)); break;
            case Solve1DKind::Source: out.push_back(solve_source_1d(data.f, x, t, cfg)); break;
            case Solve1DKind::Duhamel: out.push_back(solve_source_duhamel(data.f, x, t, cfg)); break;
        }
    }
    return out;
}

}  // namespace desitter
