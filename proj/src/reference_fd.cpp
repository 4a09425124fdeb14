#include "desitter/reference_fd.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "desitter/errors.hpp"

namespace desitter {

namespace {

void check_grid(const FdGrid& g) {
    if (g.nx < 5) throw SetupError("fd: need at least 5 grid points");
    if (!(g.cfl > 0.0 && g.cfl < 1.0)) throw SetupError("fd: cfl must lie in (0,1)");
    if (!(g.t_end > 0.0)) throw SetupError("fd: t_end must be positive");
}

void check_reach(double support, double lo, double hi, double dx, double t_end) {
    const double reach = support + std::expm1(t_end) + 5.0 * dx;
    if (!std::isfinite(reach) || -reach < lo || reach > hi) {
        throw SetupError("fd: domain too small, influence region comes within 5 cells of the boundary (needs |x| <= " +
                         std::to_string(reach) + ")");
    }
}

using SourceFn = std::function<double(std::size_t, double)>;  // (grid index, t)

// Core scheme on a uniform grid, zero Dirichlet at both ends.
std::vector<double> leapfrog(std::vector<double> u, const std::vector<double>& v0, const SourceFn& f,
                             double dx, const std::vector<double>& tl, int* steps) {
    const std::size_t n = u.size();
    const double idx2 = 1.0 / (dx * dx);
    auto lap = [&](const std::vector<double>& a, std::size_t i) { return (a[i - 1] - 2.0 * a[i] + a[i + 1]) * idx2; };

    std::vector<double> prev = u;
    std::vector<double> cur(n, 0.0);
    const double h0 = tl[1] - tl[0];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double acc = std::exp(2.0 * tl[0]) * lap(u, i) + f(i, tl[0]);
        cur[i] = u[i] + h0 * v0[i] + 0.5 * h0 * h0 * acc;
    }
    std::vector<double> next(n, 0.0);
    for (std::size_t k = 1; k + 1 < tl.size(); ++k) {
        const double hm = tl[k] - tl[k - 1];
        const double hp = tl[k + 1] - tl[k];
        const double c2 = std::exp(2.0 * tl[k]);
        const double ratio = hp / hm;
        const double w = 0.5 * hp * (hp + hm);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            next[i] = cur[i] + ratio * (cur[i] - prev[i]) + w * (c2 * lap(cur, i) + f(i, tl[k]));
        }
        std::swap(prev, cur);
        std::swap(cur, next);
    }
    *steps = static_cast<int>(tl.size()) - 1;
    return cur;
}

std::vector<double> uniform(double lo, double hi, int n) {
    std::vector<double> x(n);
    const double dx = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) x[i] = lo + i * dx;
    x.back() = hi;
    return x;
}

}  // namespace

std::vector<double> fd_time_levels(double dx, double cfl, double t_end) {
    const double tau_end = std::expm1(t_end);
    const auto k = static_cast<long>(std::ceil(tau_end / (cfl * dx)));
    const long steps = std::max(k, 2L);
    const double dtau = tau_end / steps;
    std::vector<double> tl(steps + 1);
    for (long i = 0; i <= steps; ++i) tl[i] = std::log1p(i * dtau);
    tl.back() = t_end;
    return tl;
}

FdSolution fd_solve_1d(const CauchyData& data, const FdGrid& grid) {
    check_grid(grid);
    const double dx = grid.dx();
    check_reach(data.support_radius(), grid.x_min, grid.x_max, dx, grid.t_end);
    const std::vector<double> x = uniform(grid.x_min, grid.x_max, grid.nx);
    std::vector<double> u0(x.size()), v0(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        u0[i] = data.phi0.value(x[i]);
        v0[i] = data.phi1.value(x[i]);
    }
    u0.front() = u0.back() = 0.0;
    const bool has_f = data.f.support_radius > 0.0;
    SourceFn f = [&](std::size_t i, double t) { return has_f ? data.f.value(x[i], t) : 0.0; };

    FdSolution out;
    out.dx = dx;
    out.field.n = 1;
    out.field.geometry = SolutionField::Geometry::Line;
    out.field.t = grid.t_end;
    out.field.u = leapfrog(u0, v0, f, dx, fd_time_levels(dx, grid.cfl, grid.t_end), &out.steps);
    out.field.x = x;
    const double reach = data.support_radius() + std::expm1(grid.t_end);
    out.field.support_lo = -reach;
    out.field.support_hi = reach;
    return out;
}

FdSolution fd_solve_radial3d(const RadialOperand& phi0, const RadialOperand& phi1, const FdGrid& grid,
                             const SourceND* f) {
    check_grid(grid);
    if (!phi0.is_radial() || !phi1.is_radial() || (f && !f->is_radial())) {
        throw SetupError("fd_solve_radial3d: data must carry a radial profile");
    }
    const double L = grid.x_max;
    const int half = grid.nx;  // points on [0, L]
    const int n = 2 * half - 1;
    const double dx = L / (half - 1);
    double support = std::max(phi0.support_radius, phi1.support_radius);
    if (f) support = std::max(support, f->support_radius);
    check_reach(support, -L, L, dx, grid.t_end);

    const std::vector<double> r = uniform(-L, L, n);
    std::vector<double> w0(n), v0(n);
    for (int i = 0; i < n; ++i) {
        // odd extension of w = r u
        w0[i] = r[i] * phi0.profile(std::abs(r[i]));
        v0[i] = r[i] * phi1.profile(std::abs(r[i]));
    }
    w0.front() = w0.back() = 0.0;
    SourceFn src = [&](std::size_t i, double t) { return f ? r[i] * f->profile(std::abs(r[i]), t) : 0.0; };

    FdSolution out;
    out.dx = dx;
    const std::vector<double> w = leapfrog(w0, v0, src, dx, fd_time_levels(dx, grid.cfl, grid.t_end), &out.steps);
    out.field.n = 3;
    out.field.geometry = SolutionField::Geometry::Radial;
    out.field.t = grid.t_end;
    out.field.x.resize(half);
    out.field.u.resize(half);
    const int c = half - 1;  // index of r = 0
    for (int j = 0; j < half; ++j) {
        out.field.x[j] = r[c + j];
        out.field.u[j] = j == 0 ? (w[c + 1] - w[c - 1]) / (2.0 * dx) : w[c + j] / r[c + j];
    }
    out.field.x[0] = 0.0;
    out.field.support_lo = 0.0;
    out.field.support_hi = support + std::expm1(grid.t_end);
    return out;
}

ConvergenceStudy fd_manufactured_study(const std::vector<int>& nx_levels, double t_end, double cfl) {
    ConvergenceStudy st;
    const double pi = std::numbers::pi;
    auto g = [](double t) { return std::cos(2.0 * t) + t; };
    auto gpp = [](double t) { return -4.0 * std::cos(2.0 * t); };
    for (int nx : nx_levels) {
        if (nx < 5) throw SetupError("fd_manufactured_study: nx too small");
        const std::vector<double> x = uniform(-pi, pi, nx);
        const double dx = 2.0 * pi / (nx - 1);
        std::vector<double> u0(nx), v0(nx);
        for (int i = 0; i < nx; ++i) {
            u0[i] = std::sin(x[i]) * g(0.0);
            v0[i] = std::sin(x[i]) * 1.0;  // g'(0) = 1
        }
        u0.front() = u0.back() = 0.0;
        SourceFn f = [&](std::size_t i, double t) { return std::sin(x[i]) * (gpp(t) + std::exp(2.0 * t) * g(t)); };
        int steps = 0;
        const std::vector<double> u = leapfrog(u0, v0, f, dx, fd_time_levels(dx, cfl, t_end), &steps);
        double err = 0.0;
        for (int i = 0; i < nx; ++i) err = std::max(err, std::abs(u[i] - std::sin(x[i]) * g(t_end)));
        st.nx.push_back(nx);
        st.max_err.push_back(err);
        if (st.max_err.size() > 1) {
            const std::size_t k = st.max_err.size() - 1;
            st.order.push_back(std::log2(st.max_err[k - 1] / st.max_err[k]));
        }
    }
    return st;
}

}  // namespace desitter
