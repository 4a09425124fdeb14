#include "desitter/compare.hpp"

#include <cmath>
#include <limits>

#include "desitter/errors.hpp"
#include "desitter/reference_fd.hpp"
#include "desitter/solver_1d.hpp"
#include "desitter/solver_nd.hpp"

namespace desitter {

namespace {

double rel_l2(const std::vector<double>& x, const std::vector<double>& ref, const std::vector<double>& u, bool radial) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double w = radial ? x[i] * x[i] : 1.0;
        num += w * (u[i] - ref[i]) * (u[i] - ref[i]);
        den += w * ref[i] * ref[i];
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace

FdComparison compare_with_fd(const FamilySpec& phi0, const FamilySpec& phi1, int n, const FdCompareConfig& cfg) {
    if (n != 1 && n != 3) throw UnsupportedDimension("compare_with_fd: n must be 1 or 3");
    if (cfg.nx < 3) throw SetupError("compare_with_fd: nx too small");
    if (!(cfg.t > 0.0)) throw DomainError("compare_with_fd: t must be positive");
    FdComparison out;
    out.n = n;
    out.t = cfg.t;
    out.nx = cfg.nx;
    const int fine_nx = 2 * cfg.nx - 1;
    if (n == 1) {
        CauchyData d;
        d.phi0 = make_field_1d(phi0);
        d.phi1 = make_field_1d(phi1);
        const FdGrid coarse{-cfg.half_width, cfg.half_width, cfg.nx, cfg.cfl, cfg.t};
        const FdGrid fine{-cfg.half_width, cfg.half_width, fine_nx, cfg.cfl, cfg.t};
        const FdSolution a = fd_solve_1d(d, coarse);
        const FdSolution b = fd_solve_1d(d, fine);
        out.dx = a.dx;
        out.x = a.field.x;
        out.u_fd = a.field.u;
        for (int i = 0; i < cfg.nx; ++i) out.u_fd_fine.push_back(b.field.u[2 * i]);
        for (double x : out.x) out.u_solver.push_back(solve_cauchy_1d(d, x, cfg.t, cfg.quad).u);
    } else {
        const RadialOperand p0 = make_operand(phi0, 3);
        const RadialOperand p1 = make_operand(phi1, 3);
        const FdGrid coarse{0.0, cfg.half_width, cfg.nx, cfg.cfl, cfg.t};
        const FdGrid fine{0.0, cfg.half_width, fine_nx, cfg.cfl, cfg.t};
        const FdSolution a = fd_solve_radial3d(p0, p1, coarse);
        const FdSolution b = fd_solve_radial3d(p0, p1, fine);
        out.dx = a.dx;
        out.x = a.field.x;
        out.u_fd = a.field.u;
        for (int i = 0; i < cfg.nx; ++i) out.u_fd_fine.push_back(b.field.u[2 * i]);
        SphericalMeanCfg scfg;
        scfg.radial_rule = cfg.quad;
        for (double r : out.x) out.u_solver.push_back(solve_cauchy_nd(p0, p1, {r, 0.0, 0.0}, cfg.t, scfg).u);
    }
    const bool radial = n == 3;
    out.rel_l2_error = rel_l2(out.x, out.u_solver, out.u_fd, radial);
    out.rel_l2_error_fine = rel_l2(out.x, out.u_solver, out.u_fd_fine, radial);
    out.refinement_ratio = out.rel_l2_error_fine > 0.0 ? out.rel_l2_error / out.rel_l2_error_fine
                                                       : std::numeric_limits<double>::infinity();
    return out;
}

}  // namespace desitter
