#pragma once

#include <functional>
#include <vector>

#include "desitter/fields.hpp"

namespace desitter {

struct FdGrid {
    double x_min = -8.0;
    double x_max = 8.0;
    int nx = 4001;
    double cfl = 0.9;
    double t_end = 1.0;

    [[nodiscard]] double dx() const { return (x_max - x_min) / (nx - 1); }
};

struct FdSolution {
    SolutionField field;
    int steps = 0;
    double dx = 0.0;
};

// Leapfrog for u_tt = e^{2t} u_xx + f on [x_min, x_max], u = 0 at both ends.
// Time levels are t_k = ln(1 + k*dtau) with dtau <= cfl*dx, so that
// (t_{k+1} - t_k) e^{t_k} <= cfl*dx at every step.
FdSolution fd_solve_1d(const CauchyData& data, const FdGrid& grid);

// Radial 3D problem through w = r u on the odd extension. The grid describes
// [0, x_max] (x_min is ignored); the returned field holds u(r) on that half line.
FdSolution fd_solve_radial3d(const RadialOperand& phi0, const RadialOperand& phi1, const FdGrid& grid,
                             const SourceND* f = nullptr);

struct ConvergenceStudy {
    std::vector<int> nx;
    std::vector<double> max_err;
    std::vector<double> order;  // log2 of consecutive error ratios
};

// Manufactured solution u = sin(x) (cos 2t + t) on [-pi, pi] with the matching source.
ConvergenceStudy fd_manufactured_study(const std::vector<int>& nx_levels, double t_end = 1.0, double cfl = 0.5);

// Time levels used by the schemes above.
std::vector<double> fd_time_levels(double dx, double cfl, double t_end);

}  // namespace desitter
