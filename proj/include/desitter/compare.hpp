#pragma once

#include <vector>

#include "desitter/fields.hpp"
#include "desitter/quadrature.hpp"

namespace desitter {

// Closed-form solver against the leapfrog reference for Cauchy data on the
// line (n = 1) or radial data in R^3 (n = 3, through w = r u).
struct FdComparison {
    int n = 1;
    double t = 1.0;
    int nx = 0;
    double dx = 0.0;
    std::vector<double> x;         // coarse grid abscissae (radii for n = 3)
    std::vector<double> u_solver;
    std::vector<double> u_fd;
    std::vector<double> u_fd_fine;  // reference with dx halved, at the same points
    double rel_l2_error = 0.0;       // coarse reference vs solver
    double rel_l2_error_fine = 0.0;  // refined reference vs solver
    double refinement_ratio = 0.0;   // rel_l2_error / rel_l2_error_fine
};

struct FdCompareConfig {
    double t = 1.0;
    int nx = 4001;
    double half_width = 8.0;  // [-w, w] on the line, [0, w] for radii
    double cfl = 0.9;
    QuadratureConfig quad{Rule::GaussLegendreComposite, 1e-13, 1e-10, 12};
};

FdComparison compare_with_fd(const FamilySpec& phi0, const FamilySpec& phi1, int n, const FdCompareConfig& cfg);

}  // namespace desitter
