#pragma once

#include <array>
#include <string>
#include <vector>

#include "desitter/fields.hpp"
#include "desitter/quadrature.hpp"

namespace desitter {

// (-Laplacian)^{-s} through the multiplier |xi|^{-2s} on a periodic grid.
//
// Line fields (n = 1) are resampled on N points of [-L, L). Radial fields in
// R^3 use r W = (-d^2/dr^2)^{-s} (r u) on the odd extension, i.e. a sine
// transform on N interior points of (0, L). The zero frequency is dropped; if
// the field has non-zero mean a warning is appended to *warnings.
//
// The returned field covers the whole grid, with support_lo/hi set to the
// half-period window where the periodization error is smallest.
// s = 0 returns the input unchanged. Radial fields in R^2 are not handled
// here: lift them to R^3 and use project_radial_to_plane.
SolutionField frac_laplacian_neg_s(const SolutionField& field, double s, double L, int N,
                                   std::vector<std::string>* warnings = nullptr);

// Same multiplier on a tensor grid in R^n (n = 1, 2, 3), row-major with the
// last index fastest, cell [-L, L)^n with dims[i] points per axis.
std::vector<double> frac_laplacian_periodic(const std::vector<double>& data, int n, const std::array<int, 3>& dims,
                                            double L, double s);

// Abel projection of a radial function on R^3 onto the plane:
//   P w(rho) = 2 int_0^inf w(sqrt(rho^2 + y^2)) dy.
// If W solves a translation invariant problem in R^3, P W solves the same
// problem in R^2 with projected data. The input is interpolated between its
// samples and taken as zero past min(x.back(), support_hi). r_breaks lists
// radii where the input has sharp features. Quadrature shortfalls do not
// throw; the largest error estimate is written to *max_err if given.
SolutionField project_radial_to_plane(const SolutionField& f3, const std::vector<double>& rho,
                                      const std::vector<double>& r_breaks, const QuadratureConfig& cfg = {},
                                      double* max_err = nullptr);

}  // namespace desitter
