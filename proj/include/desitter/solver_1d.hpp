#pragma once

#include <vector>

#include "desitter/fields.hpp"
#include "desitter/quadrature.hpp"

namespace desitter {

struct SolutionSample {
    double u = 0.0;
    double est_err = 0.0;
    double t = 0.0;
    double x = 0.0;
};

// u(x,t) for u_tt - e^{2t} u_xx = f, zero data: double integral of f against E
// over the backward cone of (x,t).
SolutionSample solve_source_1d(const Source1D& f, double x, double t, const QuadratureConfig& cfg = {});

// Same problem through superposed string solutions v(x,z;b) = (f(x+z,b) + f(x-z,b))/2.
SolutionSample solve_source_duhamel(const Source1D& f, double x, double t, const QuadratureConfig& cfg = {});

// Homogeneous problem with u(.,0) = phi0, u_t(.,0) = phi1, plus the source part when data.f is nonzero.
SolutionSample solve_cauchy_1d(const CauchyData& data, double x, double t, const QuadratureConfig& cfg = {});

struct TraceRow {
    double x = 0.0;
    double u0 = 0.0;   // extrapolated u(x,0)
    double phi0 = 0.0;
    double ut0 = 0.0;  // extrapolated u_t(x,0)
    double phi1 = 0.0;
    bool pass = false;
};

struct TraceReport {
    std::vector<TraceRow> rows;
    double tol = 1e-4;
    bool pass = true;
};

// Evaluates u at t = 1e-3, 2e-3, 4e-3 and extrapolates u(x,0), u_t(x,0).
TraceReport initial_trace_check(const CauchyData& data, const std::vector<double>& xs = {0.0},
                                const QuadratureConfig& cfg = {});

// Fits value and slope at t = 0 from samples at t, 2t, 4t (exact for quadratics).
struct TraceFit {
    double value;
    double slope;
};
TraceFit extrapolate_trace(double t, double u1, double u2, double u4);

enum class Solve1DKind { Cauchy, Source, Duhamel };

// Batch evaluation on a list of abscissae at fixed t.
std::vector<SolutionSample> solve_grid_1d(Solve1DKind kind, const CauchyData& data, const std::vector<double>& xs,
                                          double t, const QuadratureConfig& cfg = {});

}  // namespace desitter
