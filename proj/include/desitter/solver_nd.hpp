#pragma once

#include <vector>

#include "desitter/fields.hpp"
#include "desitter/quadrature.hpp"
#include "desitter/solver_1d.hpp"

namespace desitter {

struct SphericalMeanCfg {
    int n_angular = 64;     // starting resolution, doubled until converged
    int max_angular = 4096;
    QuadratureConfig radial_rule;
    // Use the attached radial profile (closed-form string solution in r u) when the operand has one.
    bool use_radial_profile = true;

    void validate() const;
};

// Average of phi over the sphere |y - x| = r in R^n, n = 2 or 3.
double spherical_mean(const RadialOperand& op, const Vec3& x, double r, const SphericalMeanCfg& cfg = {});

// Value at time r of the flat wave solution with v(.,0) = phi, v_t(.,0) = 0.
struct WaveValue {
    double value = 0.0;
    double est_err = 0.0;
};
WaveValue wave_kirchhoff(const RadialOperand& op, const Vec3& x, double r, const SphericalMeanCfg& cfg = {});

SolutionSample solve_cauchy_nd(const RadialOperand& phi0, const RadialOperand& phi1, const Vec3& x, double t,
                               const SphericalMeanCfg& cfg = {});

SolutionSample solve_source_nd(const SourceND& f, const Vec3& x, double t, const SphericalMeanCfg& cfg = {});

struct HuygensRow {
    double t = 0.0;
    double u_desitter = 0.0;
    double u_flat = 0.0;  // flat Kirchhoff solution at time e^t - 1
    double est_err = 0.0;
};

struct HuygensReport {
    std::vector<HuygensRow> rows;
    double tail_max = 0.0;  // max |u_desitter| over rows past the front
};

// Probe at x for data (0, phi1) in R^3: compares the de Sitter solution with the
// flat one after the front has left the probe.
HuygensReport huygens_tail_probe(const RadialOperand& phi1, const Vec3& x, const std::vector<double>& t_grid,
                                 const SphericalMeanCfg& cfg = {});

}  // namespace desitter
