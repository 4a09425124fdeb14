#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "desitter/quadrature.hpp"

namespace desitter {

// Kernel integral bounds, z = e^t > 1, A = (z+1)^2 - r^2, integrals over 0 < r < z-1.
//   K1Power          (int K1^rho dr)                  vs (1+ln z)^rho (z-1)(z+1)^{-rho} F(1/2,rho/2;3/2;((z-1)/(z+1))^2)
//   WeightedE        int r^a A^{-1/2} F(1/2,1/2;1;.)  vs z^{-1}(z-1)^{1+a}(1+ln z)
//   WeightedK1       int r^a |K1| dr                  vs the same shape, through kernel_K1
//   K0Power          (int |K0|^rho dr)^{1/rho}        vs (z-1)^{1/rho}(z+1)^{-1}
//   WeightedK0       int r^a |K0| dr                  vs z^{-1}(z-1)^{1+a}
// K1Power and K0Power take rho in [1,2); the weighted forms take a in (-1,0].
enum class BoundKind { K1Power, WeightedE, WeightedK1, K0Power, WeightedK0 };
const char* to_string(BoundKind k);
BoundKind parse_bound_kind(const std::string& name);  // throws ValidationError

// Throws AccuracyError if the quadrature misses its tolerance.
double bound_lhs(BoundKind kind, double z, double param, const QuadratureConfig& cfg);
double bound_rhs(BoundKind kind, double z, double param);

// Log-spaced grid of m points on [lo, hi].
std::vector<double> log_grid(double lo, double hi, int m);

struct BoundPoint {
    double z = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool flagged = false;  // quadrature failure; excluded from the sup
};

struct BoundAudit {
    BoundKind kind = BoundKind::K1Power;
    double param = 0.0;
    std::vector<BoundPoint> points;
    double sup_ratio = 0.0;
    int flagged = 0;
    double refined_sup = 0.0;      // same grid, tolerances tightened
    double refinement_change = 0.0;
    double doubled_sup = 0.0;      // grid with the midpoints added
    double doubling_change = 0.0;
    double fresh_worst = 0.0;      // max lhs / (sup_ratio rhs) on a fresh random grid
    bool fresh_ok = false;         // fresh_worst <= 1.05

    [[nodiscard]] bool finite() const;
};

// int_0^{e^t-1} |K0(r,t)| dr over a t grid; its sup is the integrability constant.
struct K0MassAudit {
    std::vector<double> t;
    std::vector<double> mass;
    double constant = 0.0;
    double refined_constant = 0.0;
    double refinement_change = 0.0;
    double doubled_constant = 0.0;
    double doubling_change = 0.0;
};

struct BoundsConfig {
    std::vector<double> z_grid = log_grid(1.01, 2980.9579870417283, 40);  // up to e^8
    std::vector<double> rho_grid{1.0, 1.25, 1.5, 1.75};
    std::vector<double> exponent_grid{-0.75, -0.5, -0.25, 0.0};
    std::vector<BoundKind> kinds{BoundKind::K1Power, BoundKind::WeightedE, BoundKind::WeightedK1,
                                 BoundKind::K0Power, BoundKind::WeightedK0};
    std::vector<double> mass_t_grid;  // empty: 40 points on [0.1, 5]
    QuadratureConfig quad{Rule::DoubleExponential, 1e-15, 1e-9, 12};
    double refine_factor = 100.0;  // tolerance tightening for the refinement check
    int fresh_points = 40;
    std::uint64_t seed = 20240607;

    void validate() const;
};

struct BoundsReport {
    std::vector<BoundAudit> audits;
    K0MassAudit k0_mass;
};

BoundAudit audit_bound(BoundKind kind, double param, const BoundsConfig& cfg);
K0MassAudit audit_k0_mass(const std::vector<double>& t_grid, const BoundsConfig& cfg);
BoundsReport audit_kernel_bounds(const BoundsConfig& cfg);

}  // namespace desitter
