#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "desitter/fields.hpp"

namespace desitter {

enum class ConeClass { Forward, Backward, Boundary, Outside };
const char* to_string(ConeClass c);

// Observation point (x,t) and source point (x0,t0). Points live in R^n, n <= 3;
// unused coordinates are zero.
struct ConeQuery {
    Vec3 x{0, 0, 0};
    double t = 0.0;
    Vec3 x0{0, 0, 0};
    double t0 = 0.0;

    static ConeQuery line(double x, double t, double x0, double t0) {
        return {{x, 0, 0}, t, {x0, 0, 0}, t0};
    }
    [[nodiscard]] double distance() const;
};

ConeClass classify_cone(const ConeQuery& q);

enum class KernelRegime { Interior, NearLightCone, NearSingularLocus };
const char* to_string(KernelRegime r);

struct KernelValue {
    double value = 0.0;
    KernelRegime regime = KernelRegime::Interior;
    double est_err = 0.0;
};

// Argument of F(1/2,1/2;1;.) in E and its complement, both cancellation free.
struct ConeArgument {
    double A = 0.0;     // (e^t + e^t0)^2 - d^2
    double B = 0.0;     // (e^t - e^t0)^2 - d^2, clamped at 0 on the cone boundary
    double zeta = 0.0;  // B / A
    double one_minus_zeta = 1.0;
};
ConeArgument cone_argument(double d, double t, double t0);

// E(x,t;x0,t0) = F(1/2,1/2;1;B/A) / sqrt(A). SupportError outside the cones.
KernelValue propagator_E(const ConeQuery& q);
// Shorthand for E(d,t;0,t0) with d >= 0, no classification overhead beyond a support check.
double propagator_value(double d, double t, double t0);

struct CharCoords {
    double l = 0.0;
    double m = 0.0;
    double a = 0.0;
    double b_char = 0.0;

    // (x,t) observation and source (0,b).
    static CharCoords from_spacetime(double x, double t, double b);
    [[nodiscard]] double x() const { return 0.5 * (l + m); }
    [[nodiscard]] double t() const;
};

// Riemann function R(l,m;a,b) = (l-m) E.
double riemann_R(const CharCoords& c);

// K1(z,t) = E(z,t;0,0) on 0 <= z <= e^t - 1.
KernelValue kernel_K1(double z, double t);

// K0(z,t) = -dE/dt0 (z,t;0,t0) at t0 = 0, for 0 <= z < e^t - 1.
// The value stays bounded as z -> e^t - 1, but the pointwise call rejects that
// endpoint; integrals use kernel_K0_unchecked.
KernelValue kernel_K0(double z, double t);

// K0 without range checks; z may equal e^t - 1. Takes phi - z to keep digits near the endpoint.
double kernel_K0_unchecked(double z, double t, double phi_minus_z);
double kernel_K0_unchecked(double z, double t);

// The explicit bracket form of dE/dt0 at t0 = 0 (divides by (e^t-1)^2 - z^2).
// Kept as an independent route for the identity checks.
double dE_dt0_bracket(double z, double t);

// ---- identity ledger ----

struct LedgerRow {
    std::string identity_id;
    std::string point;
    double lhs = 0.0;
    double rhs = 0.0;
    double abs_err = 0.0;
};

struct LedgerConfig {
    std::vector<double> t_samples{0.5, 1.0, 2.0};
    int samples_per_t = 50;
    std::uint64_t seed = 20240601;
    double h = 1e-5;  // finite-difference step, scaled by the local length scale
};

struct LedgerReport {
    std::vector<LedgerRow> rows;
    std::map<std::string, double> max_abs_err;
};

// Identity ids, in report order.
const std::vector<std::string>& ledger_identity_ids();

LedgerReport identity_ledger(const LedgerConfig& cfg);

}  // namespace desitter
