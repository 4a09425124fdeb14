#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "desitter/fields.hpp"
#include "desitter/quadrature.hpp"

namespace desitter {

// L^q norm of a sampled field over its support (Lebesgue measure on the line,
// |S^{n-1}| r^{n-1} dr for radial fields). q = inf gives the max norm.
// Throws CoverageError when the samples do not reach the support bounds.
double lq_norm(const SolutionField& field, double q);

// Abscissae on [lo, hi]: spacing h inside the listed zones, growing like
// growth * (distance to the nearest zone) away from them.
std::vector<double> graded_grid(double lo, double hi, const std::vector<std::pair<double, double>>& zones, double h,
                                double growth = 0.05);

// Decay estimates under audit. The right-hand shapes (constant C = 1) are
//   SourceLine        e^{t/rho - t} int_0^t (1+t-b) |f(b)|_p db                       n = 1
//   CauchyLqLq        |phi0|_q + (1+t) |phi1|_q                                          n = 1
//   CauchyLine        e^{-t/2}|phi0|_q + (e^t-1)^{1/rho} e^{-t} |phi0|_p
//                       + (1+t)(e^t-1)^{1/rho-1}(1-e^{-t}) |phi1|_p                      n = 1
//   SourceFractional  e^{t(2s-n d)} int_0^t (1+t-b) |f(b)|_p db                        n = 2, 3
//   CauchyFractional  (e^t-1)^{2s-n d} (|phi0|_p + (1+t)(1-e^{-t}) |phi1|_p)          n = 2, 3
// with d = 1/p - 1/q. The left side is |(-Laplacian)^{-s} u(t)|_q.
enum class DecayEstimate { SourceLine, CauchyLqLq, CauchyLine, SourceFractional, CauchyFractional };
const char* to_string(DecayEstimate e);
DecayEstimate parse_decay_estimate(const std::string& name);  // throws ValidationError

struct DecayConfig {
    DecayEstimate estimate = DecayEstimate::CauchyLqLq;
    int n = 1;
    double p = 2.0;
    double q = 2.0;
    double s = 0.0;
    double rho = 1.0;
    std::vector<double> t_grid{0.1, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0};
    double sample_step = 0.1;    // finest spacing of solution samples and of the spectral grid
    double period_factor = 8.0;  // spectral half period L = period_factor * support (at least 4)
    QuadratureConfig quad{Rule::GaussLegendreComposite, 1e-15, 1e-7, 12};

    void validate() const;  // structural checks only; admissibility is reported, not thrown
};

struct Admissibility {
    bool ok = false;
    std::string reason;
};
Admissibility check_admissible(const DecayConfig& cfg);

struct DecayRow {
    double t = 0.0;
    double lhs_norm = 0.0;
    double rhs_shape = 0.0;
    double ratio = 0.0;
};

struct DecayReport {
    DecayConfig config;
    std::string data;  // data families, for the record
    std::vector<DecayRow> rows;
    double sup_ratio = 0.0;
    bool admissible = false;
    std::string reason;
    std::vector<std::string> warnings;

    // Sup of the ratios over rows with t <= t_max.
    [[nodiscard]] double sup_ratio_until(double t_max) const;
    // Relative change of the sup ratio when the grid is cut at t_split.
    [[nodiscard]] double drift(double t_split) const;
};

// Solutions shared between audits (same data, same time, same sampling).
struct DecayWorkspace {
    std::map<std::string, SolutionField> fields;
};

// Source problem with zero data; f is time independent and given by family name.
DecayReport audit_source_decay(const DecayConfig& cfg, const FamilySpec& f, DecayWorkspace* ws = nullptr);

// Homogeneous Cauchy problem.
DecayReport audit_cauchy_decay(const DecayConfig& cfg, const FamilySpec& phi0, const FamilySpec& phi1,
                               DecayWorkspace* ws = nullptr);

struct ExponentTriple {
    double p = 2.0;
    double q = 2.0;
    double s = 0.0;
};

// Admissible (p, q = p', s) for the estimates in R^n: for each p the two ends
// of the s interval (n+1)d/4 <= s <= n d/2, with n d - 1 < 2s.
std::vector<ExponentTriple> admissible_exponents(int n, const std::vector<double>& p_grid);

}  // namespace desitter
