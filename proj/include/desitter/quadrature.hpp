#pragma once

#include <functional>
#include <vector>

namespace desitter {

enum class Rule { GaussLegendreComposite, DoubleExponential };

struct QuadratureConfig {
    Rule rule = Rule::GaussLegendreComposite;
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_refinements = 12;

    // Same tolerances, double-exponential rule.
    [[nodiscard]] QuadratureConfig with_rule(Rule r) const {
        QuadratureConfig c = *this;
        c.rule = r;
        return c;
    }
    void validate() const;
};

struct QuadResult {
    double value = 0.0;
    double est_err = 0.0;

    QuadResult& operator+=(const QuadResult& o) {
        value += o.value;
        est_err += o.est_err;
        return *this;
    }
};

using Integrand = std::function<double(double)>;

// Integrand that also receives the distance from x to the right endpoint b,
// computed without cancellation near b (double-exponential rule only).
using EndpointIntegrand = std::function<double(double x, double b_minus_x)>;

// Adaptive integral of f over [a,b]. Throws AccuracyError (carrying the best
// estimate) if the tolerance max(abs_tol, rel_tol*|I|) is not met.
QuadResult integrate(const Integrand& f, double a, double b, const QuadratureConfig& cfg);

// Double-exponential integral with exact access to b - x.
QuadResult integrate_to_endpoint(const EndpointIntegrand& f, double a, double b,
                                 const QuadratureConfig& cfg);

// Integral over consecutive pieces [x0,x1], [x1,x2], ...
QuadResult integrate_pieces(const Integrand& f, const std::vector<double>& breaks,
                            const QuadratureConfig& cfg);

// Same as integrate but never throws; the error estimate is returned as is.
QuadResult integrate_noexcept(const Integrand& f, double a, double b, const QuadratureConfig& cfg);

// Fixed n-point Gauss-Legendre nodes and weights on [-1,1].
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};
const GaussRule& gauss_legendre_rule(int n);

// Apply a fixed rule on m equal panels of [a,b].
double gauss_composite(const Integrand& f, double a, double b, int n, int panels);

}  // namespace desitter
