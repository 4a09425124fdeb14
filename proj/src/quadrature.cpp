#include "desitter/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "desitter/errors.hpp"

namespace desitter {

namespace {

using boost::math::quadrature::gauss_kronrod;
using boost::math::quadrature::tanh_sinh;

// Building a tanh-sinh rule precomputes its abscissas; keep one per depth.
tanh_sinh<double>& de_rule(int max_refinements) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<tanh_sinh<double>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[max_refinements];
    if (!slot) slot = std::make_unique<tanh_sinh<double>>(static_cast<std::size_t>(max_refinements));
    return *slot;
}

// Requested relative tolerance handed to boost. Below ~1e-13 the error
// estimates are dominated by roundoff and adaptive splitting only adds noise.
double boost_tol(const QuadratureConfig& cfg) { return std::max(0.1 * cfg.rel_tol, 1e-13); }

bool accepted(const QuadResult& r, double l1, const QuadratureConfig& cfg) {
    return std::isfinite(r.value) && r.est_err <= std::max(cfg.abs_tol, cfg.rel_tol * l1);
}

// Both boost rules are driven on [-1,1] with the Jacobian folded into the
// integrand: boost 1.74 compares error estimates from the reference interval
// against tolerances on [a,b], which breaks down on short intervals.

// g(x, d) with d the distance from x to the nearest endpoint of [a,b].
template <class F>
QuadResult run_de(const F& g, double a, double b, const QuadratureConfig& cfg, double* l1) {
    const int depth = std::max(cfg.max_refinements, 4);
    const double half = 0.5 * (b - a);
    // boost passes the complement with a negative sign on the left half
    auto u = [&](double s, double sc) {
        const double d = half * std::abs(sc);
        return half * g(s < 0 ? a + d : b - d, d);
    };
    double err = 0.0;
    double L1 = 0.0;
    const double val = de_rule(depth).integrate(u, -1.0, 1.0, boost_tol(cfg), &err, &L1);
    *l1 = L1;
    return {val, err};
}

QuadResult run(const Integrand& f, double a, double b, const QuadratureConfig& cfg, double* l1) {
    if (a == b) {
        *l1 = 0.0;
        return {};
    }
    if (b < a) {
        QuadResult r = run(f, b, a, cfg, l1);
        return {-r.value, r.est_err};
    }
    if (cfg.rule == Rule::DoubleExponential) {
        auto g = [&](double x, double) { return f(x); };
        return run_de(g, a, b, cfg, l1);
    }
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    auto u = [&](double s) { return half * f(mid + half * s); };
    double err = 0.0;
    double L1 = 0.0;
    const double val = gauss_kronrod<double, 31>::integrate(
        u, -1.0, 1.0, static_cast<unsigned>(std::max(cfg.max_refinements, 0)), boost_tol(cfg), &err, &L1);
    *l1 = L1;
    return {val, err};
}

}  // namespace

void QuadratureConfig::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw SetupError("quadrature tolerances must be positive");
    if (max_refinements < 1) throw SetupError("max_refinements must be at least 1");
}

QuadResult integrate_noexcept(const Integrand& f, double a, double b, const QuadratureConfig& cfg) {
    double l1 = 0.0;
    return run(f, a, b, cfg, &l1);
}

QuadResult integrate(const Integrand& f, double a, double b, const QuadratureConfig& cfg) {
    double l1 = 0.0;
    QuadResult r = run(f, a, b, cfg, &l1);
    if (!accepted(r, l1, cfg)) {
        throw AccuracyError("quadrature did not converge on [" + std::to_string(a) + ", " +
                                std::to_string(b) + "]",
                            r.value, r.est_err);
    }
    return r;
}

QuadResult integrate_to_endpoint(const EndpointIntegrand& f, double a, double b,
                                 const QuadratureConfig& cfg) {
    if (!(b > a)) return {};
    const double mid = 0.5 * (a + b);
    auto g = [&](double x, double d) { return f(x, x > mid ? d : b - x); };
    double l1 = 0.0;
    QuadResult r = run_de(g, a, b, cfg, &l1);
    if (!accepted(r, l1, cfg)) {
        throw AccuracyError("endpoint quadrature did not converge", r.value, r.est_err);
    }
    return r;
}

QuadResult integrate_pieces(const Integrand& f, const std::vector<double>& breaks,
                            const QuadratureConfig& cfg) {
    QuadResult total;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (breaks[i + 1] > breaks[i]) total += integrate(f, breaks[i], breaks[i + 1], cfg);
    }
    return total;
}

const GaussRule& gauss_legendre_rule(int n) {
    if (n < 1) throw SetupError("gauss_legendre_rule: n must be positive");
    static std::mutex mu;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    GaussRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int it2 = 0; it2 < 100; ++it2) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.x[i] = -x;
        rule.x[n - 1 - i] = x;
        rule.w[i] = rule.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

double gauss_composite(const Integrand& f, double a, double b, int n, int panels) {
    const GaussRule& r = gauss_legendre_rule(n);
    const double h = (b - a) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double c = a + (p + 0.5) * h;
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += r.w[i] * f(c + 0.5 * h * r.x[i]);
        sum += 0.5 * h * s;
    }
    return sum;
}

}  // namespace desitter
