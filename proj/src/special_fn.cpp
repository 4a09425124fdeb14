#include "desitter/special_fn.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "desitter/errors.hpp"

namespace desitter::special {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_unit_interval(const HyperArg& z, const char* who) {
    if (!(z.z >= 0.0) || !(z.complement >= 0.0) || z.z > 1.0) {
        throw DomainError(std::string(who) + ": argument outside [0,1]");
    }
}

// AGM iteration on (1, k') returning agm and 1 - sum 2^{n-1} c_n^2 with c_0^2 = z.
struct AgmSums {
    double mean;
    double e_factor;
};

AgmSums agm_with_sums(const HyperArg& z) {
    double a = 1.0;
    double g = std::sqrt(z.complement);
    // 1 - z/2 written via the complement so nothing cancels near z = 1.
    double factor = 0.5 * (1.0 + z.complement);
    double weight = 0.5;
    for (int it = 0; it < 64; ++it) {
        const double c = 0.5 * (a - g);
        const double a_next = 0.5 * (a + g);
        g = std::sqrt(a * g);
        a = a_next;
        weight *= 2.0;
        factor -= weight * c * c;
        if (std::abs(c) <= kEps * a) break;
    }
    return {a, factor};
}

}  // namespace

double agm(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("agm: arguments must be positive");
    for (int it = 0; it < 64; ++it) {
        if (std::abs(a - b) <= 2.0 * kEps * a) break;
        const double a_next = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = a_next;
    }
    return 0.5 * (a + b);
}

double hyp_half(HyperArg z) {
    if (z.z < 0.0) throw DomainError("hyp_half: z < 0");
    if (z.z > 1.0 || !(z.complement > 0.0)) throw SingularityError("hyp_half: z >= 1");
    if (z.z == 0.0) return 1.0;
    return 1.0 / agm(1.0, std::sqrt(z.complement));
}

double hyp_minus_half(HyperArg z) {
    check_unit_interval(z, "hyp_minus_half");
    if (z.z == 0.0) return 1.0;
    if (z.complement == 0.0) return 2.0 / std::numbers::pi;
    const AgmSums s = agm_with_sums(z);
    return s.e_factor / s.mean;
}

SeriesValue hyp_series(double a, double b, double c, double z, int max_terms) {
    if (!(std::abs(z) < 1.0)) throw DomainError("hyp_series: |z| >= 1");
    SeriesValue out;
    double term = 1.0;
    double sum = 1.0;
    int k = 0;
    for (; k < max_terms; ++k) {
        const double ratio = (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        term *= ratio;
        sum += term;
        if (term == 0.0) break;
        // Once the term ratio has settled below one, the remainder is bounded geometrically.
        const double r = std::abs((a + k + 1) * (b + k + 1) / ((c + k + 1) * (k + 2.0)) * z);
        if (r < 1.0 && std::abs(term) * r / (1.0 - r) <= 0.25 * kEps * std::abs(sum)) {
            out.truncation.tail_bound = std::abs(term) * r / (1.0 - r);
            ++k;
            break;
        }
    }
    if (k >= max_terms) out.truncation.tail_bound = std::abs(term) / (1.0 - std::abs(z));
    out.value = sum;
    out.terms_used = k;
    out.truncation.n_max = max_terms;
    return out;
}

double hyp_aux(double beta, HyperArg z) {
    if (!(beta > 0.0)) throw DomainError("hyp_aux: beta must be positive");
    check_unit_interval(z, "hyp_aux");
    if (z.complement == 0.0) {
        if (beta >= 1.0) throw SingularityError("hyp_aux: z = 1 with beta >= 1");
        // Gauss summation at z = 1.
        return 0.5 * std::sqrt(std::numbers::pi) * boost::math::tgamma(1.0 - beta) /
               boost::math::tgamma(1.5 - beta);
    }
    if (z.z <= 0.9) return hyp_series(0.5, beta, 1.5, z.z).value;
    // Euler integral: F(1/2,beta;3/2;z) = int_0^1 (1 - z u^2)^{-beta} du.
    // non-const: the boost 1.74 two-argument overload is not const-qualified
    static boost::math::quadrature::tanh_sinh<double> ts;
    auto integrand = [&](double u, double uc) {
        // uc is the distance to the nearest endpoint; near u = 1 use it to form 1-u exactly.
        const double one_minus_u = (u > 0.5) ? uc : 1.0 - u;
        const double base = z.complement + z.z * one_minus_u * (1.0 + u);
        return std::pow(base, -beta);
    };
    return ts.integrate(integrand, 0.0, 1.0, 1e-14);
}

double hyp_half_derivative(HyperArg z) {
    if (z.z < 0.0) throw DomainError("hyp_half_derivative: z < 0");
    if (z.z > 1.0 || !(z.complement > 0.0)) throw SingularityError("hyp_half_derivative: z >= 1");
    if (z.z == 0.0) return 0.25;
    if (z.z < 0.3) {
        // term-wise derivative of the Gauss series
        double coef = 0.25;  // ((1/2)_1 / 1!)^2
        double pw = 1.0;
        double sum = 0.0;
        for (int k = 1; k < 400; ++k) {
            const double term = k * coef * pw;
            sum += term;
            if (term <= 0.25 * kEps * sum) break;
            const double r = (k + 0.5) / (k + 1.0);
            coef *= r * r;
            pw *= z.z;
        }
        return sum;
    }
    const double fp = hyp_half(z);
    const double fm = hyp_minus_half(z);
    return (fm - z.complement * fp) / (2.0 * z.z * z.complement);
}

SeriesValue hyp_log_expansion(double a, double b, double c, HyperArg z, SeriesTruncation trunc) {
    if (std::abs(c - (a + b)) > 1e-14 * (1.0 + std::abs(c))) {
        throw OutOfRegimeError("hyp_log_expansion: requires c = a + b");
    }
    const double w = z.complement;
    if (!(w < 0.1)) throw OutOfRegimeError("hyp_log_expansion: requires 1 - z < 0.1");
    if (!(w > 0.0)) throw SingularityError("hyp_log_expansion: z = 1");
    const double lw = std::log(w);
    const double pre = boost::math::tgamma(a + b) / (boost::math::tgamma(a) * boost::math::tgamma(b));

    double psi1 = boost::math::digamma(1.0);
    double psia = boost::math::digamma(a);
    double psib = boost::math::digamma(b);
    double coef = 1.0;  // (a)_n (b)_n / (n!)^2
    double pw = 1.0;
    double sum = 0.0;
    double last = 0.0;
    int n = 0;
    for (; n < trunc.n_max; ++n) {
        last = coef * pw * (2.0 * psi1 - psia - psib - lw);
        sum += last;
        if (std::abs(last) <= 0.25 * kEps * std::abs(sum) && n > 0) {
            ++n;
            break;
        }
        coef *= (a + n) * (b + n) / ((n + 1.0) * (n + 1.0));
        psi1 += 1.0 / (n + 1.0);
        psia += 1.0 / (a + n);
        psib += 1.0 / (b + n);
        pw *= w;
    }
    SeriesValue out;
    out.value = pre * sum;
    out.terms_used = n;
    out.truncation.n_max = trunc.n_max;
    // coefficients are bounded by a slowly growing factor; a geometric tail in w is a safe envelope
    out.truncation.tail_bound = std::abs(pre * last) * w / (1.0 - w) * 2.0;
    return out;
}

double hyp_kernel_h(HyperArg z) {
    check_unit_interval(z, "hyp_kernel_h");
    if (!(z.complement > 0.0)) throw SingularityError("hyp_kernel_h: z = 1");
    if (z.complement < 0.05) return hyp_log_expansion(0.5, 1.5, 2.0, z).value;
    if (z.z < 0.5) return hyp_series(0.5, 1.5, 2.0, z.z).value;
    return 2.0 * (hyp_half(z) - hyp_minus_half(z)) / z.z;
}

}  // namespace desitter::special
