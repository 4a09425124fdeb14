#include "desitter/kernels.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "desitter/errors.hpp"
#include "desitter/special_fn.hpp"

namespace desitter {

namespace sf = desitter::special;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kSingularLocus = 1e-4;

KernelRegime regime_of(const ConeArgument& c) {
    if (c.one_minus_zeta < kSingularLocus) return KernelRegime::NearSingularLocus;
    if (c.zeta < kSingularLocus) return KernelRegime::NearLightCone;
    return KernelRegime::Interior;
}

double boundary_tol(double t, double t0) { return 1e-14 * (std::exp(t) + std::exp(t0)); }

}  // namespace

const char* to_string(ConeClass c) {
    switch (c) {
        case ConeClass::Forward: return "Forward";
        case ConeClass::Backward: return "Backward";
        case ConeClass::Boundary: return "Boundary";
        case ConeClass::Outside: return "Outside";
    }
    return "?";
}

const char* to_string(KernelRegime r) {
    switch (r) {
        case KernelRegime::Interior: return "Interior";
        case KernelRegime::NearLightCone: return "NearLightCone";
        case KernelRegime::NearSingularLocus: return "NearSingularLocus";
    }
    return "?";
}

double ConeQuery::distance() const {
    return norm(Vec3{x[0] - x0[0], x[1] - x0[1], x[2] - x0[2]});
}

ConeClass classify_cone(const ConeQuery& q) {
    const double d = q.distance();
    const double w = std::exp(q.t) - std::exp(q.t0);
    if (std::abs(d - std::abs(w)) <= boundary_tol(q.t, q.t0)) return ConeClass::Boundary;
    if (d < w) return ConeClass::Forward;
    if (d < -w) return ConeClass::Backward;
    return ConeClass::Outside;
}

ConeArgument cone_argument(double d, double t, double t0) {
    d = std::abs(d);
    const double et = std::exp(t);
    const double e0 = std::exp(t0);
    const double s = et + e0;
    const double w = std::abs(et - e0);
    ConeArgument c;
    c.A = (s - d) * (s + d);
    c.B = std::max(0.0, (w - d) * (w + d));
    c.zeta = c.B / c.A;
    // A - B = 4 e^{t+t0} exactly
    c.one_minus_zeta = 4.0 * std::exp(t + t0) / c.A;
    return c;
}

double propagator_value(double d, double t, double t0) {
    d = std::abs(d);
    const double w = std::abs(std::exp(t) - std::exp(t0));
    if (d > w + boundary_tol(t, t0)) throw SupportError("propagator_E: point outside the light cones");
    const ConeArgument c = cone_argument(d, t, t0);
    return sf::hyp_half(sf::HyperArg::with_complement(c.zeta, c.one_minus_zeta)) / std::sqrt(c.A);
}

KernelValue propagator_E(const ConeQuery& q) {
    if (classify_cone(q) == ConeClass::Outside) {
        throw SupportError("propagator_E: point outside the light cones");
    }
    const ConeArgument c = cone_argument(q.distance(), q.t, q.t0);
    if (!(c.one_minus_zeta > 0.0)) throw SingularityError("propagator_E: degenerate cone argument");
    KernelValue kv;
    kv.value = sf::hyp_half(sf::HyperArg::with_complement(c.zeta, c.one_minus_zeta)) / std::sqrt(c.A);
    kv.regime = regime_of(c);
    kv.est_err = 8.0 * kEps * kv.value * (1.0 + std::abs(std::log(c.one_minus_zeta)));
    return kv;
}

CharCoords CharCoords::from_spacetime(double x, double t, double b) {
    const double et = std::exp(t);
    const double eb = std::exp(b);
    return {x + et, x - et, eb, -eb};
}

double CharCoords::t() const { return std::log(0.5 * (l - m)); }

double riemann_R(const CharCoords& c) {
    const double lb = c.l - c.b_char;
    const double am = c.a - c.m;
    if (!(lb > 0.0) || !(am > 0.0) || !(c.a > c.b_char) || !(c.l > c.m)) {
        throw DomainError("riemann_R: point outside the characteristic rectangle");
    }
    const double denom = lb * am;
    double zeta = (c.l - c.a) * (c.m - c.b_char) / (-denom);
    const double comp = (c.a - c.b_char) * (c.l - c.m) / denom;
    if (zeta < 0.0) {
        if (zeta < -1e-14) throw DomainError("riemann_R: point outside the cone of the source");
        zeta = 0.0;
    }
    return (c.l - c.m) / std::sqrt(denom) * sf::hyp_half(sf::HyperArg::with_complement(zeta, comp));
}

KernelValue kernel_K1(double z, double t) {
    if (!(t > 0.0)) throw DomainError("kernel_K1: t must be positive");
    const double phi = std::expm1(t);
    if (z < 0.0 || z > phi * (1.0 + 1e-14)) throw SupportError("kernel_K1: z outside [0, e^t - 1]");
    return propagator_E(ConeQuery::line(std::min(z, phi), t, 0.0, 0.0));
}

double kernel_K0_unchecked(double z, double t, double phi_minus_z) {
    // -dE/dt0 at t0 = 0 rewritten with F(1/2,1/2;1) - F(-1/2,1/2;1) = (zeta/2) F(1/2,3/2;2),
    // which removes the apparent pole at z = e^t - 1:
    //   K0 = [F(-1/2,1/2;1;zeta) - (phi/A) F(1/2,3/2;2;zeta)] / (2 sqrt(A))
    const double et = std::exp(t);
    const double phi = std::expm1(t);
    const double A = (et + 1.0 - z) * (et + 1.0 + z);
    const double B = std::max(0.0, phi_minus_z * (phi + z));
    const sf::HyperArg arg = sf::HyperArg::with_complement(B / A, 4.0 * et / A);
    const double fm = sf::hyp_minus_half(arg);
    const double h = sf::hyp_kernel_h(arg);
    return (fm - phi / A * h) / (2.0 * std::sqrt(A));
}

double kernel_K0_unchecked(double z, double t) { return kernel_K0_unchecked(z, t, std::expm1(t) - z); }

KernelValue kernel_K0(double z, double t) {
    if (!(t > 0.0)) throw DomainError("kernel_K0: t must be positive");
    const double phi = std::expm1(t);
    if (z < 0.0) throw DomainError("kernel_K0: z < 0");
    if (z >= phi) throw SingularityError("kernel_K0: z on or beyond e^t - 1; integrate instead");
    const ConeArgument c = cone_argument(z, t, 0.0);
    KernelValue kv;
    kv.value = kernel_K0_unchecked(z, t, phi - z);
    kv.regime = regime_of(c);
    kv.est_err = 32.0 * kEps * (std::abs(kv.value) + 1.0 / std::sqrt(c.A)) *
                 (1.0 + std::abs(std::log(c.one_minus_zeta)));
    return kv;
}

double dE_dt0_bracket(double z, double t) {
    const double et = std::exp(t);
    const double phi = std::expm1(t);
    const double A = (et + 1.0 - z) * (et + 1.0 + z);
    const double B = (phi - z) * (phi + z);
    if (!(B > 0.0)) throw SingularityError("dE_dt0_bracket: z >= e^t - 1");
    const sf::HyperArg arg = sf::HyperArg::with_complement(B / A, 4.0 * et / A);
    const double bracket = (1.0 - et * et + z * z) * sf::hyp_minus_half(arg) + 2.0 * phi * sf::hyp_half(arg);
    return bracket / (2.0 * B * std::sqrt(A));
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& ledger_identity_ids() {
    static const std::vector<std::string> ids{"translation",      "evenness",         "cone-value",
                                              "edge-transport",   "edge-transport-weighted",
                                              "left-edge-slope",  "right-edge-slope", "edge-time-slope",
                                              "source-time-slope"};
    return ids;
}

namespace {

template <class F>
double central4(const F& f, double x, double h) {
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

// One-sided fourth-order derivative; h < 0 gives the backward stencil.
template <class F>
double onesided4(const F& f, double x, double h) {
    return (-25 * f(x) + 48 * f(x + h) - 36 * f(x + 2 * h) + 16 * f(x + 3 * h) - 3 * f(x + 4 * h)) /
           (12 * h);
}

std::string fmt_point(std::initializer_list<std::pair<const char*, double>> kv) {
    std::ostringstream os;
    os.precision(10);
    bool first = true;
    for (const auto& [k, v] : kv) {
        if (!first) os << ';';
        os << k << '=' << v;
        first = false;
    }
    return os.str();
}

double E1d(double x, double t, double y, double b) {
    return propagator_E(ConeQuery::line(x, t, y, b)).value;
}

}  // namespace

LedgerReport identity_ledger(const LedgerConfig& cfg) {
    LedgerReport rep;
    for (const auto& id : ledger_identity_ids()) rep.max_abs_err[id] = 0.0;
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> U(0.05, 0.95);

    auto push = [&](const std::string& id, std::string point, double lhs, double rhs, double err) {
        rep.rows.push_back({id, std::move(point), lhs, rhs, err});
        rep.max_abs_err[id] = std::max(rep.max_abs_err[id], err);
    };

    for (double t : cfg.t_samples) {
        if (!(t > 0.0)) throw DomainError("identity_ledger: t must be positive");
        const double et = std::exp(t);
        const double phi = std::expm1(t);
        for (int i = 0; i < cfg.samples_per_t; ++i) {
            const double u1 = U(rng), u2 = U(rng), u3 = U(rng);
            const double b = 0.9 * u1 * t;
            const double w = et - std::exp(b);
            const double h = std::min(cfg.h, 0.01 * w);

            {  // translation invariance
                const double y = 2.0 * u3 - 1.0;
                const double x = y + (2.0 * u2 - 1.0) * 0.9 * w;
                const double lhs = E1d(x, t, y, b);
                const double rhs = E1d(x - y, t, 0.0, b);
                push("translation", fmt_point({{"x", x}, {"t", t}, {"y", y}, {"b", b}}), lhs, rhs, std::abs(lhs - rhs));
            }
            {  // evenness
                const double x = (2.0 * u2 - 1.0) * 0.9 * w;
                const double lhs = E1d(x, t, 0.0, b);
                const double rhs = E1d(-x, t, 0.0, b);
                push("evenness", fmt_point({{"x", x}, {"t", t}, {"b", b}}), lhs, rhs, std::abs(lhs - rhs));
            }
            {  // value on the boundary of the cone
                const double x = u2 * phi;
                const double lhs = E1d(x, t, 0.0, std::log(et - x));
                const double rhs = 0.5 / (std::sqrt(et) * std::sqrt(et - x));
                push("cone-value", fmt_point({{"x", x}, {"t", t}}), lhs, rhs, std::abs(lhs - rhs));
            }
            {
                auto g = [&](double bb) { return std::exp(bb) * E1d(std::exp(bb) - et, t, 0.0, bb); };
                const double lhs = central4(g, b, h);
                const double rhs = 0.25 * std::exp(-0.5 * t) * std::exp(0.5 * b);
                push("edge-transport", fmt_point({{"t", t}, {"b", b}}), lhs, rhs, std::abs(lhs - rhs));
            }
            {
                auto g1 = [&](double bb) { return bb * std::exp(bb) * E1d(std::exp(bb) - et, t, 0.0, bb); };
                auto g2 = [&](double bb) { return bb * std::exp(bb) * E1d(et - std::exp(bb), t, 0.0, bb); };
                const double l1 = central4(g1, b, h);
                const double l2 = central4(g2, b, h);
                const double rhs = 0.25 * std::exp(-0.5 * t) * std::exp(0.5 * b) * (2.0 + b);
                push("edge-transport-weighted", fmt_point({{"t", t}, {"b", b}}), l1, rhs,
                     std::max(std::abs(l1 - rhs), std::abs(l2 - rhs)));
            }
            const double edge = std::exp(-2.0 * (b + t)) * std::exp(0.5 * b) * std::exp(0.5 * t) / 16.0;
            {  // x-derivative at the left edge, taken from inside
                auto g = [&](double s) { return E1d(s, t, 0.0, b); };
                const double lhs = onesided4(g, -w, h);
                const double rhs = edge * (std::exp(b) - et);
                push("left-edge-slope", fmt_point({{"t", t}, {"b", b}}), lhs, rhs, std::abs(lhs - rhs));
            }
            {
                auto g = [&](double s) { return E1d(s, t, 0.0, b); };
                const double lhs = onesided4(g, w, -h);
                const double rhs = edge * (et - std::exp(b));
                push("right-edge-slope", fmt_point({{"t", t}, {"b", b}}), lhs, rhs, std::abs(lhs - rhs));
            }
            {  // b-derivative on the boundary, from inside the cone
                const double x = u2 * phi;
                const double bstar = std::log(et - x);
                const double hb = cfg.h;
                auto g = [&](double bb) { return E1d(x, t, 0.0, bb); };
                const double lhs = onesided4(g, bstar, -hb);
                const double rhs = std::exp(-2.0 * t) * std::sqrt(et) * (-4.0 * et + x) / (16.0 * std::sqrt(et - x));
                push("edge-time-slope", fmt_point({{"x", x}, {"t", t}}), lhs, rhs, std::abs(lhs - rhs));
            }
            {
                const double z = u2 * 0.9 * phi;
                auto g = [&](double bb) { return E1d(z, t, 0.0, bb); };
                const double lhs = central4(g, 0.0, cfg.h);
                const double rhs = dE_dt0_bracket(z, t);
                push("source-time-slope", fmt_point({{"z", z}, {"t", t}}), lhs, rhs, std::abs(lhs - rhs));
            }
        }
    }
    return rep;
}

}  // namespace desitter
