#include "desitter/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "desitter/errors.hpp"
#include "desitter/kernels.hpp"
#include "desitter/special_fn.hpp"

namespace desitter {

namespace sf = special;

namespace {

bool is_power(BoundKind k) { return k == BoundKind::K1Power || k == BoundKind::K0Power; }

void check_param(BoundKind kind, double param) {
    if (is_power(kind)) {
        if (!(param >= 1.0 && param < 2.0)) throw ValidationError("bound audits: rho must lie in [1, 2)");
    } else if (!(param > -1.0 && param <= 0.0)) {
        throw ValidationError("bound audits: exponent must lie in (-1, 0]");
    }
}

// A^{-1/2} F(1/2,1/2;1;B/A) with z-1-r passed exactly.
double propagator_from_end(double r, double z, double end) {
    const double A = (z + 1.0 - r) * (z + 1.0 + r);
    const double B = std::max(0.0, end * (z - 1.0 + r));
    return sf::hyp_half(sf::HyperArg::with_complement(B / A, 4.0 * z / A)) / std::sqrt(A);
}

// Zeros of g on (0, w), located by sampling and bisection.
template <class G>
std::vector<double> sign_changes(const G& g, double w) {
    constexpr int m = 256;
    std::vector<double> roots;
    double xa = 0.0;
    double ga = g(xa);
    for (int i = 1; i <= m; ++i) {
        const double xb = w * i / m;
        const double gb = i == m ? g(w * (1.0 - 1e-12)) : g(xb);
        if ((ga < 0.0) != (gb < 0.0) && ga != 0.0 && gb != 0.0) {
            double lo = xa;
            double hi = xb;
            for (int k = 0; k < 200 && hi - lo > 1e-15 * w; ++k) {
                const double mid = 0.5 * (lo + hi);
                if ((g(mid) < 0.0) == (ga < 0.0)) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        xa = xb;
        ga = gb;
    }
    return roots;
}

// int_0^w h(r, w - r) dr, split at the given interior points.
QuadResult integrate_split(const EndpointIntegrand& h, double w, const std::vector<double>& cuts,
                           const QuadratureConfig& cfg) {
    std::vector<double> br{0.0};
    br.insert(br.end(), cuts.begin(), cuts.end());
    QuadResult total;
    for (std::size_t i = 0; i < br.size(); ++i) {
        const double a = br[i];
        if (i + 1 < br.size()) {
            const double b = br[i + 1];
            total += integrate([&](double r) { return h(r, w - r); }, a, b, cfg);
        } else {
            total += integrate_to_endpoint(h, a, w, cfg);
        }
    }
    return total;
}

double rel_change(double a, double b) { return a == 0.0 ? (b == 0.0 ? 0.0 : 1.0) : std::abs(b - a) / std::abs(a); }

double sup_of(const std::vector<BoundPoint>& pts) {
    double m = 0.0;
    for (const BoundPoint& p : pts) {
        if (!p.flagged) m = std::max(m, p.ratio);
    }
    return m;
}

BoundPoint evaluate(BoundKind kind, double z, double param, const QuadratureConfig& cfg) {
    BoundPoint p;
    p.z = z;
    p.rhs = bound_rhs(kind, z, param);
    try {
        p.lhs = bound_lhs(kind, z, param, cfg);
    } catch (const AccuracyError& e) {
        p.lhs = e.best_estimate();
        p.flagged = true;
    }
    p.ratio = p.lhs / p.rhs;
    return p;
}

QuadratureConfig tightened(const QuadratureConfig& q, double factor) {
    QuadratureConfig r = q;
    r.abs_tol = std::max(q.abs_tol / factor, 1e-300);
    r.rel_tol = std::max(q.rel_tol / factor, 1e-14);
    return r;
}

}  // namespace

const char* to_string(BoundKind k) {
    switch (k) {
        case BoundKind::K1Power: return "k1-power";
        case BoundKind::WeightedE: return "weighted-e";
        case BoundKind::WeightedK1: return "weighted-k1";
        case BoundKind::K0Power: return "k0-power";
        case BoundKind::WeightedK0: return "weighted-k0";
    }
    return "?";
}

BoundKind parse_bound_kind(const std::string& name) {
    for (BoundKind k : {BoundKind::K1Power, BoundKind::WeightedE, BoundKind::WeightedK1, BoundKind::K0Power,
                        BoundKind::WeightedK0}) {
        if (name == to_string(k)) return k;
    }
    throw ValidationError("unknown bound '" + name + "'");
}

double bound_lhs(BoundKind kind, double z, double param, const QuadratureConfig& cfg) {
    if (!(z > 1.0) || !std::isfinite(z)) throw DomainError("bound audits need z > 1");
    check_param(kind, param);
    const double t = std::log(z);
    const double w = z - 1.0;
    switch (kind) {
        case BoundKind::K1Power: {
            auto h = [&](double r, double end) { return std::pow(propagator_from_end(r, z, end), param); };
            return integrate_to_endpoint(h, 0.0, w, cfg).value;
        }
        case BoundKind::WeightedE: {
            auto h = [&](double r, double end) { return std::pow(r, param) * propagator_from_end(r, z, end); };
            return integrate_to_endpoint(h, 0.0, w, cfg).value;
        }
        case BoundKind::WeightedK1: {
            const double phi = std::expm1(t);
            auto h = [&](double r, double) { return std::pow(r, param) * std::abs(kernel_K1(std::min(r, phi), t).value); };
            return integrate_to_endpoint(h, 0.0, phi, cfg).value;
        }
        case BoundKind::K0Power:
        case BoundKind::WeightedK0: {
            const double phi = std::expm1(t);
            auto k0 = [&](double r) { return kernel_K0_unchecked(r, t, phi - r); };
            const std::vector<double> cuts = sign_changes(k0, phi);
            EndpointIntegrand h;
            if (kind == BoundKind::K0Power) {
                h = [&](double r, double end) { return std::pow(std::abs(kernel_K0_unchecked(r, t, end)), param); };
            } else {
                h = [&](double r, double end) { return std::pow(r, param) * std::abs(kernel_K0_unchecked(r, t, end)); };
            }
            const double I = integrate_split(h, phi, cuts, cfg).value;
            return kind == BoundKind::K0Power ? std::pow(I, 1.0 / param) : I;
        }
    }
    return 0.0;
}

double bound_rhs(BoundKind kind, double z, double param) {
    if (!(z > 1.0)) throw DomainError("bound audits need z > 1");
    check_param(kind, param);
    const double lz = std::log(z);
    switch (kind) {
        case BoundKind::K1Power: {
            const double x = std::pow((z - 1.0) / (z + 1.0), 2);
            const double F = sf::hyp_aux(0.5 * param, sf::HyperArg::with_complement(x, 4.0 * z / ((z + 1.0) * (z + 1.0))));
            return std::pow(1.0 + lz, param) * (z - 1.0) * std::pow(z + 1.0, -param) * F;
        }
        case BoundKind::WeightedE:
        case BoundKind::WeightedK1: return std::pow(z - 1.0, 1.0 + param) * (1.0 + lz) / z;
        case BoundKind::K0Power: return std::pow(z - 1.0, 1.0 / param) / (z + 1.0);
        case BoundKind::WeightedK0: return std::pow(z - 1.0, 1.0 + param) / z;
    }
    return 0.0;
}

std::vector<double> log_grid(double lo, double hi, int m) {
    if (!(lo > 0.0) || !(hi > lo) || m < 2) throw ValidationError("log_grid: need 0 < lo < hi and m >= 2");
    std::vector<double> g(m);
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (int i = 0; i < m; ++i) g[i] = std::exp(a + (b - a) * i / (m - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

bool BoundAudit::finite() const { return std::isfinite(sup_ratio) && sup_ratio > 0.0; }

void BoundsConfig::validate() const {
    if (z_grid.size() < 2) throw ValidationError("bounds: z grid needs at least 2 points");
    for (double z : z_grid) {
        if (!(z > 1.0) || !std::isfinite(z)) throw ValidationError("bounds: z values must exceed 1");
    }
    if (!std::is_sorted(z_grid.begin(), z_grid.end())) throw ValidationError("bounds: z grid must increase");
    for (double r : rho_grid) check_param(BoundKind::K1Power, r);
    for (double a : exponent_grid) check_param(BoundKind::WeightedE, a);
    if (!(refine_factor > 1.0)) throw ValidationError("bounds: refine_factor must exceed 1");
    if (fresh_points < 1) throw ValidationError("bounds: fresh_points must be positive");
    quad.validate();
}

BoundAudit audit_bound(BoundKind kind, double param, const BoundsConfig& cfg) {
    cfg.validate();
    check_param(kind, param);
    BoundAudit a;
    a.kind = kind;
    a.param = param;
    for (double z : cfg.z_grid) a.points.push_back(evaluate(kind, z, param, cfg.quad));
    a.sup_ratio = sup_of(a.points);
    a.flagged = static_cast<int>(std::count_if(a.points.begin(), a.points.end(), [](const BoundPoint& p) { return p.flagged; }));

    const QuadratureConfig fine = tightened(cfg.quad, cfg.refine_factor);
    std::vector<BoundPoint> refined;
    for (double z : cfg.z_grid) refined.push_back(evaluate(kind, z, param, fine));
    a.refined_sup = sup_of(refined);
    a.refinement_change = rel_change(a.sup_ratio, a.refined_sup);

    std::vector<BoundPoint> doubled = a.points;
    for (std::size_t i = 0; i + 1 < cfg.z_grid.size(); ++i) {
        doubled.push_back(evaluate(kind, std::sqrt(cfg.z_grid[i] * cfg.z_grid[i + 1]), param, cfg.quad));
    }
    a.doubled_sup = sup_of(doubled);
    a.doubling_change = rel_change(a.sup_ratio, a.doubled_sup);

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(std::log(cfg.z_grid.front()), std::log(cfg.z_grid.back()));
    a.fresh_worst = 0.0;
    for (int i = 0; i < cfg.fresh_points; ++i) {
        const BoundPoint p = evaluate(kind, std::exp(u(rng)), param, cfg.quad);
        if (!p.flagged && a.sup_ratio > 0.0) a.fresh_worst = std::max(a.fresh_worst, p.ratio / a.sup_ratio);
    }
    a.fresh_ok = a.fresh_worst <= 1.05;
    return a;
}

K0MassAudit audit_k0_mass(const std::vector<double>& t_grid, const BoundsConfig& cfg) {
    std::vector<double> ts = t_grid;
    if (ts.empty()) {
        for (int i = 0; i < 40; ++i) ts.push_back(0.1 + (5.0 - 0.1) * i / 39.0);
    }
    for (double t : ts) {
        if (!(t > 0.0)) throw ValidationError("k0 mass audit: times must be positive");
    }
    auto mass = [](double t, const QuadratureConfig& q) { return bound_lhs(BoundKind::WeightedK0, std::exp(t), 0.0, q); };
    K0MassAudit a;
    a.t = ts;
    for (double t : ts) a.mass.push_back(mass(t, cfg.quad));
    a.constant = *std::max_element(a.mass.begin(), a.mass.end());

    const QuadratureConfig fine = tightened(cfg.quad, cfg.refine_factor);
    a.refined_constant = 0.0;
    for (double t : ts) a.refined_constant = std::max(a.refined_constant, mass(t, fine));
    a.refinement_change = rel_change(a.constant, a.refined_constant);

    a.doubled_constant = a.constant;
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        a.doubled_constant = std::max(a.doubled_constant, mass(0.5 * (ts[i] + ts[i + 1]), cfg.quad));
    }
    a.doubling_change = rel_change(a.constant, a.doubled_constant);
    return a;
}

BoundsReport audit_kernel_bounds(const BoundsConfig& cfg) {
    cfg.validate();
    BoundsReport rep;
    for (BoundKind k : cfg.kinds) {
        const std::vector<double>& params = is_power(k) ? cfg.rho_grid : cfg.exponent_grid;
        for (double p : params) rep.audits.push_back(audit_bound(k, p, cfg));
    }
    rep.k0_mass = audit_k0_mass(cfg.mass_t_grid, cfg);
    return rep;
}

}  // namespace desitter
