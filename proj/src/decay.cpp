#include "desitter/decay.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "desitter/errors.hpp"
#include "desitter/solver_1d.hpp"
#include "desitter/solver_nd.hpp"
#include "desitter/spectral.hpp"

namespace desitter {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSlack = 1e-12;

double sphere_area(const SolutionField& f) {
    if (f.geometry == SolutionField::Geometry::Line) return 1.0;
    switch (f.n) {
        case 1: return 2.0;
        case 2: return 2.0 * kPi;
        case 3: return 4.0 * kPi;
        default: throw UnsupportedDimension("lq_norm: n must be 1, 2 or 3");
    }
}

// Composite Simpson on arbitrary abscissae; exact for quadratics.
double simpson(const std::vector<double>& x, const std::vector<double>& g) {
    const std::size_t m = x.size();
    if (m < 2) return 0.0;
    if (m == 2) return 0.5 * (x[1] - x[0]) * (g[0] + g[1]);
    double total = 0.0;
    std::size_t i = 0;
    for (; i + 2 < m; i += 2) {
        const double h0 = x[i + 1] - x[i];
        const double h1 = x[i + 2] - x[i + 1];
        if (h1 > 2.0 * h0 || h0 > 2.0 * h1) {
            total += 0.5 * h0 * (g[i] + g[i + 1]) + 0.5 * h1 * (g[i + 1] + g[i + 2]);
            continue;
        }
        const double H = h0 + h1;
        total += H / 6.0 * ((2.0 - h1 / h0) * g[i] + H * H / (h0 * h1) * g[i + 1] + (2.0 - h0 / h1) * g[i + 2]);
    }
    if (i + 1 < m) {
        // last interval from the parabola through the final three points
        const double h0 = x[i] - x[i - 1];
        const double h1 = x[i + 1] - x[i];
        const double a = (2.0 * h1 * h1 + 3.0 * h0 * h1) / (6.0 * (h0 + h1));
        const double b = (h1 * h1 + 3.0 * h0 * h1) / (6.0 * h0);
        const double c = h1 * h1 * h1 / (6.0 * h0 * (h0 + h1));
        total += a * g[i + 1] + b * g[i] - c * g[i - 1];
    }
    return total;
}

std::string key_of(const std::string& what, const FamilySpec& spec, double t, double R, const DecayConfig& cfg) {
    std::ostringstream os;
    os.precision(17);
    os << what << '|' << spec.str() << '|' << t << '|' << R << '|' << cfg.sample_step << '|' << cfg.quad.abs_tol
       << '|' << cfg.quad.rel_tol;
    return os.str();
}

double family_radius(const FamilySpec& spec) {
    if (spec.kind == "zero") return 0.0;
    const double R = make_field_1d(spec).support_radius;
    if (!std::isfinite(R)) throw SetupError("decay audits need compactly supported data: " + spec.str());
    return R;
}

std::vector<std::pair<double, double>> line_zones(double phi, double R, double S) {
    return {{-S, -phi + 2.0 * R}, {-2.0 * R, 2.0 * R}, {phi - 2.0 * R, S}};
}

std::vector<std::pair<double, double>> radial_zones(double phi, double R, double S) {
    return {{0.0, 2.0 * R}, {phi - 2.0 * R, S}};
}

SolutionField add_fields(const SolutionField& a, const SolutionField& b, double wa, double wb) {
    SolutionField out = a;
    for (std::size_t i = 0; i < out.u.size(); ++i) out.u[i] = wa * a.u[i] + wb * b.u[i];
    return out;
}

// Solution on the line for one data slot ("phi0", "phi1" or "f"), the others zero.
SolutionField line_part(const std::string& slot, const FamilySpec& spec, double t, double R,
                        const DecayConfig& cfg, DecayWorkspace& ws) {
    const std::string key = key_of("line-" + slot, spec, t, R, cfg);
    if (auto it = ws.fields.find(key); it != ws.fields.end()) return it->second;
    const double phi = std::expm1(t);
    const double S = phi + R;
    SolutionField f;
    f.n = 1;
    f.t = t;
    f.support_lo = -S;
    f.support_hi = S;
    f.x = graded_grid(-S, S, line_zones(phi, R, S), cfg.sample_step);
    CauchyData d;
    Solve1DKind kind = Solve1DKind::Cauchy;
    if (slot == "phi0") d.phi0 = make_field_1d(spec);
    if (slot == "phi1") d.phi1 = make_field_1d(spec);
    if (slot == "f") {
        d.f = make_source_1d(spec);
        kind = Solve1DKind::Source;
    }
    f.u.resize(f.x.size(), 0.0);
    if (spec.kind != "zero") {
        const std::vector<SolutionSample> s = solve_grid_1d(kind, d, f.x, t, cfg.quad);
        for (std::size_t i = 0; i < s.size(); ++i) f.u[i] = s[i].u;
    }
    ws.fields.emplace(key, f);
    return f;
}

// Radial solution in R^3 for one data slot.
SolutionField radial_part(const std::string& slot, const FamilySpec& spec, double t, double R,
                          const DecayConfig& cfg, DecayWorkspace& ws) {
    const std::string key = key_of("radial-" + slot, spec, t, R, cfg);
    if (auto it = ws.fields.find(key); it != ws.fields.end()) return it->second;
    const double phi = std::expm1(t);
    const double S = phi + R;
    SolutionField f;
    f.n = 3;
    f.geometry = SolutionField::Geometry::Radial;
    f.t = t;
    f.support_lo = 0.0;
    f.support_hi = S;
    f.x = graded_grid(0.0, S, radial_zones(phi, R, S), cfg.sample_step);
    f.u.resize(f.x.size(), 0.0);
    if (spec.kind != "zero") {
        SphericalMeanCfg scfg;
        scfg.radial_rule = cfg.quad;
        const RadialOperand zero = RadialOperand::zero(3);
        const RadialOperand op = slot == "f" ? zero : make_operand(spec, 3);
        const SourceND src = slot == "f" ? make_source_nd(spec, 3) : SourceND::zero(3);
        for (std::size_t i = 0; i < f.x.size(); ++i) {
            const Vec3 x{f.x[i], 0.0, 0.0};
            if (slot == "phi0") f.u[i] = solve_cauchy_nd(op, zero, x, t, scfg).u;
            if (slot == "phi1") f.u[i] = solve_cauchy_nd(zero, op, x, t, scfg).u;
            if (slot == "f") f.u[i] = solve_source_nd(src, x, t, scfg).u;
        }
    }
    ws.fields.emplace(key, f);
    return f;
}

// Weight that turns a 3D radial Gaussian into the lift of a 2D one:
// int sqrt(k/pi) exp(-k (r^2 + y^2)) dy = exp(-k r^2).
double plane_lift_weight(const FamilySpec& spec) {
    if (spec.kind == "zero") return 0.0;
    if (spec.kind != "gaussian") throw UnsupportedDimension("audits in R^2 use Gaussian data: " + spec.str());
    return std::sqrt(spec.param / kPi);
}

SolutionField sampled_line(const std::function<double(double)>& g, double R, double h) {
    SolutionField f;
    f.n = 1;
    f.support_lo = -R;
    f.support_hi = R;
    const int m = 2 * std::max(8, static_cast<int>(std::ceil(R / h))) + 1;
    for (int i = 0; i < m; ++i) {
        const double x = -R + 2.0 * R * i / (m - 1);
        f.x.push_back(x);
        f.u.push_back(g(x));
    }
    return f;
}

SolutionField sampled_radial(const std::function<double(double)>& g, int n, double R, double h) {
    SolutionField f;
    f.n = n;
    f.geometry = SolutionField::Geometry::Radial;
    f.support_lo = 0.0;
    f.support_hi = R;
    const int m = 2 * std::max(8, static_cast<int>(std::ceil(R / h))) + 1;
    for (int i = 0; i < m; ++i) {
        const double r = R * i / (m - 1);
        f.x.push_back(r);
        f.u.push_back(g(r));
    }
    return f;
}

// |phi|_p of a data family in R^n.
double data_norm(const FamilySpec& spec, int n, double p, double h) {
    if (spec.kind == "zero") return 0.0;
    if (n == 1) {
        const Field1D f = make_field_1d(spec);
        return lq_norm(sampled_line(f.value, f.support_radius, 0.25 * h), p);
    }
    const RadialOperand op = make_operand(spec, n);
    return lq_norm(sampled_radial(op.profile, n, op.support_radius, 0.25 * h), p);
}

// int_0^t (1+t-b) |f(.,b)|_p db.
double source_weight(const FamilySpec& spec, int n, double p, double t, double h) {
    if (spec.kind == "zero") return 0.0;
    auto norm_at = [&](double b) {
        if (n == 1) {
            const Source1D f = make_source_1d(spec);
            return lq_norm(sampled_line([&](double x) { return f.value(x, b); }, f.support_radius, 0.25 * h), p);
        }
        const SourceND f = make_source_nd(spec, n);
        return lq_norm(sampled_radial([&](double r) { return f.profile(r, b); }, n, f.support_radius, 0.25 * h), p);
    };
    auto g = [&](double b) { return (1.0 + t - b) * norm_at(b); };
    return gauss_composite(g, 0.0, t, 8, 2);
}

double delta(const DecayConfig& c) { return 1.0 / c.p - 1.0 / c.q; }

// |(-Laplacian)^{-s} u|_q for a radial solution in R^n built from 3D parts.
double fractional_norm(const DecayConfig& cfg, const SolutionField& u3, double phi, double R,
                       std::vector<std::string>& warnings) {
    const double S = u3.support_hi;
    SolutionField w3 = u3;
    if (cfg.s > 0.0) {
        const double L = cfg.period_factor * S;
        const int N = static_cast<int>(std::ceil(L / cfg.sample_step));
        std::vector<std::string> local;
        w3 = frac_laplacian_neg_s(u3, cfg.s, L, N, &local);
        for (const std::string& w : local) {
            std::ostringstream os;
            os << "t=" << u3.t << ": " << w;
            warnings.push_back(os.str());
        }
    }
    if (cfg.n == 3) return lq_norm(w3, cfg.q);
    const double hi = w3.support_hi;
    std::vector<std::pair<double, double>> zones{{0.0, 2.0 * R}, {phi - 2.0 * R, std::min(hi, phi + 2.0 * R)}};
    const std::vector<double> rho = graded_grid(0.0, hi, zones, cfg.sample_step);
    double scale = 0.0;
    for (double v : w3.u) scale = std::max(scale, std::abs(v));
    QuadratureConfig pq{Rule::GaussLegendreComposite, std::max(1e-300, 1e-10 * scale), 1e-7, 12};
    double err = 0.0;
    const SolutionField w2 = project_radial_to_plane(w3, rho, {phi - 2.0 * R, phi + R, S}, pq, &err);
    double top = 0.0;
    for (double v : w2.u) top = std::max(top, std::abs(v));
    if (err > 1e-6 * top) {
        std::ostringstream os;
        os << "t=" << u3.t << ": projection error estimate " << err << " against max " << top;
        warnings.push_back(os.str());
    }
    return lq_norm(w2, cfg.q);
}

void finish(DecayReport& rep) {
    rep.sup_ratio = 0.0;
    for (const DecayRow& r : rep.rows) rep.sup_ratio = std::max(rep.sup_ratio, r.ratio);
}

void push_row(DecayReport& rep, double t, double lhs, double rhs) {
    if (lhs == 0.0 && rhs == 0.0) return;  // 0/0 carries no information
    const double ratio = rhs > 0.0 ? lhs / rhs : std::numeric_limits<double>::infinity();
    rep.rows.push_back({t, lhs, rhs, ratio});
}

}  // namespace

double lq_norm(const SolutionField& field, double q) {
    if (!(q >= 1.0)) throw ValidationError("lq_norm: q must lie in [1, inf]");
    if (field.x.size() != field.u.size() || field.x.empty()) throw SetupError("lq_norm: malformed field");
    const double w = sphere_area(field);
    const bool radial = field.geometry == SolutionField::Geometry::Radial;
    const double lo = radial ? 0.0 : field.support_lo;
    const double hi = field.support_hi;
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw CoverageError("lq_norm: field support is unbounded");
    const double tol = 1e-9 * std::max({1.0, std::abs(lo), std::abs(hi)});
    if (field.x.front() > lo + tol || field.x.back() < hi - tol) {
        std::ostringstream os;
        os << "lq_norm: samples [" << field.x.front() << ", " << field.x.back() << "] do not cover the support [" << lo
           << ", " << hi << "]";
        throw CoverageError(os.str());
    }
    std::vector<double> xs;
    std::vector<double> g;
    for (std::size_t i = 0; i < field.x.size(); ++i) {
        const double x = field.x[i];
        if (x < lo - tol || x > hi + tol) continue;
        const double a = std::abs(field.u[i]);
        xs.push_back(x);
        if (std::isinf(q)) {
            g.push_back(a);
        } else {
            const double weight = radial ? w * std::pow(x, field.n - 1) : 1.0;
            g.push_back(weight * std::pow(a, q));
        }
    }
    if (std::isinf(q)) return g.empty() ? 0.0 : *std::max_element(g.begin(), g.end());
    const double I = simpson(xs, g);
    return std::pow(std::max(I, 0.0), 1.0 / q);
}

std::vector<double> graded_grid(double lo, double hi, const std::vector<std::pair<double, double>>& zones, double h,
                                double growth) {
    if (!(hi > lo) || !(h > 0.0)) throw SetupError("graded_grid: need lo < hi and h > 0");
    auto dist = [&](double x) {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& [a, b] : zones) {
            if (b < a) continue;
            if (x >= a && x <= b) return 0.0;
            d = std::min(d, x < a ? a - x : x - b);
        }
        return d;
    };
    std::vector<double> xs{lo};
    double x = lo;
    for (;;) {
        double step = std::max(h, growth * dist(x));
        if (!std::isfinite(step)) step = std::max(h, growth * (hi - lo));
        if (x + step >= hi - 0.5 * h) break;
        x += step;
        xs.push_back(x);
    }
    xs.push_back(hi);
    return xs;
}

const char* to_string(DecayEstimate e) {
    switch (e) {
        case DecayEstimate::SourceLine: return "source-line";
        case DecayEstimate::CauchyLqLq: return "cauchy-lq-lq";
        case DecayEstimate::CauchyLine: return "cauchy-line";
        case DecayEstimate::SourceFractional: return "source-fractional";
        case DecayEstimate::CauchyFractional: return "cauchy-fractional";
    }
    return "?";
}

DecayEstimate parse_decay_estimate(const std::string& name) {
    for (DecayEstimate e : {DecayEstimate::SourceLine, DecayEstimate::CauchyLqLq, DecayEstimate::CauchyLine,
                            DecayEstimate::SourceFractional, DecayEstimate::CauchyFractional}) {
        if (name == to_string(e)) return e;
    }
    throw ValidationError("unknown decay estimate '" + name + "'");
}

void DecayConfig::validate() const {
    if (n < 1 || n > 3) throw ValidationError("decay: n must be 1, 2 or 3");
    if (t_grid.empty()) throw ValidationError("decay: t_grid is empty");
    for (double t : t_grid) {
        if (!(t > 0.0) || !std::isfinite(t)) throw ValidationError("decay: times must be positive and finite");
    }
    if (!(p >= 1.0) || !(q >= 1.0)) throw ValidationError("decay: p and q must be at least 1");
    if (!(s >= 0.0)) throw ValidationError("decay: s must be non-negative");
    if (!(rho >= 1.0)) throw ValidationError("decay: rho must be at least 1");
    if (!(sample_step > 0.0)) throw ValidationError("decay: sample_step must be positive");
    if (!(period_factor >= 4.0)) throw ValidationError("decay: period_factor must be at least 4");
    quad.validate();
}

Admissibility check_admissible(const DecayConfig& c) {
    auto fail = [](const std::string& why) { return Admissibility{false, why}; };
    const double rho_dual = c.rho > 1.0 ? c.rho / (c.rho - 1.0) : std::numeric_limits<double>::infinity();
    const double inv_rho_dual = c.rho > 1.0 ? 1.0 - 1.0 / c.rho : 0.0;
    switch (c.estimate) {
        case DecayEstimate::SourceLine:
        case DecayEstimate::CauchyLine: {
            if (c.n != 1) return fail("estimate lives on the line (n = 1)");
            if (c.s != 0.0) return fail("estimate has no fractional order (s = 0)");
            if (!(c.rho >= 1.0 && c.rho < 2.0)) return fail("need 1 <= rho < 2");
            if (c.estimate == DecayEstimate::CauchyLine && c.rho == 1.0) {
                if (std::abs(c.p - c.q) > kSlack * c.q) return fail("rho = 1 needs q = p");
                return {true, "rho = 1: routed to the L^q-L^q estimate"};
            }
            if (!(c.p > 1.0 && c.p < rho_dual)) return fail("need 1 < p < rho'");
            if (std::abs(1.0 / c.q - (1.0 / c.p - inv_rho_dual)) > kSlack) return fail("need 1/q = 1/p - 1/rho'");
            return {true, ""};
        }
        case DecayEstimate::CauchyLqLq:
            if (c.n != 1) return fail("estimate lives on the line (n = 1)");
            if (c.s != 0.0) return fail("estimate has no fractional order (s = 0)");
            return {true, ""};
        case DecayEstimate::SourceFractional:
        case DecayEstimate::CauchyFractional: {
            if (c.n != 2 && c.n != 3) return fail("estimate is audited in n = 2, 3");
            if (!(c.p > 1.0 && c.p <= 2.0)) return fail("need 1 < p <= 2");
            if (std::abs(1.0 / c.p + 1.0 / c.q - 1.0) > kSlack) return fail("need 1/p + 1/q = 1");
            const double d = delta(c);
            if (2.0 * c.s < 0.5 * (c.n + 1) * d - kSlack) return fail("need (n+1)(1/p-1/q)/2 <= 2s");
            if (2.0 * c.s > c.n * d + kSlack) return fail("need 2s <= n(1/p-1/q)");
            if (!(c.n * d - 1.0 < 2.0 * c.s)) return fail("need n(1/p-1/q) - 1 < 2s");
            return {true, ""};
        }
    }
    return fail("unknown estimate");
}

double DecayReport::sup_ratio_until(double t_max) const {
    double m = 0.0;
    for (const DecayRow& r : rows) {
        if (r.t <= t_max) m = std::max(m, r.ratio);
    }
    return m;
}

double DecayReport::drift(double t_split) const {
    const double a = sup_ratio_until(t_split);
    if (a == 0.0) return sup_ratio == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::abs(sup_ratio - a) / a;
}

DecayReport audit_source_decay(const DecayConfig& cfg, const FamilySpec& f, DecayWorkspace* ws) {
    cfg.validate();
    DecayReport rep;
    rep.config = cfg;
    rep.data = "f=" + f.str();
    const Admissibility adm = check_admissible(cfg);
    rep.admissible = adm.ok;
    rep.reason = adm.reason;
    if (!adm.ok) return rep;
    if (cfg.estimate != DecayEstimate::SourceLine && cfg.estimate != DecayEstimate::SourceFractional) {
        throw ValidationError(std::string("audit_source_decay: '") + to_string(cfg.estimate) +
                              "' is a Cauchy estimate");
    }
    DecayWorkspace local;
    DecayWorkspace& w = ws ? *ws : local;
    const double R = family_radius(f);
    for (double t : cfg.t_grid) {
        const double phi = std::expm1(t);
        double lhs = 0.0;
        double rhs = 0.0;
        if (cfg.estimate == DecayEstimate::SourceLine) {
            if (f.kind != "zero") lhs = lq_norm(line_part("f", f, t, R, cfg, w), cfg.q);
            rhs = std::exp(t / cfg.rho - t) * source_weight(f, 1, cfg.p, t, cfg.sample_step);
        } else {
            if (f.kind != "zero") {
                const double a = cfg.n == 2 ? plane_lift_weight(f) : 1.0;
                SolutionField u3 = radial_part("f", f, t, R, cfg, w);
                for (double& v : u3.u) v *= a;
                lhs = fractional_norm(cfg, u3, phi, R, rep.warnings);
            }
            rhs = std::exp(t * (2.0 * cfg.s - cfg.n * delta(cfg))) * source_weight(f, cfg.n, cfg.p, t, cfg.sample_step);
        }
        push_row(rep, t, lhs, rhs);
    }
    finish(rep);
    return rep;
}

DecayReport audit_cauchy_decay(const DecayConfig& cfg, const FamilySpec& phi0, const FamilySpec& phi1,
                               DecayWorkspace* ws) {
    cfg.validate();
    DecayReport rep;
    rep.config = cfg;
    rep.data = "phi0=" + phi0.str() + " phi1=" + phi1.str();
    const Admissibility adm = check_admissible(cfg);
    rep.admissible = adm.ok;
    rep.reason = adm.reason;
    if (!adm.ok) return rep;
    if (cfg.estimate == DecayEstimate::SourceLine || cfg.estimate == DecayEstimate::SourceFractional) {
        throw ValidationError(std::string("audit_cauchy_decay: '") + to_string(cfg.estimate) +
                              "' is a source estimate");
    }
    DecayEstimate shape = cfg.estimate;
    if (shape == DecayEstimate::CauchyLine && cfg.rho == 1.0) {
        shape = DecayEstimate::CauchyLqLq;
        rep.warnings.push_back("rho = 1: routed to the L^q-L^q estimate");
    }
    DecayWorkspace local;
    DecayWorkspace& w = ws ? *ws : local;
    const double R = std::max(family_radius(phi0), family_radius(phi1));
    const double h = cfg.sample_step;
    for (double t : cfg.t_grid) {
        const double phi = std::expm1(t);
        double lhs = 0.0;
        double rhs = 0.0;
        const bool trivial = phi0.kind == "zero" && phi1.kind == "zero";
        if (cfg.n == 1) {
            if (!trivial) {
                const SolutionField u = add_fields(line_part("phi0", phi0, t, R, cfg, w),
                                                   line_part("phi1", phi1, t, R, cfg, w), 1.0, 1.0);
                lhs = lq_norm(u, cfg.q);
            }
            if (shape == DecayEstimate::CauchyLqLq) {
                rhs = data_norm(phi0, 1, cfg.q, h) + (1.0 + t) * data_norm(phi1, 1, cfg.q, h);
            } else {
                const double ir = 1.0 / cfg.rho;
                rhs = std::exp(-0.5 * t) * data_norm(phi0, 1, cfg.q, h) +
                      std::pow(phi, ir) * std::exp(-t) * data_norm(phi0, 1, cfg.p, h) +
                      (1.0 + t) * std::pow(phi, ir - 1.0) * (-std::expm1(-t)) * data_norm(phi1, 1, cfg.p, h);
            }
        } else {
            if (!trivial) {
                const double a0 = cfg.n == 2 ? plane_lift_weight(phi0) : 1.0;
                const double a1 = cfg.n == 2 ? plane_lift_weight(phi1) : 1.0;
                const SolutionField u3 = add_fields(radial_part("phi0", phi0, t, R, cfg, w),
                                                    radial_part("phi1", phi1, t, R, cfg, w), a0, a1);
                lhs = fractional_norm(cfg, u3, phi, R, rep.warnings);
            }
            rhs = std::pow(phi, 2.0 * cfg.s - cfg.n * delta(cfg)) *
                  (data_norm(phi0, cfg.n, cfg.p, h) + (1.0 + t) * (-std::expm1(-t)) * data_norm(phi1, cfg.n, cfg.p, h));
        }
        push_row(rep, t, lhs, rhs);
    }
    finish(rep);
    return rep;
}

std::vector<ExponentTriple> admissible_exponents(int n, const std::vector<double>& p_grid) {
    std::vector<ExponentTriple> out;
    for (double p : p_grid) {
        if (!(p > 1.0 && p <= 2.0)) continue;
        const double q = p / (p - 1.0);
        const double d = 1.0 / p - 1.0 / q;
        const double lo = 0.25 * (n + 1) * d;
        const double hi = 0.5 * n * d;
        if (lo > hi || !(n * d - 1.0 < 2.0 * lo)) continue;
        out.push_back({p, q, lo});
        if (hi > lo + kSlack) out.push_back({p, q, hi});
    }
    return out;
}

}  // namespace desitter
