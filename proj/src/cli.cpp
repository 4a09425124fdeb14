#include "desitter/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "desitter/bounds.hpp"
#include "desitter/compare.hpp"
#include "desitter/decay.hpp"
#include "desitter/errors.hpp"
#include "desitter/kernels.hpp"
#include "desitter/solver_1d.hpp"
#include "desitter/solver_nd.hpp"
#include "desitter/version.hpp"

namespace desitter::cli {

using json = nlohmann::ordered_json;
using io::fmt;

namespace {

const std::map<std::string, std::vector<ParamSpec>>& param_table() {
    static const std::map<std::string, std::vector<ParamSpec>> table{
        {"eval-kernel",
         {{"kernel", "K1", "E, K0 or K1"},
          {"z", "0.5", "comma list of distances"},
          {"t", "1", "observation time"},
          {"t0", "0", "source time (E only)"}}},
        {"solve-1d",
         {{"phi0", "zero", "initial value family"},
          {"phi1", "zero", "initial velocity family"},
          {"f", "zero", "source family (time independent)"},
          {"t", "1", "time"},
          {"x-grid", "-3:3:601", "lo:hi:n"},
          {"route", "cauchy", "cauchy, source or duhamel"},
          {"abs-tol", "1e-10", "quadrature absolute tolerance"},
          {"rel-tol", "1e-8", "quadrature relative tolerance"}}},
        {"solve-nd",
         {{"n", "3", "dimension, 2 or 3"},
          {"phi0", "zero", "initial value family"},
          {"phi1", "zero", "initial velocity family"},
          {"f", "zero", "source family (time independent)"},
          {"t", "1", "time"},
          {"r-grid", "0:3:61", "lo:hi:n, points along the first axis"},
          {"abs-tol", "1e-10", "quadrature absolute tolerance"},
          {"rel-tol", "1e-8", "quadrature relative tolerance"}}},
        {"compare-fd",
         {{"case", "gaussian", "initial value family; bare 'gaussian' means gaussian:4"},
          {"phi1", "zero", "initial velocity family"},
          {"n", "1", "1 (line) or 3 (radial)"},
          {"t", "1", "time"},
          {"nx", "4001", "finite-difference grid points"},
          {"half-width", "8", "domain half width"},
          {"cfl", "0.9", "CFL number"}}},
        {"identities",
         {{"t", "0.5,1,2", "comma list of times"},
          {"samples", "50", "random points per time"},
          {"seed", "20240601", "random seed"},
          {"fd-step", "1e-5", "relative finite-difference step"}}},
        {"audit-decay",
         {{"estimate", "cauchy-lq-lq",
           "source-line, cauchy-lq-lq, cauchy-line, source-fractional or cauchy-fractional"},
          {"n", "1", "dimension"},
          {"p", "2", "data exponent"},
          {"q", "2", "solution exponent"},
          {"s", "0", "fractional order"},
          {"rho", "1", "line exponent"},
          {"t-grid", "0.1,0.5,1,2,3,4,5", "comma list of times"},
          {"phi0", "gaussian:1", "initial value family"},
          {"phi1", "gaussian:1", "initial velocity family"},
          {"f", "gaussian:1", "source family"},
          {"sample-step", "0.1", "finest sample spacing"},
          {"period-factor", "8", "spectral half period over support"},
          {"enumerate", "false", "run every admissible (p,q,s) over p-grid"},
          {"p-grid", "1.2,1.5,2", "p values for enumerate"},
          {"drift-split", "5", "time where the drift comparison cuts the grid"}}},
        {"audit-bounds",
         {{"kinds", "all", "comma list of k1-power, weighted-e, weighted-k1, k0-power, weighted-k0"},
          {"z-min", "1.01", "smallest z"},
          {"z-max", "2980.9579870417283", "largest z"},
          {"z-points", "40", "log grid size"},
          {"rho-grid", "1,1.25,1.5,1.75", "power exponents"},
          {"a-grid", "-0.75,-0.5,-0.25,0", "weight exponents"},
          {"mass-t", "0.1:5:40", "lo:hi:n for the K0 integrability constant"},
          {"refine-factor", "100", "tolerance tightening for the stability check"},
          {"seed", "20240607", "seed of the fresh grid"}}},
        {"huygens",
         {{"phi1", "bump:0.5", "initial velocity family (R^3)"},
          {"x", "0", "probe distance from the origin"},
          {"t-grid", "1.2,1.5,2,2.5,3", "comma list of times"}}},
    };
    return table;
}

// ---- parameter parsing ----

double parse_number(const std::string& key, const std::string& text) {
    double v = 0.0;
    const char* b = text.data();
    const char* e = b + text.size();
    if (!text.empty() && *b == '+') ++b;
    const auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc() || res.ptr != e) throw ValidationError(key + ": '" + text + "' is not a number");
    if (!std::isfinite(v)) throw ValidationError(key + ": value must be finite");
    return v;
}

int parse_int(const std::string& key, const std::string& text) {
    const double v = parse_number(key, text);
    if (v != std::floor(v) || std::abs(v) > 1e9) throw ValidationError(key + ": '" + text + "' is not an integer");
    return static_cast<int>(v);
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::stringstream ss(text);
    while (std::getline(ss, item, sep)) out.push_back(item);
    if (!text.empty() && text.back() == sep) out.emplace_back();
    return out;
}

class Params {
public:
    explicit Params(std::map<std::string, std::string> m) : m_(std::move(m)) {}

    const std::string& str(const std::string& k) const { return m_.at(k); }
    double num(const std::string& k) const { return parse_number(k, str(k)); }
    int integer(const std::string& k) const { return parse_int(k, str(k)); }
    FamilySpec family(const std::string& k) const { return FamilySpec::parse(str(k)); }

    bool flag(const std::string& k) const {
        const std::string& v = str(k);
        if (v == "true" || v == "1") return true;
        if (v == "false" || v == "0") return false;
        throw ValidationError(k + ": expected true or false");
    }

    std::vector<double> list(const std::string& k) const {
        std::vector<double> out;
        for (const std::string& item : split(str(k), ',')) out.push_back(parse_number(k, item));
        if (out.empty()) throw ValidationError(k + ": empty list");
        return out;
    }

    // lo:hi:n, n >= 1 evenly spaced points
    std::vector<double> grid(const std::string& k) const {
        const auto parts = split(str(k), ':');
        if (parts.size() != 3) throw ValidationError(k + ": expected lo:hi:n");
        const double lo = parse_number(k, parts[0]);
        const double hi = parse_number(k, parts[1]);
        const int n = parse_int(k, parts[2]);
        if (n < 1) throw ValidationError(k + ": n must be positive");
        if (n > 1 && !(hi > lo)) throw ValidationError(k + ": hi must exceed lo");
        if (n == 1) return {lo};
        std::vector<double> out(n);
        for (int i = 0; i < n; ++i) out[i] = i + 1 == n ? hi : lo + (hi - lo) * i / (n - 1);
        return out;
    }

private:
    std::map<std::string, std::string> m_;
};

void require_positive(const std::string& key, double v) {
    if (!(v > 0.0)) throw ValidationError(key + " must be positive");
}

json quad_json(const QuadratureConfig& q) {
    return {{"rule", q.rule == Rule::DoubleExponential ? "double-exponential" : "gauss-legendre"},
            {"abs_tol", q.abs_tol},
            {"rel_tol", q.rel_tol},
            {"max_refinements", q.max_refinements}};
}

QuadratureConfig quad_from(const Params& p) {
    QuadratureConfig q;
    q.abs_tol = p.num("abs-tol");
    q.rel_tol = p.num("rel-tol");
    q.validate();
    return q;
}

void write_table(io::OutputDir& out, const std::string& stem, const io::Table& t, bool dat = true) {
    out.write(stem + ".csv", io::to_csv(t));
    if (dat) out.write(stem + ".dat", io::to_dat(t));
}

// json has no nan/inf; write them as strings
json num_json(double v) { return std::isfinite(v) ? json(v) : json(fmt(v)); }

// ---- subcommands ----
// Each one validates everything it needs before computing, writes its result
// files, and returns the tolerances used.

json run_eval_kernel(const Params& p, io::OutputDir& out) {
    const std::string kernel = p.str("kernel");
    if (kernel != "E" && kernel != "K0" && kernel != "K1") throw ValidationError("kernel must be E, K0 or K1");
    const std::vector<double> zs = p.list("z");
    const double t = p.num("t");
    const double t0 = p.num("t0");
    if (kernel != "E" && t0 != 0.0) throw ValidationError("t0 applies to E only");

    io::Table tab{{"kernel", "z", "t", "t0", "value", "regime", "est_err", "status"}, {}};
    for (double z : zs) {
        std::string status = "ok";
        KernelValue kv;
        try {
            if (kernel == "E") {
                kv = propagator_E(ConeQuery{{z, 0, 0}, t, {0, 0, 0}, t0});
            } else if (kernel == "K1") {
                kv = kernel_K1(z, t);
            } else {
                kv = kernel_K0(z, t);
            }
        } catch (const SupportError&) {
            status = "outside-support";
        } catch (const SingularityError&) {
            status = "singular";
        } catch (const DomainError&) {
            status = "domain-error";
        }
        const bool ok = status == "ok";
        tab.add({kernel, fmt(z), fmt(t), fmt(t0), ok ? fmt(kv.value) : "nan", ok ? to_string(kv.regime) : "none",
                 ok ? fmt(kv.est_err) : "nan", status});
    }
    write_table(out, "kernel", tab, false);
    return json::object();
}

json run_solve_1d(const Params& p, io::OutputDir& out) {
    CauchyData data{make_field_1d(p.family("phi0")), make_field_1d(p.family("phi1")), make_source_1d(p.family("f"))};
    const double t = p.num("t");
    require_positive("t", t);
    const std::vector<double> xs = p.grid("x-grid");
    const std::string route = p.str("route");
    Solve1DKind kind = Solve1DKind::Cauchy;
    if (route == "source" || route == "duhamel") {
        if (p.family("phi0").kind != "zero" || p.family("phi1").kind != "zero") {
            throw ValidationError("route " + route + " takes a source only; use route cauchy with Cauchy data");
        }
        kind = route == "source" ? Solve1DKind::Source : Solve1DKind::Duhamel;
    } else if (route != "cauchy") {
        throw ValidationError("route must be cauchy, source or duhamel");
    }
    const QuadratureConfig q = quad_from(p);

    const auto sol = solve_grid_1d(kind, data, xs, t, q);
    io::Table tab{{"x", "u", "est_err"}, {}};
    for (const auto& s : sol) tab.add({fmt(s.x), fmt(s.u), fmt(s.est_err)});
    write_table(out, "solution", tab);
    return {{"quadrature", quad_json(q)}};
}

json run_solve_nd(const Params& p, io::OutputDir& out) {
    const int n = p.integer("n");
    if (n != 2 && n != 3) throw UnsupportedDimension("solve-nd: n must be 2 or 3");
    const RadialOperand phi0 = make_operand(p.family("phi0"), n);
    const RadialOperand phi1 = make_operand(p.family("phi1"), n);
    const FamilySpec fs = p.family("f");
    const SourceND f = make_source_nd(fs, n);
    const double t = p.num("t");
    require_positive("t", t);
    const std::vector<double> rs = p.grid("r-grid");
    SphericalMeanCfg cfg;
    cfg.radial_rule = quad_from(p);
    cfg.validate();

    io::Table tab{{"r", "u", "est_err"}, {}};
    for (double r : rs) {
        const Vec3 x{r, 0, 0};
        SolutionSample s = solve_cauchy_nd(phi0, phi1, x, t, cfg);
        if (fs.kind != "zero") {
            const SolutionSample g = solve_source_nd(f, x, t, cfg);
            s.u += g.u;
            s.est_err += g.est_err;
        }
        tab.add({fmt(r), fmt(s.u), fmt(s.est_err)});
    }
    write_table(out, "solution", tab);
    return {{"quadrature", quad_json(cfg.radial_rule)},
            {"n_angular", cfg.n_angular},
            {"max_angular", cfg.max_angular}};
}

json run_compare_fd(const Params& p, io::OutputDir& out) {
    std::string c = p.str("case");
    if (c == "gaussian") c = "gaussian:4";
    if (c == "bump") c = "bump:1";
    const FamilySpec phi0 = FamilySpec::parse(c);
    const FamilySpec phi1 = p.family("phi1");
    const int n = p.integer("n");
    if (n != 1 && n != 3) throw UnsupportedDimension("compare-fd: n must be 1 or 3");
    FdCompareConfig cfg;
    cfg.t = p.num("t");
    cfg.nx = p.integer("nx");
    cfg.half_width = p.num("half-width");
    cfg.cfl = p.num("cfl");
    require_positive("t", cfg.t);
    require_positive("half-width", cfg.half_width);
    if (cfg.nx < 11) throw ValidationError("nx must be at least 11");
    if (!(cfg.cfl > 0.0 && cfg.cfl <= 1.0)) throw ValidationError("cfl must lie in (0, 1]");

    const FdComparison cmp = compare_with_fd(phi0, phi1, n, cfg);
    io::Table tab{{n == 1 ? "x" : "r", "u_solver", "u_fd", "u_fd_fine"}, {}};
    for (std::size_t i = 0; i < cmp.x.size(); ++i) {
        tab.add({fmt(cmp.x[i]), fmt(cmp.u_solver[i]), fmt(cmp.u_fd[i]), fmt(cmp.u_fd_fine[i])});
    }
    write_table(out, "compare", tab);
    json res{{"case", phi0.str()},
             {"phi1", phi1.str()},
             {"n", n},
             {"t", cfg.t},
             {"nx", cmp.nx},
             {"dx", cmp.dx},
             {"rel_l2_error", num_json(cmp.rel_l2_error)},
             {"rel_l2_error_fine", num_json(cmp.rel_l2_error_fine)},
             {"refinement_ratio", num_json(cmp.refinement_ratio)}};
    out.write("compare.json", res.dump(2) + "\n");
    return {{"quadrature", quad_json(cfg.quad)}, {"cfl", cfg.cfl}};
}

json run_identities(const Params& p, io::OutputDir& out) {
    LedgerConfig cfg;
    cfg.t_samples = p.list("t");
    for (double t : cfg.t_samples) require_positive("t", t);
    cfg.samples_per_t = p.integer("samples");
    if (cfg.samples_per_t < 1) throw ValidationError("samples must be positive");
    const int seed = p.integer("seed");
    if (seed < 0) throw ValidationError("seed must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(seed);
    cfg.h = p.num("fd-step");
    require_positive("fd-step", cfg.h);

    const LedgerReport rep = identity_ledger(cfg);
    io::Table tab{{"identity", "point", "lhs", "rhs", "abs_err"}, {}};
    for (const auto& r : rep.rows) tab.add({r.identity_id, r.point, fmt(r.lhs), fmt(r.rhs), fmt(r.abs_err)});
    write_table(out, "identities", tab, false);
    json summary = json::object();
    for (const auto& id : ledger_identity_ids()) summary[id] = num_json(rep.max_abs_err.at(id));
    out.write("identities.json", json{{"max_abs_err", summary}}.dump(2) + "\n");
    return {{"fd_step", cfg.h}};
}

json decay_config_json(const DecayConfig& c) {
    return {{"estimate", to_string(c.estimate)}, {"n", c.n}, {"p", c.p}, {"q", c.q}, {"s", c.s}, {"rho", c.rho},
            {"t_grid", c.t_grid}, {"sample_step", c.sample_step}, {"period_factor", c.period_factor}};
}

json run_audit_decay(const Params& p, io::OutputDir& out) {
    DecayConfig base;
    base.estimate = parse_decay_estimate(p.str("estimate"));
    base.n = p.integer("n");
    base.p = p.num("p");
    base.q = p.str("q") == "inf" ? INFINITY : p.num("q");
    base.s = p.num("s");
    base.rho = p.num("rho");
    base.t_grid = p.list("t-grid");
    base.sample_step = p.num("sample-step");
    base.period_factor = p.num("period-factor");
    base.validate();
    const FamilySpec phi0 = p.family("phi0");
    const FamilySpec phi1 = p.family("phi1");
    const FamilySpec f = p.family("f");
    const double split_t = p.num("drift-split");
    const bool fractional =
        base.estimate == DecayEstimate::SourceFractional || base.estimate == DecayEstimate::CauchyFractional;

    std::vector<DecayConfig> configs;
    if (p.flag("enumerate")) {
        if (!fractional) throw ValidationError("enumerate applies to the fractional estimates only");
        for (const ExponentTriple& e : admissible_exponents(base.n, p.list("p-grid"))) {
            DecayConfig c = base;
            c.p = e.p;
            c.q = e.q;
            c.s = e.s;
            configs.push_back(c);
        }
    } else {
        configs.push_back(base);
    }
    for (const auto& c : configs) c.validate();

    const bool is_source = base.estimate == DecayEstimate::SourceLine || base.estimate == DecayEstimate::SourceFractional;
    DecayWorkspace ws;
    io::Table tab{{"estimate", "n", "p", "q", "s", "rho", "t", "lhs", "rhs_shape", "ratio"}, {}};
    json reports = json::array();
    for (const DecayConfig& c : configs) {
        const DecayReport rep = is_source ? audit_source_decay(c, f, &ws) : audit_cauchy_decay(c, phi0, phi1, &ws);
        for (const DecayRow& r : rep.rows) {
            tab.add({to_string(c.estimate), std::to_string(c.n), fmt(c.p), fmt(c.q), fmt(c.s), fmt(c.rho), fmt(r.t),
                     fmt(r.lhs_norm), fmt(r.rhs_shape), fmt(r.ratio)});
        }
        const double t_max = c.t_grid.empty() ? 0.0 : *std::max_element(c.t_grid.begin(), c.t_grid.end());
        json drift = nullptr;
        json stable = nullptr;
        if (t_max > split_t) {
            const double d = rep.drift(split_t);
            drift = num_json(d);
            stable = std::isfinite(rep.sup_ratio) && d < 0.1;
        }
        reports.push_back({{"config", decay_config_json(c)},
                           {"data", rep.data},
                           {"sup_ratio", num_json(rep.sup_ratio)},
                           {"admissible", rep.admissible},
                           {"reason", rep.reason},
                           {"drift", drift},
                           {"stable", stable},
                           {"warnings", rep.warnings}});
    }
    write_table(out, "decay", tab);
    out.write("decay.json", json{{"drift_split", split_t}, {"reports", reports}}.dump(2) + "\n");
    return {{"quadrature", quad_json(base.quad)}};
}

json run_audit_bounds(const Params& p, io::OutputDir& out) {
    BoundsConfig cfg;
    if (p.str("kinds") != "all") {
        cfg.kinds.clear();
        for (const std::string& k : split(p.str("kinds"), ',')) cfg.kinds.push_back(parse_bound_kind(k));
    }
    const int m = p.integer("z-points");
    if (m < 2) throw ValidationError("z-points must be at least 2");
    const double zlo = p.num("z-min");
    const double zhi = p.num("z-max");
    if (!(zlo > 1.0) || !(zhi > zlo)) throw ValidationError("need 1 < z-min < z-max");
    cfg.z_grid = log_grid(zlo, zhi, m);
    cfg.rho_grid = p.list("rho-grid");
    cfg.exponent_grid = p.list("a-grid");
    cfg.mass_t_grid = p.grid("mass-t");
    for (double t : cfg.mass_t_grid) require_positive("mass-t", t);
    cfg.refine_factor = p.num("refine-factor");
    const int seed = p.integer("seed");
    if (seed < 0) throw ValidationError("seed must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(seed);
    cfg.validate();

    const BoundsReport rep = audit_kernel_bounds(cfg);
    io::Table tab{{"kind", "param", "z", "lhs", "rhs", "ratio", "flagged"}, {}};
    json audits = json::array();
    for (const BoundAudit& a : rep.audits) {
        for (const BoundPoint& pt : a.points) {
            tab.add({to_string(a.kind), fmt(a.param), fmt(pt.z), fmt(pt.lhs), fmt(pt.rhs), fmt(pt.ratio),
                     pt.flagged ? "1" : "0"});
        }
        audits.push_back({{"kind", to_string(a.kind)},
                          {"param", a.param},
                          {"sup_ratio", num_json(a.sup_ratio)},
                          {"finite", a.finite()},
                          {"flagged", a.flagged},
                          {"refinement_change", num_json(a.refinement_change)},
                          {"doubling_change", num_json(a.doubling_change)},
                          {"fresh_worst", num_json(a.fresh_worst)},
                          {"fresh_ok", a.fresh_ok},
                          {"stable", a.finite() && a.refinement_change < 0.01}});
    }
    write_table(out, "bounds", tab);
    io::Table mass{{"t", "k0_abs_mass"}, {}};
    for (std::size_t i = 0; i < rep.k0_mass.t.size(); ++i) mass.add({fmt(rep.k0_mass.t[i]), fmt(rep.k0_mass.mass[i])});
    write_table(out, "k0_mass", mass);
    json k0{{"constant", num_json(rep.k0_mass.constant)},
            {"refinement_change", num_json(rep.k0_mass.refinement_change)},
            {"doubling_change", num_json(rep.k0_mass.doubling_change)}};
    out.write("bounds.json", json{{"audits", audits}, {"k0_mass", k0}}.dump(2) + "\n");
    return {{"quadrature", quad_json(cfg.quad)}, {"refine_factor", cfg.refine_factor}};
}

json run_huygens(const Params& p, io::OutputDir& out) {
    const FamilySpec fs = p.family("phi1");
    const RadialOperand phi1 = make_operand(fs, 3);
    const double x = p.num("x");
    if (!(x >= 0.0)) throw ValidationError("x must be non-negative");
    const std::vector<double> ts = p.list("t-grid");
    for (double t : ts) require_positive("t-grid", t);
    const SphericalMeanCfg cfg;

    const HuygensReport rep = huygens_tail_probe(phi1, {x, 0, 0}, ts, cfg);
    io::Table tab{{"t", "u_desitter", "u_flat", "est_err", "past_front"}, {}};
    for (const HuygensRow& r : rep.rows) {
        const bool past = std::expm1(r.t) > x + phi1.support_radius;
        tab.add({fmt(r.t), fmt(r.u_desitter), fmt(r.u_flat), fmt(r.est_err), past ? "1" : "0"});
    }
    write_table(out, "huygens", tab);
    out.write("huygens.json",
              json{{"phi1", fs.str()}, {"x", x}, {"tail_max", num_json(rep.tail_max)}}.dump(2) + "\n");
    return {{"quadrature", quad_json(cfg.radial_rule)}};
}

using Handler = json (*)(const Params&, io::OutputDir&);

Handler handler_for(const std::string& sub) {
    static const std::map<std::string, Handler> h{
        {"eval-kernel", run_eval_kernel},   {"solve-1d", run_solve_1d},         {"solve-nd", run_solve_nd},
        {"compare-fd", run_compare_fd},     {"identities", run_identities},     {"audit-decay", run_audit_decay},
        {"audit-bounds", run_audit_bounds}, {"huygens", run_huygens},
    };
    return h.at(sub);
}

std::string json_param_text(const std::string& key, const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return fmt(v.get<double>());
    if (v.is_array()) {
        std::string s;
        for (const auto& e : v) {
            if (!e.is_number()) throw ValidationError("params." + key + ": array entries must be numbers");
            if (!s.empty()) s += ',';
            s += e.is_number_integer() ? std::to_string(e.get<long long>()) : fmt(e.get<double>());
        }
        return s;
    }
    throw ValidationError("params." + key + ": unsupported value type");
}

}  // namespace

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names{"eval-kernel", "solve-1d",     "solve-nd",     "compare-fd",
                                                "identities",  "audit-decay",  "audit-bounds", "huygens"};
    return names;
}

const std::vector<ParamSpec>& subcommand_params(const std::string& subcommand) {
    const auto& t = param_table();
    const auto it = t.find(subcommand);
    if (it == t.end()) throw ValidationError("unknown subcommand '" + subcommand + "'");
    return it->second;
}

ExperimentSpec ExperimentSpec::from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ValidationError("config must be a JSON object");
    ExperimentSpec spec;
    for (const auto& [key, value] : doc.items()) {
        if (key == "subcommand") {
            if (!value.is_string()) throw ValidationError("subcommand must be a string");
            spec.subcommand = value.get<std::string>();
        } else if (key == "out_dir") {
            if (!value.is_string()) throw ValidationError("out_dir must be a string");
            spec.out_dir = value.get<std::string>();
        } else if (key == "params") {
            if (!value.is_object()) throw ValidationError("params must be an object");
            for (const auto& [k, v] : value.items()) spec.params[k] = json_param_text(k, v);
        } else {
            throw ValidationError("unknown config key '" + key + "'");
        }
    }
    if (spec.subcommand.empty()) throw ValidationError("config needs a subcommand");
    return spec;
}

std::map<std::string, std::string> ExperimentSpec::resolved() const {
    const auto& specs = subcommand_params(subcommand);
    std::map<std::string, std::string> out;
    for (const auto& ps : specs) out[ps.key] = ps.default_value;
    for (const auto& [k, v] : params) {
        if (!out.count(k)) throw ValidationError(subcommand + ": unknown parameter '" + k + "'");
        out[k] = v;
    }
    return out;
}

RunResult run(const ExperimentSpec& spec) {
    const auto start = std::chrono::steady_clock::now();
    RunResult res;
    json tolerances = json::object();
    std::map<std::string, std::string> params;
    bool validated = false;
    std::unique_ptr<io::OutputDir> out;
    try {
        params = spec.resolved();
        validated = true;
        out = std::make_unique<io::OutputDir>(spec.out_dir);
        tolerances = handler_for(spec.subcommand)(Params(params), *out);
    } catch (const AccuracyError& e) {
        res.status = kAccuracy;
        std::ostringstream os;
        os << e.what() << " (best estimate " << e.best_estimate() << ", error estimate " << e.error_estimate() << ")";
        res.message = os.str();
    } catch (const CoverageError& e) {
        res.status = kAccuracy;
        res.message = e.what();
    } catch (const ValidationError& e) {
        res.status = kValidation;
        res.message = e.what();
    } catch (const SetupError& e) {
        res.status = kValidation;
        res.message = e.what();
    } catch (const UnsupportedDimension& e) {
        res.status = kValidation;
        res.message = e.what();
    } catch (const DomainError& e) {
        res.status = kValidation;
        res.message = e.what();
    } catch (const std::exception& e) {
        res.status = kFailure;
        res.message = e.what();
    }
    // no manifest when the spec itself is unusable: nothing was run
    if (!validated || !out) return res;

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json files = json::array();
    for (const auto& f : out->files()) files.push_back({{"name", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
    json manifest{{"spec", {{"subcommand", spec.subcommand}, {"params", params}, {"out_dir", spec.out_dir.string()}}},
                  {"version", kVersion},
                  {"tolerances", tolerances},
                  {"wall_time_s", wall},
                  {"status", res.status},
                  {"message", res.message},
                  {"files", files}};
    try {
        out->write("manifest.json", manifest.dump(2) + "\n");
    } catch (const std::exception& e) {
        if (res.status == kOk) res.status = kFailure;
        res.message = std::string("manifest: ") + e.what();
    }
    res.files = out->files();
    return res;
}

int main_entry(int argc, char** argv) {
    CLI::App app{"de Sitter wave equation: kernels, solvers and audits"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(0, 1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON experiment spec {subcommand, params, out_dir}")
        ->check(CLI::ExistingFile);

    std::string out_dir = "out";
    std::map<std::string, std::map<std::string, std::string>> values;
    std::map<std::string, CLI::App*> subs;
    for (const std::string& name : subcommands()) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--out-dir", out_dir, "output directory")->capture_default_str();
        for (const ParamSpec& ps : subcommand_params(name)) {
            std::string& slot = values[name][ps.key];
            if (ps.default_value == "false") {
                sub->add_flag_callback("--" + ps.key, [&slot] { slot = "true"; }, ps.help);
            } else {
                sub->add_option("--" + ps.key, slot, ps.help + " [" + ps.default_value + "]")
                    ->allow_extra_args(false);
            }
        }
        subs[name] = sub;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kValidation;
    }

    ExperimentSpec spec;
    try {
        if (!config_path.empty()) {
            if (!app.get_subcommands().empty()) throw ValidationError("--config cannot be combined with a subcommand");
            std::ifstream is(config_path);
            std::stringstream ss;
            ss << is.rdbuf();
            spec = ExperimentSpec::from_json(ss.str());
        } else {
            if (app.get_subcommands().empty()) {
                std::cerr << app.help();
                return kValidation;
            }
            spec.subcommand = app.get_subcommands().front()->get_name();
            spec.out_dir = out_dir;
            for (const auto& [k, v] : values[spec.subcommand]) {
                if (subs[spec.subcommand]->count("--" + k) > 0) spec.params[k] = v;
            }
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    }

    const RunResult res = run(spec);
    if (res.status != kOk) {
        std::cerr << "error: " << res.message << "\n";
    } else {
        for (const auto& f : res.files) std::cout << (spec.out_dir / f.name).string() << "\n";
    }
    return res.status;
}

}  // namespace desitter::cli
