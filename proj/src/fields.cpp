#include "desitter/fields.hpp"

#include <cmath>
#include <sstream>

#include "desitter/errors.hpp"

namespace desitter {

namespace {

// Gaussians are cut off where exp(-k r^2) drops below ~1e-20 so that every
// family has a finite support; the jump is far below any tolerance in use.
constexpr double kGaussTail = 46.0;
double gaussian_cutoff(double k) { return std::sqrt(kGaussTail / k); }

// Radial profile g(r) and g'(r) of a family.
struct Profile {
    std::function<double(double)> g;
    std::function<double(double)> dg;
    double support = kUnbounded;
};

Profile radial_profile(const FamilySpec& s) {
    const double p = s.param;
    if (s.kind == "gaussian") {
        const double R = gaussian_cutoff(p);
        return {[p, R](double r) { return std::abs(r) <= R ? std::exp(-p * r * r) : 0.0; },
                [p, R](double r) { return std::abs(r) <= R ? -2.0 * p * r * std::exp(-p * r * r) : 0.0; }, R};
    }
    if (s.kind == "bump") {
        auto g = [p](double r) {
            const double q = r / p;
            if (std::abs(q) >= 1.0) return 0.0;
            return std::exp(1.0 - 1.0 / (1.0 - q * q));
        };
        auto dg = [p, g](double r) {
            const double q = r / p;
            if (std::abs(q) >= 1.0) return 0.0;
            const double d = 1.0 - q * q;
            return g(r) * (-2.0 * q / (d * d)) / p;
        };
        return {g, dg, p};
    }
    if (s.kind == "constant") {
        const double R = s.cutoff;
        return {[p, R](double r) { return std::abs(r) <= R ? p : 0.0; }, [](double) { return 0.0; }, R};
    }
    if (s.kind == "zero") return {[](double) { return 0.0; }, [](double) { return 0.0; }, 0.0};
    throw ValidationError("family '" + s.kind + "' has no radial profile");
}

}  // namespace

Field1D Field1D::zero() {
    return {[](double) { return 0.0; }, [](double) { return 0.0; }, 0.0};
}

Source1D Source1D::zero() {
    return {[](double, double) { return 0.0; }, 0.0};
}

double CauchyData::support_radius() const {
    return std::max({phi0.support_radius, phi1.support_radius, f.support_radius});
}

RadialOperand RadialOperand::zero(int n) {
    RadialOperand op;
    op.n = n;
    op.value = [](const Vec3&) { return 0.0; };
    op.gradient = [](const Vec3&) { return Vec3{0, 0, 0}; };
    op.support_radius = 0.0;
    op.profile = [](double) { return 0.0; };
    op.profile_deriv = [](double) { return 0.0; };
    return op;
}

RadialOperand SourceND::at_time(double b) const {
    RadialOperand op;
    op.n = n;
    auto v = value;
    auto g = gradient;
    op.value = [v, b](const Vec3& x) { return v(x, b); };
    op.gradient = [g, b](const Vec3& x) { return g(x, b); };
    op.support_radius = support_radius;
    if (profile) {
        auto p = profile;
        auto dp = profile_deriv;
        op.profile = [p, b](double r) { return p(r, b); };
        op.profile_deriv = [dp, b](double r) { return dp(r, b); };
    }
    return op;
}

SourceND SourceND::zero(int n) {
    SourceND s;
    s.n = n;
    s.value = [](const Vec3&, double) { return 0.0; };
    s.gradient = [](const Vec3&, double) { return Vec3{0, 0, 0}; };
    s.support_radius = 0.0;
    s.profile = [](double, double) { return 0.0; };
    s.profile_deriv = [](double, double) { return 0.0; };
    return s;
}

FamilySpec FamilySpec::parse(const std::string& text) {
    FamilySpec s;
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.empty()) throw ValidationError("empty data family");
    s.kind = parts[0];
    auto num = [&](std::size_t i) {
        try {
            std::size_t used = 0;
            const double v = std::stod(parts.at(i), &used);
            if (used != parts[i].size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            throw ValidationError("bad numeric parameter in family '" + text + "'");
        }
    };
    if (s.kind == "zero") {
        if (parts.size() != 1) throw ValidationError("zero takes no parameter");
        return s;
    }
    if (s.kind == "gaussian" || s.kind == "bump" || s.kind == "xgauss") {
        if (parts.size() != 2) throw ValidationError(s.kind + " needs exactly one parameter");
        s.param = num(1);
        if (!(s.param > 0.0)) throw ValidationError(s.kind + " parameter must be positive");
        return s;
    }
    if (s.kind == "constant") {
        if (parts.size() < 2 || parts.size() > 3) throw ValidationError("constant:c[:R]");
        s.param = num(1);
        if (parts.size() == 3) {
            s.cutoff = num(2);
            if (!(s.cutoff > 0.0)) throw ValidationError("constant cutoff must be positive");
        }
        return s;
    }
    throw ValidationError("unknown data family '" + s.kind + "'");
}

std::string FamilySpec::str() const {
    std::ostringstream os;
    os << kind;
    if (kind != "zero") os << ':' << param;
    if (kind == "constant" && std::isfinite(cutoff)) os << ':' << cutoff;
    return os.str();
}

Field1D make_field_1d(const FamilySpec& s) {
    if (s.kind == "xgauss") {
        const double k = s.param;
        const double R = gaussian_cutoff(k);
        return {[k, R](double x) { return std::abs(x) <= R ? x * std::exp(-k * x * x) : 0.0; },
                [k, R](double x) { return std::abs(x) <= R ? (1.0 - 2.0 * k * x * x) * std::exp(-k * x * x) : 0.0; },
                R};
    }
    Profile p = radial_profile(s);
    auto g = p.g;
    auto dg = p.dg;
    return {g, dg, p.support};
}

RadialOperand make_operand(const FamilySpec& s, int n) {
    if (n < 1 || n > 3) throw UnsupportedDimension("dimension must be 1, 2 or 3");
    RadialOperand op;
    op.n = n;
    if (s.kind == "xgauss") {
        const double k = s.param;
        const double R = gaussian_cutoff(k);
        op.value = [k, R](const Vec3& x) { return norm(x) <= R ? x[0] * std::exp(-k * dot(x, x)) : 0.0; };
        op.gradient = [k, R](const Vec3& x) {
            const double e = norm(x) <= R ? std::exp(-k * dot(x, x)) : 0.0;
            return Vec3{e * (1.0 - 2.0 * k * x[0] * x[0]), -2.0 * k * x[0] * x[1] * e,
                        -2.0 * k * x[0] * x[2] * e};
        };
        op.support_radius = R;
        return op;
    }
    Profile p = radial_profile(s);
    auto g = p.g;
    auto dg = p.dg;
    op.value = [g](const Vec3& x) { return g(norm(x)); };
    op.gradient = [dg](const Vec3& x) {
        const double r = norm(x);
        if (r == 0.0) return Vec3{0, 0, 0};
        const double c = dg(r) / r;
        return Vec3{c * x[0], c * x[1], c * x[2]};
    };
    op.support_radius = p.support;
    op.profile = g;
    op.profile_deriv = dg;
    return op;
}

Source1D make_source_1d(const FamilySpec& s) {
    Field1D f = make_field_1d(s);
    auto v = f.value;
    return {[v](double x, double) { return v(x); }, f.support_radius};
}

SourceND make_source_nd(const FamilySpec& s, int n) {
    RadialOperand op = make_operand(s, n);
    SourceND src;
    src.n = n;
    auto v = op.value;
    auto g = op.gradient;
    src.value = [v](const Vec3& x, double) { return v(x); };
    src.gradient = [g](const Vec3& x, double) { return g(x); };
    src.support_radius = op.support_radius;
    if (op.profile) {
        auto p = op.profile;
        auto dp = op.profile_deriv;
        src.profile = [p](double r, double) { return p(r); };
        src.profile_deriv = [dp](double r, double) { return dp(r); };
    }
    return src;
}

}  // namespace desitter
