#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace desitter {

using Vec3 = std::array<double, 3>;  // unused trailing components are zero for n < 3

inline double norm(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

constexpr double kUnbounded = std::numeric_limits<double>::infinity();

// Scalar field on the line with its derivative.
struct Field1D {
    std::function<double(double)> value;
    std::function<double(double)> derivative;
    double support_radius = kUnbounded;  // vanishes for |x| > support_radius

    static Field1D zero();
};

// Source term f(x,t) on the line.
struct Source1D {
    std::function<double(double, double)> value;
    double support_radius = kUnbounded;

    static Source1D zero();
};

struct CauchyData {
    Field1D phi0 = Field1D::zero();
    Field1D phi1 = Field1D::zero();
    Source1D f = Source1D::zero();

    [[nodiscard]] double support_radius() const;
};

// Field on R^n (n = 1,2,3) with gradient. When the field is radial about the
// origin the profile g(r) and g'(r) may be attached; some routines use them.
struct RadialOperand {
    int n = 3;
    std::function<double(const Vec3&)> value;
    std::function<Vec3(const Vec3&)> gradient;
    double support_radius = kUnbounded;
    std::function<double(double)> profile;        // optional
    std::function<double(double)> profile_deriv;  // optional

    [[nodiscard]] bool is_radial() const { return static_cast<bool>(profile); }
    static RadialOperand zero(int n);
};

// Source f(x,b) on R^n. Radial profile optional as above.
struct SourceND {
    int n = 3;
    std::function<double(const Vec3&, double)> value;
    std::function<Vec3(const Vec3&, double)> gradient;
    double support_radius = kUnbounded;
    std::function<double(double, double)> profile;
    std::function<double(double, double)> profile_deriv;

    [[nodiscard]] bool is_radial() const { return static_cast<bool>(profile); }
    [[nodiscard]] RadialOperand at_time(double b) const;
    static SourceND zero(int n);
};

// Named data families:
//   gaussian:k   exp(-k |x|^2), cut off where it drops below 1e-20
//   bump:R       exp(1 - 1/(1-(|x|/R)^2)) inside |x| < R, zero outside (peak 1)
//   constant:c   c everywhere (optionally constant:c:R, cut off sharply at |x| = R)
//   xgauss:k     x_1 exp(-k |x|^2)
//   zero
struct FamilySpec {
    std::string kind = "zero";
    double param = 0.0;
    double cutoff = kUnbounded;  // constant family only

    static FamilySpec parse(const std::string& text);  // throws ValidationError
    [[nodiscard]] std::string str() const;
};

Field1D make_field_1d(const FamilySpec& spec);
RadialOperand make_operand(const FamilySpec& spec, int n);
Source1D make_source_1d(const FamilySpec& spec);  // time independent
SourceND make_source_nd(const FamilySpec& spec, int n);

// Sampled solution at a fixed time.
struct SolutionField {
    enum class Geometry { Line, Radial };
    int n = 1;
    Geometry geometry = Geometry::Line;
    std::vector<double> x;  // abscissae (radii for Radial)
    std::vector<double> u;
    double t = 0.0;
    double support_lo = -kUnbounded;  // known support of u, used for coverage checks
    double support_hi = kUnbounded;
};

}  // namespace desitter
