#include "desitter/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <sstream>

#include <boost/math/interpolators/makima.hpp>

#include "desitter/errors.hpp"

namespace desitter {

namespace {

using boost::math::interpolators::makima;

// Piecewise cubic through the samples, zero outside [lo, hi].
class Resampler {
public:
    Resampler(const SolutionField& f, double lo, double hi)
        : lo_(std::max(lo, f.x.front())), hi_(std::min(hi, f.x.back())),
          spline_(std::vector<double>(f.x), std::vector<double>(f.u)) {}

    double operator()(double x) const {
        if (x < lo_ || x > hi_) return 0.0;
        return spline_(x);
    }

private:
    double lo_;
    double hi_;
    makima<std::vector<double>> spline_;
};

void check_samples(const SolutionField& f) {
    if (f.x.size() < 4 || f.x.size() != f.u.size()) throw SetupError("field needs at least 4 samples");
    for (std::size_t i = 1; i < f.x.size(); ++i) {
        if (!(f.x[i] > f.x[i - 1])) throw SetupError("field abscissae must increase");
    }
}

struct FftwFree {
    void operator()(double* p) const { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<double[], FftwFree>;

FftwBuffer alloc_real(std::size_t n) { return FftwBuffer(static_cast<double*>(fftw_malloc(sizeof(double) * n))); }

void warn_mean(std::vector<std::string>* warnings, double mean, double l1) {
    // resampling alone leaves a relative mass of order 1e-7
    if (!warnings || !(std::abs(mean) > 1e-5 * l1)) return;
    std::ostringstream os;
    os << "non-zero mean " << mean << " (L1 " << l1 << "): the periodic multiplier drops it";
    warnings->push_back(os.str());
}

SolutionField line_multiplier(const SolutionField& field, double s, double L, int N,
                              std::vector<std::string>* warnings) {
    const Resampler src(field, field.support_lo, field.support_hi);
    const double h = 2.0 * L / N;
    FftwBuffer in = alloc_real(N);
    auto* out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (N / 2 + 1)));
    SolutionField res;
    res.n = 1;
    res.geometry = SolutionField::Geometry::Line;
    res.t = field.t;
    res.x.resize(N);
    double mean = 0.0;
    double l1 = 0.0;
    for (int j = 0; j < N; ++j) {
        res.x[j] = -L + h * j;
        in[j] = src(res.x[j]);
        mean += in[j] * h;
        l1 += std::abs(in[j]) * h;
    }
    warn_mean(warnings, mean, l1);
    fftw_plan fwd = fftw_plan_dft_r2c_1d(N, in.get(), out, FFTW_ESTIMATE);
    fftw_plan bwd = fftw_plan_dft_c2r_1d(N, out, in.get(), FFTW_ESTIMATE);
    fftw_execute(fwd);
    for (int k = 0; k <= N / 2; ++k) {
        const double m = k == 0 ? 0.0 : std::pow(std::numbers::pi * k / L, -2.0 * s) / N;
        out[k][0] *= m;
        out[k][1] *= m;
    }
    fftw_execute(bwd);
    res.u.assign(in.get(), in.get() + N);
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(out);
    res.support_lo = -0.5 * L;
    res.support_hi = 0.5 * L;
    return res;
}

SolutionField radial3_multiplier(const SolutionField& field, double s, double L, int N,
                                 std::vector<std::string>* warnings) {
    const Resampler src(field, 0.0, field.support_hi);
    const double h = L / (N + 1);
    FftwBuffer buf = alloc_real(N);
    double mass = 0.0;
    double l1 = 0.0;
    for (int j = 0; j < N; ++j) {
        const double r = h * (j + 1);
        const double u = src(r);
        buf[j] = r * u;
        mass += 4.0 * std::numbers::pi * r * r * u * h;
        l1 += 4.0 * std::numbers::pi * r * r * std::abs(u) * h;
    }
    warn_mean(warnings, mass, l1);
    // DST-I is its own inverse up to 2(N+1)
    fftw_plan p = fftw_plan_r2r_1d(N, buf.get(), buf.get(), FFTW_RODFT00, FFTW_ESTIMATE);
    fftw_execute(p);
    for (int k = 0; k < N; ++k) buf[k] *= std::pow(std::numbers::pi * (k + 1) / L, -2.0 * s) / (2.0 * (N + 1));
    fftw_execute(p);
    fftw_destroy_plan(p);

    SolutionField res;
    res.n = 3;
    res.geometry = SolutionField::Geometry::Radial;
    res.t = field.t;
    res.x.resize(N + 1);
    res.u.resize(N + 1);
    for (int j = 0; j < N; ++j) {
        res.x[j + 1] = h * (j + 1);
        res.u[j + 1] = buf[j] / res.x[j + 1];
    }
    // r W = a r + b r^3 near the origin
    res.x[0] = 0.0;
    res.u[0] = N >= 2 ? (8.0 * buf[0] - buf[1]) / (6.0 * h) : res.u[1];
    res.support_lo = 0.0;
    res.support_hi = 0.5 * L;
    return res;
}

// Next size with only the factors 2, 3, 5, 7.
int smooth_size(int n) {
    for (int m = std::max(n, 1);; ++m) {
        int k = m;
        for (int f : {2, 3, 5, 7}) {
            while (k % f == 0) k /= f;
        }
        if (k == 1) return m;
    }
}

}  // namespace

SolutionField frac_laplacian_neg_s(const SolutionField& field, double s, double L, int N,
                                   std::vector<std::string>* warnings) {
    if (!(s >= 0.0)) throw DomainError("frac_laplacian_neg_s: s must be non-negative");
    if (s == 0.0) return field;
    check_samples(field);
    const bool radial = field.geometry == SolutionField::Geometry::Radial;
    if (radial && field.n != 3) throw UnsupportedDimension("radial fields are handled in R^3 only");
    if (!radial && field.n != 1) throw UnsupportedDimension("line fields must have n = 1");
    const double support = std::max(std::abs(field.support_lo), std::abs(field.support_hi));
    if (!std::isfinite(support)) throw SetupError("frac_laplacian_neg_s: field support must be finite");
    if (L < 4.0 * support * (1.0 - 1e-12)) throw SetupError("frac_laplacian_neg_s: L must be at least 4x the support");
    if (N < 16) throw SetupError("frac_laplacian_neg_s: N too small");
    if (radial) {
        // the sine transform of size N runs on an FFT of size 2(N+1)
        return radial3_multiplier(field, s, L, smooth_size(N + 1) - 1, warnings);
    }
    return line_multiplier(field, s, L, N % 2 == 0 ? N : N + 1, warnings);
}

std::vector<double> frac_laplacian_periodic(const std::vector<double>& data, int n, const std::array<int, 3>& dims,
                                            double L, double s) {
    if (n < 1 || n > 3) throw UnsupportedDimension("frac_laplacian_periodic: n must be 1, 2 or 3");
    if (!(s >= 0.0)) throw DomainError("frac_laplacian_periodic: s must be non-negative");
    std::size_t total = 1;
    for (int i = 0; i < n; ++i) {
        if (dims[i] < 2) throw SetupError("frac_laplacian_periodic: each axis needs at least 2 points");
        total *= dims[i];
    }
    if (data.size() != total) throw SetupError("frac_laplacian_periodic: data size does not match dims");
    if (s == 0.0) return data;

    const int last = dims[n - 1] / 2 + 1;
    const std::size_t ctotal = total / dims[n - 1] * last;
    FftwBuffer in = alloc_real(total);
    auto* out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * ctotal));
    std::copy(data.begin(), data.end(), in.get());
    fftw_plan fwd = fftw_plan_dft_r2c(n, dims.data(), in.get(), out, FFTW_ESTIMATE);
    fftw_plan bwd = fftw_plan_dft_c2r(n, dims.data(), out, in.get(), FFTW_ESTIMATE);
    fftw_execute(fwd);

    auto wave = [&](int axis, int k) {
        const int d = dims[axis];
        const int kk = k <= d / 2 ? k : k - d;
        return std::numbers::pi * kk / L;
    };
    std::array<int, 3> cdims{1, 1, 1};
    for (int i = 0; i < n; ++i) cdims[i] = dims[i];
    cdims[n - 1] = last;
    for (std::size_t idx = 0; idx < ctotal; ++idx) {
        std::size_t rem = idx;
        double xi2 = 0.0;
        for (int i = n - 1; i >= 0; --i) {
            const int k = static_cast<int>(rem % cdims[i]);
            rem /= cdims[i];
            const double w = i == n - 1 ? std::numbers::pi * k / L : wave(i, k);
            xi2 += w * w;
        }
        const double m = xi2 == 0.0 ? 0.0 : std::pow(xi2, -s) / static_cast<double>(total);
        out[idx][0] *= m;
        out[idx][1] *= m;
    }
    fftw_execute(bwd);
    std::vector<double> res(in.get(), in.get() + total);
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(out);
    return res;
}

SolutionField project_radial_to_plane(const SolutionField& f3, const std::vector<double>& rho,
                                      const std::vector<double>& r_breaks, const QuadratureConfig& cfg,
                                      double* max_err) {
    if (f3.geometry != SolutionField::Geometry::Radial || f3.n != 3) {
        throw UnsupportedDimension("project_radial_to_plane expects a radial field in R^3");
    }
    check_samples(f3);
    const double R = std::min(f3.x.back(), f3.support_hi);
    const Resampler w(f3, 0.0, R);
    SolutionField res;
    res.n = 2;
    res.geometry = SolutionField::Geometry::Radial;
    res.t = f3.t;
    res.x = rho;
    res.u.resize(rho.size());
    res.support_lo = 0.0;
    res.support_hi = R;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        const double p = rho[i];
        if (p < 0.0) throw DomainError("project_radial_to_plane: radii must be non-negative");
        if (p >= R) {
            res.u[i] = 0.0;
            continue;
        }
        std::vector<double> br{0.0, std::sqrt((R - p) * (R + p))};
        for (double rb : r_breaks) {
            if (rb > p && rb < R) br.push_back(std::sqrt((rb - p) * (rb + p)));
        }
        std::sort(br.begin(), br.end());
        br.erase(std::unique(br.begin(), br.end()), br.end());
        auto g = [&](double y) { return 2.0 * w(std::hypot(p, y)); };
        QuadResult acc;
        for (std::size_t k = 0; k + 1 < br.size(); ++k) acc += integrate_noexcept(g, br[k], br[k + 1], cfg);
        res.u[i] = acc.value;
        if (max_err) *max_err = std::max(*max_err, acc.est_err);
    }
    return res;
}

}  // namespace desitter
