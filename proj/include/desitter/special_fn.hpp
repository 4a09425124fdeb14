#pragma once

// Gauss hypergeometric values used by the de Sitter kernels.
//
//   F(1/2, 1/2; 1; z) = (2/pi) K(sqrt z)
//   F(-1/2, 1/2; 1; z) = (2/pi) E(sqrt z)
//   F(1/2, b; 3/2; z)   (kernel power bounds)
//   F(1/2, 3/2; 2; z)   (cancellation-free K0 bracket)
//
// All functions are pure. Arguments close to z = 1 should be passed with an
// accurately computed complement 1 - z (see HyperArg::with_complement); the
// logarithmic behaviour at z = 1 is governed by that complement.

namespace desitter::special {

struct HyperArg {
    double z = 0.0;
    double complement = 1.0;  // 1 - z, carried separately to keep digits near z = 1

    static HyperArg of(double z) { return {z, 1.0 - z}; }
    static HyperArg with_complement(double z, double one_minus_z) { return {z, one_minus_z}; }
};

struct SeriesTruncation {
    int n_max = 64;
    double tail_bound = 0.0;
};

struct SeriesValue {
    double value = 0.0;
    SeriesTruncation truncation;
    int terms_used = 0;
};

// Arithmetic-geometric mean. Throws DomainError unless a, b > 0.
double agm(double a, double b);

// F(1/2,1/2;1;z) for 0 <= z < 1 via K(k) = pi / (2 agm(1, k')).
double hyp_half(HyperArg z);
inline double hyp_half(double z) { return hyp_half(HyperArg::of(z)); }

// F(-1/2,1/2;1;z) for 0 <= z <= 1 (finite at z = 1, value 2/pi).
double hyp_minus_half(HyperArg z);
inline double hyp_minus_half(double z) { return hyp_minus_half(HyperArg::of(z)); }

// F(1/2,beta;3/2;z) for beta > 0. z = 1 is allowed only when beta < 1.
double hyp_aux(double beta, HyperArg z);
inline double hyp_aux(double beta, double z) { return hyp_aux(beta, HyperArg::of(z)); }

// d/dz F(1/2,1/2;1;z); equals 1/4 at z = 0.
double hyp_half_derivative(HyperArg z);
inline double hyp_half_derivative(double z) { return hyp_half_derivative(HyperArg::of(z)); }

// Balanced-case expansion of F(a,b;a+b;z) in powers of (1-z) and ln(1-z).
// Requires c == a + b and 0 < 1-z < 0.1; otherwise throws OutOfRegimeError.
SeriesValue hyp_log_expansion(double a, double b, double c, HyperArg z,
                              SeriesTruncation trunc = {});

// F(1/2,3/2;2;z) = 2 (F(1/2,1/2;1;z) - F(-1/2,1/2;1;z)) / z.
double hyp_kernel_h(HyperArg z);
inline double hyp_kernel_h(double z) { return hyp_kernel_h(HyperArg::of(z)); }

// Plain Gauss series sum_k (a)_k (b)_k / ((c)_k k!) z^k, truncated adaptively.
// Used as an oracle and for small arguments; |z| < 1 required.
SeriesValue hyp_series(double a, double b, double c, double z, int max_terms = 100000);

}  // namespace desitter::special
