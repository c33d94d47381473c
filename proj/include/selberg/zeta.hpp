// Analytic layer: the smoothed explicit-formula sum phi_s(x), the
// sigma > 1 Dirichlet series of Z'/Z, the exact mean square integral with
// diagonal/off-diagonal split, the constant C(sigma), and prime geodesic
// counting against li(x).
#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "selberg/spectrum.hpp"

namespace selberg::zeta {

struct EvalPoint {
    double sigma = 0.0;  // real part of s
    double t = 0.0;      // imaginary part of s
    double x = 0.0;      // smoothing cutoff, > 0
};

// Cutoff X = x^{1/2} + x^{-1/2}.
double cutoff_X(double x);

// phi_s(x) = sum_{3 <= n < X} m(n) LambdaBar(n,x) eps(n)^{-2s}.
// Requires the table to cover X(x); the empty sum is 0.
std::complex<double> phi(const EvalPoint& p, const spectrum::SpectrumTable& table);

struct LogDerivResult {
    std::complex<double> value;
    double tail_bound = 0.0;  // heuristic envelope tail beyond the table
};

// Truncated Z'/Z(s) = sum_n m(n) LambdaBar(n) eps(n)^{-2s}, sigma > 1 only.
LogDerivResult log_deriv_series(double sigma, double t, const spectrum::SpectrumTable& table);

struct SquareIntegralResult {
    double mean = 0.0;         // diagonal + offdiagonal, exactly as summed
    double diagonal = 0.0;     // ((T-1)/T) sum m^2 LambdaBar(n,x)^2 eps^{-4 sigma}
    double offdiagonal = 0.0;  // closed-form cross terms, signed
    double T = 0.0;
    double x = 0.0;
    double sigma = 0.0;
};

// Exact (1/T) int_1^T |phi_{sigma+it}(x)|^2 dt via the closed-form
// pairwise integrals.  Deterministic for any thread count.
SquareIntegralResult square_integral_mean(double sigma, double T, double x,
                                          const spectrum::SpectrumTable& table,
                                          int threads = 1);

struct CConstResult {
    double partial = 0.0;     // sum_{3 <= n <= N} m^2 LambdaBar(n)^2 eps^{-4 sigma}
    double tail_bound = 0.0;  // heuristic (fitted multiplicity envelope); may be inf
    double envelope_coeff = 0.0;  // fitted C with m(n) <= C n^1.15 over the table
};

// Partial sum of C(sigma) = sum m(n)^2 LambdaBar(n)^2 eps(n)^{-4 sigma}.
// Requires sigma > 3/4 and N >= 3.
CConstResult c_constant(double sigma, const spectrum::WeightMode& w, long long N,
                        int threads = 1);
CConstResult c_constant(double sigma, const spectrum::SpectrumTable& table, long long N);

// #{primitive classes with norm < x} = sum over traces n < X of the j = 1
// components' lambda(D) h(D).  Requires x > 4.
double prime_geodesic_count(double x, const spectrum::WeightMode& w);
double prime_geodesic_count(double x, const spectrum::SpectrumTable& table);

// int_2^x dt/log t, absolute error <= 1e-8.  Requires x >= 2.
double li(double x);

// Least-squares slope of log mean-square against log T over the given Ts,
// with x = x_rule(T).  Requires at least three distinct T values.
double growth_exponent(double sigma, const std::vector<double>& Ts,
                       const std::function<double(double)>& x_rule,
                       const spectrum::SpectrumTable& table, int threads = 1);

// Default x rule, x = T^3.
double default_x_rule(double T);

// Least-squares slope of y against x (shared with the envelope fits).
double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace selberg::zeta
