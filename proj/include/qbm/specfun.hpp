// specfun.hpp: Scaled exponential integrals, the displacement function V(x), thermal kernel

#pragma once

namespace qbm::specfun {

enum class VMethod { series, ei_identity, asymptotic };

const char* to_string(VMethod method);

struct VEval {
    double value{0.0};
    VMethod method{VMethod::series};
    double est_error{0.0}; // absolute; max of truncation bound and rounding estimate
};

// e^{-x} Ei(x) for x > 0, Ei taken as the principal value. Tends to 1/x for large x.
double ei_scaled_pos(double x);

// e^{x} E1(x) for x > 0, equivalently -e^{x} Ei(-x). Never overflows.
double e1_scaled(double x);

// V(x) = int_0^inf dy x^2 (1 - cos y) / (y (y^2 + x^2)), x >= 0.
//
// Below x = 1 the defining integral is expanded as
//   V(x) = sum_{j>=1} x^{2j} / (2j)! * (H_{2j} - log x - gamma_E),
// whose terms are all positive there. Above it the exponential-integral
// identity is used with scaled Ei/E1, and for x >= 1e3 the asymptotic series.
VEval v_function(double x);

// Leading small-x form -x^2 (log x + gamma_E - 3/2) / 2.
double v_small(double x);

// log x + gamma_E minus the first n_terms of 1/x^2, 3!/x^4, 5!/x^6 (n_terms in 0..3).
double v_asymptotic(double x, int n_terms);

// The alternating-sum representation
//   -(log x + gamma_E)(cosh x - 1) - [e^{-x} S(x) + e^{x} S(-x)] / 2,  S(x) = sum x^n/(n n!),
// summed in extended precision. Loses accuracy like e^x; meant for cross-checks with x <~ 20.
double v_printed_series(double x);

// d^order V / dx^order for order in 1..3, x > 0.
double v_derivative(double x, int order);

// coth(omega / (2 theta)) with theta = kT/hbar expressed as a rate. Exactly 1 at theta = 0;
// Laurent form 2 theta/omega + omega/(6 theta) when omega/(2 theta) < 1e-4.
double coth_kernel(double omega, double theta);

} // namespace qbm::specfun
