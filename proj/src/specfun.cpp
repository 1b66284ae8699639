// specfun.cpp: Scaled exponential integrals and V(x)

#include "qbm/specfun.hpp"

#include <cmath>
#include <limits>

#include "qbm/constants.hpp"
#include "qbm/errors.hpp"

namespace qbm::specfun {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();
constexpr double v_series_limit = 1.0;
constexpr double v_asymptotic_limit = 1.0e3;
constexpr double ei_series_limit = 40.0;

void require_positive(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw ValidationError(std::string(what) + ": argument must be positive and finite");
    }
}

// Sum x^n / (n n!) for n >= 1; all terms positive for x > 0.
double ei_power_sum(double x) {
    double power = 1.0;
    double sum = 0.0;
    for (int n = 1; n < 500; ++n) {
        power *= x / n;
        const double term = power / n;
        sum += term;
        if (term < eps * 0.25 * sum) {
            break;
        }
    }
    return sum;
}

// (1/x) sum_k k!/x^k, truncated at the smallest term.
double ei_scaled_asymptotic(double x) {
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double next = term * k / x;
        if (next > term) {
            break;
        }
        term = next;
        sum += term;
        if (term < eps * 0.25 * sum) {
            break;
        }
    }
    return sum / x;
}

// e^x E1(x) by continued fraction (modified Lentz), x > 1.
double e1_scaled_continued_fraction(double x) {
    constexpr double tiny = 1.0e-300;
    double b = x + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        const double delta = c * d;
        h *= delta;
        if (std::abs(delta - 1.0) < eps) {
            break;
        }
    }
    return h;
}

VEval v_harmonic_series(double x) {
    const double log_shift = std::log(x) + euler_gamma;
    const double x2 = x * x;
    double power = 1.0;    // x^{2j} / (2j)!
    double harmonic = 0.0; // H_{2j}
    double sum = 0.0;
    double last = 0.0;
    for (int j = 1; j < 100; ++j) {
        const int n = 2 * j;
        power *= x2 / ((n - 1.0) * n);
        harmonic += 1.0 / (n - 1) + 1.0 / n;
        last = power * (harmonic - log_shift);
        sum += last;
        if (std::abs(last) < eps * 0.1 * std::abs(sum)) {
            break;
        }
    }
    const double bound = std::max(2.0 * std::abs(last), 4.0 * eps * std::abs(sum));
    return {sum, VMethod::series, bound};
}

VEval v_ei_identity(double x) {
    const double log_shift = std::log(x) + euler_gamma;
    const double ei_part = ei_scaled_pos(x);
    const double e1_part = e1_scaled(x);
    const double value = log_shift - 0.5 * (ei_part - e1_part);
    const double scale = std::abs(log_shift) + 0.5 * (std::abs(ei_part) + std::abs(e1_part));
    return {value, VMethod::ei_identity, 8.0 * eps * scale};
}

VEval v_asymptotic_series(double x) {
    // log x + gamma_E - sum_{k odd} k!/x^{k+1}
    const double inv2 = 1.0 / (x * x);
    double term = inv2; // 1!/x^2
    double sum = 0.0;
    int k = 1;
    while (k < 200) {
        sum += term;
        const double next = term * (k + 1.0) * (k + 2.0) * inv2;
        if (next > term || next < eps * 0.01 * sum) {
            term = next;
            break;
        }
        term = next;
        k += 2;
    }
    const double value = std::log(x) + euler_gamma - sum;
    return {value, VMethod::asymptotic, std::max(term, 4.0 * eps * std::abs(value))};
}

// k-th derivative (k <= 3) of the harmonic series for V.
double v_derivative_series(double x, int order) {
    const double log_x = std::log(x);
    double sum = 0.0;
    double harmonic = 0.0;
    double inv_factorial = 1.0; // 1/(2j - order)! once 2j >= order
    for (int j = 1; j < 100; ++j) {
        const int n = 2 * j;
        harmonic += 1.0 / (n - 1) + 1.0 / n;
        double term = 0.0;
        if (n < order) {
            // Only n = 2, order = 3: third derivative of x^2 (a - log x) / 2.
            term = -1.0 / x;
        } else {
            inv_factorial = 1.0;
            for (int i = 2; i <= n - order; ++i) {
                inv_factorial /= i;
            }
            double shift = harmonic - euler_gamma;
            for (int i = 0; i < order; ++i) {
                shift -= 1.0 / (n - i);
            }
            term = inv_factorial * std::pow(x, n - order) * (shift - log_x);
        }
        sum += term;
        if (n > order + 2 && std::abs(term) < eps * 0.1 * std::abs(sum)) {
            break;
        }
    }
    return sum;
}

double v_derivative_asymptotic(double x, int order) {
    // d^m/dx^m of log x is (-1)^{m-1} (m-1)!/x^m.
    double log_part = 1.0 / x;
    for (int i = 1; i < order; ++i) {
        log_part *= -static_cast<double>(i) / x;
    }
    double sum = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 200; k += 2) {
        // k! (k+1)(k+2)...(k+order) / x^{k+1+order}
        double magnitude = std::pow(x, -(k + 1 + order));
        for (int i = 2; i <= k; ++i) {
            magnitude *= i;
        }
        for (int i = 1; i <= order; ++i) {
            magnitude *= (k + i);
        }
        if (magnitude > prev || magnitude < eps * 1e-3 * std::abs(log_part)) {
            break;
        }
        prev = magnitude;
        sum += (order % 2 == 0 ? 1.0 : -1.0) * magnitude;
    }
    return log_part - sum;
}

} // namespace

const char* to_string(VMethod method) {
    switch (method) {
    case VMethod::series: return "series";
    case VMethod::ei_identity: return "ei_identity";
    case VMethod::asymptotic: return "asymptotic";
    }
    return "unknown";
}

double ei_scaled_pos(double x) {
    require_positive(x, "ei_scaled_pos");
    if (x <= ei_series_limit) {
        return std::exp(-x) * (euler_gamma + std::log(x) + ei_power_sum(x));
    }
    return ei_scaled_asymptotic(x);
}

double e1_scaled(double x) {
    require_positive(x, "e1_scaled");
    if (x <= 1.0) {
        double power = 1.0;
        double sum = 0.0;
        for (int n = 1; n < 100; ++n) {
            power *= -x / n;
            const double term = power / n;
            sum += term;
            if (std::abs(term) < eps * 0.25 * std::abs(sum)) {
                break;
            }
        }
        return std::exp(x) * (-euler_gamma - std::log(x) - sum);
    }
    return e1_scaled_continued_fraction(x);
}

VEval v_function(double x) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw ValidationError("v_function: argument must be non-negative and finite");
    }
    if (x == 0.0) {
        return {0.0, VMethod::series, 0.0};
    }
    if (x < v_series_limit) {
        return v_harmonic_series(x);
    }
    if (x < v_asymptotic_limit) {
        return v_ei_identity(x);
    }
    return v_asymptotic_series(x);
}

double v_small(double x) {
    require_positive(x, "v_small");
    return -0.5 * x * x * (std::log(x) + euler_gamma - 1.5);
}

double v_asymptotic(double x, int n_terms) {
    require_positive(x, "v_asymptotic");
    if (n_terms < 0 || n_terms > 3) {
        throw ValidationError("v_asymptotic: n_terms must be in 0..3");
    }
    const double inv2 = 1.0 / (x * x);
    const double corrections[3] = {inv2, 6.0 * inv2 * inv2, 120.0 * inv2 * inv2 * inv2};
    double value = std::log(x) + euler_gamma;
    for (int i = 0; i < n_terms; ++i) {
        value -= corrections[i];
    }
    return value;
}

double v_printed_series(double x) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw ValidationError("v_printed_series: argument must be non-negative and finite");
    }
    if (x == 0.0) {
        return 0.0;
    }
    using ext = long double;
    const ext xl = x;
    ext power_plus = 1.0L;
    ext power_minus = 1.0L;
    ext sum_plus = 0.0L;
    ext sum_minus = 0.0L;
    for (int n = 1; n < 2000; ++n) {
        power_plus *= xl / n;
        power_minus *= -xl / n;
        sum_plus += power_plus / n;
        sum_minus += power_minus / n;
        if (n > xl && power_plus / n < 1e-22L * sum_plus) {
            break;
        }
    }
    const ext log_shift = std::log(xl) + static_cast<ext>(euler_gamma);
    const ext value = -log_shift * (std::cosh(xl) - 1.0L)
                    - 0.5L * (std::exp(-xl) * sum_plus + std::exp(xl) * sum_minus);
    return static_cast<double>(value);
}

double v_derivative(double x, int order) {
    require_positive(x, "v_derivative");
    if (order < 1 || order > 3) {
        throw ValidationError("v_derivative: order must be 1, 2 or 3");
    }
    if (x < v_series_limit) {
        return v_derivative_series(x, order);
    }
    if (x >= v_asymptotic_limit) {
        return v_derivative_asymptotic(x, order);
    }
    const double ei_part = ei_scaled_pos(x);
    const double e1_part = e1_scaled(x);
    switch (order) {
    case 1: return 0.5 * (ei_part + e1_part);
    case 2: return 0.5 * (e1_part - ei_part);
    default: return 0.5 * (ei_part + e1_part) - 1.0 / x;
    }
}

double coth_kernel(double omega, double theta) {
    if (!(omega > 0.0)) {
        throw ValidationError("coth_kernel: omega must be positive");
    }
    if (theta < 0.0) {
        throw ValidationError("coth_kernel: theta must be non-negative");
    }
    if (theta == 0.0) {
        return 1.0;
    }
    const double arg = omega / (2.0 * theta);
    if (arg < 1.0e-4) {
        return 1.0 / arg + arg / 3.0;
    }
    return 1.0 / std::tanh(arg);
}

} // namespace qbm::specfun
