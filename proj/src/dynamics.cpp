// dynamics.cpp: Time-domain observables of the free Brownian particle

#include "qbm/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "qbm/constants.hpp"
#include "qbm/errors.hpp"
#include "qbm/specfun.hpp"

namespace qbm {

namespace {

void require_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw ValidationError("time must be non-negative and finite");
    }
}

double v(double x) { return specfun::v_function(x).value; }

// phi(x) = V(x)/x^2: first and third derivatives.
double phi_d1(double x) {
    return specfun::v_derivative(x, 1) / (x * x) - 2.0 * v(x) / (x * x * x);
}

double phi_d3(double x) {
    if (x < 0.05) {
        return -1.0 / (x * x * x);
    }
    const double x2 = x * x;
    return specfun::v_derivative(x, 3) / x2 - 6.0 * specfun::v_derivative(x, 2) / (x2 * x)
         + 18.0 * specfun::v_derivative(x, 1) / (x2 * x2) - 24.0 * v(x) / (x2 * x2 * x);
}

// psi(x) = (1 - e^{-x})/x^2: first and third derivatives.
double psi_d1(double x) {
    if (x < 0.05) {
        return -1.0 / (x * x) + 1.0 / 6.0 - x / 12.0 + x * x / 40.0;
    }
    const double u = -std::expm1(-x);
    return std::exp(-x) / (x * x) - 2.0 * u / (x * x * x);
}

double psi_d3(double x) {
    if (x < 0.05) {
        return -6.0 / (x * x * x * x) + 0.05;
    }
    const double u = -std::expm1(-x);
    const double e = std::exp(-x);
    const double x2 = x * x;
    return e / x2 + 6.0 * e / (x2 * x) + 18.0 * e / (x2 * x2) - 24.0 * u / (x2 * x2 * x);
}

// Omega^2 gamma^2 [g(gamma) - g(Omega)] / (Omega^2 - gamma^2) for g(b) = t^2 f(b t), expanded
// about the mean rate a = (Omega + gamma)/2 to second order in delta = (Omega - gamma)/(Omega + gamma).
template <class D1, class D3>
double degenerate_combination(const RatePair& r, double t, D1 d1, D3 d3) {
    const double a = 0.5 * (r.fast + r.slow);
    const double delta = (r.fast - r.slow) / (r.fast + r.slow);
    const double x = a * t;
    const double t3 = t * t * t;
    const double derivative = t3 * d1(x) + t3 * t * t * d3(x) * a * a * delta * delta / 6.0;
    const double product = r.fast * r.fast * r.slow * r.slow;
    return -product / (2.0 * a) * derivative;
}

} // namespace

void FreeParticle::validate() const {
    qbm::validate(bath, mass);
    if (!(hbar > 0.0) || !std::isfinite(hbar)) {
        throw ValidationError("hbar must be positive");
    }
}

double msd_zero_t(const FreeParticle& p, double t) {
    p.validate();
    require_time(t);
    const double prefactor = 2.0 * p.hbar / (pi * p.bath.zeta);
    if (t == 0.0) {
        return 0.0;
    }
    if (p.bath.is_ohmic()) {
        return prefactor * v(p.bath.zeta * t / p.mass);
    }
    const RatePair r = rates(p.bath, p.mass);
    if (r.near_degenerate) {
        return prefactor * degenerate_combination(r, t, phi_d1, phi_d3);
    }
    const double ratio2 = (r.slow / r.fast) * (r.slow / r.fast);
    return prefactor * (v(r.slow * t) - ratio2 * v(r.fast * t)) / (1.0 - ratio2);
}

quadrature::QuadratureResult msd_finite_t(const FreeParticle& p, double t, double theta,
                                          const quadrature::QuadratureConfig& cfg) {
    p.validate();
    auto result = quadrature::integrate_fluctuation(p.bath, p.mass, t, theta,
                                                    quadrature::Kernel::one_minus_cos, cfg);
    const double scale = 2.0 * p.hbar / pi;
    result.value *= scale;
    result.est_error *= scale;
    result.tail_bound *= scale;
    return result;
}

double msd(const FreeParticle& p, double t, double theta, const quadrature::QuadratureConfig& cfg) {
    if (!(theta >= 0.0) || !std::isfinite(theta)) {
        throw ValidationError("temperature must be non-negative");
    }
    if (theta == 0.0) {
        return msd_zero_t(p, t);
    }
    const auto result = msd_finite_t(p, t, theta, cfg);
    if (!result.converged) {
        std::ostringstream msg;
        msg << "mean-square displacement quadrature did not converge at t = " << t
            << " (value " << result.value << ", error budget " << result.error_budget() << ")";
        throw NumericalError(msg.str());
    }
    return result.value;
}

double commutator_magnitude(const FreeParticle& p, double t) {
    p.validate();
    require_time(t);
    const double prefactor = p.hbar / p.bath.zeta;
    if (t == 0.0) {
        return 0.0;
    }
    if (p.bath.is_ohmic()) {
        return -prefactor * std::expm1(-p.bath.zeta * t / p.mass);
    }
    const RatePair r = rates(p.bath, p.mass);
    if (r.near_degenerate) {
        return prefactor * degenerate_combination(r, t, psi_d1, psi_d3);
    }
    const double ratio2 = (r.slow / r.fast) * (r.slow / r.fast);
    const double slow_part = -std::expm1(-r.slow * t);
    const double fast_part = -std::expm1(-r.fast * t);
    return prefactor * (slow_part - ratio2 * fast_part) / (1.0 - ratio2);
}

quadrature::QuadratureResult commutator_quadrature(const FreeParticle& p, double t,
                                                   const quadrature::QuadratureConfig& cfg) {
    p.validate();
    auto result = quadrature::integrate_fluctuation(p.bath, p.mass, t, 0.0, quadrature::Kernel::sin, cfg);
    const double scale = 2.0 * p.hbar / pi;
    result.value *= scale;
    result.est_error *= scale;
    result.tail_bound *= scale;
    return result;
}

double packet_variance(const FreeParticle& p, double t, double sigma, double theta,
                       const quadrature::QuadratureConfig& cfg) {
    return trajectory_point(p, t, sigma, theta, cfg).w2;
}

TrajectoryPoint trajectory_point(const FreeParticle& p, double t, double sigma, double theta,
                                 const quadrature::QuadratureConfig& cfg) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw ValidationError("packet width sigma must be positive");
    }
    TrajectoryPoint point;
    point.t = t;
    point.s = msd(p, t, theta, cfg);
    point.C = commutator_magnitude(p, t);
    const double sigma2 = sigma * sigma;
    point.w2 = sigma2 + point.C * point.C / (4.0 * sigma2) + point.s;
    return point;
}

double mean_square_velocity(const FreeParticle& p) {
    p.validate();
    if (p.bath.is_ohmic()) {
        throw ValidationError("mean square velocity is logarithmically divergent for an Ohmic bath; "
                              "a cutoff model (tau > 0) is required");
    }
    const RatePair r = rates(p.bath, p.mass);
    const double difference = std::sqrt(1.0 - 4.0 * p.bath.zeta * p.bath.tau / p.mass) / p.bath.tau;
    // log(Omega/gamma) / (Omega - gamma), stable as the rates merge.
    const double log_ratio = std::log1p(difference / r.slow) / difference;
    return p.hbar * r.slow * r.fast * log_ratio / (pi * p.mass);
}

double mean_square_velocity_log_approx(const FreeParticle& p) {
    p.validate();
    if (p.bath.is_ohmic()) {
        throw ValidationError("mean square velocity approximation requires tau > 0");
    }
    const double m = p.mass;
    return -(p.hbar * p.bath.zeta / (pi * m * m)) * std::log(p.bath.zeta * p.bath.tau / m);
}

double msd_short_time(const FreeParticle& p, double t) {
    require_time(t);
    return mean_square_velocity(p) * t * t;
}

double msd_intermediate(const FreeParticle& p, double t) {
    p.validate();
    require_time(t);
    if (t == 0.0) {
        return 0.0;
    }
    const double m = p.mass;
    const double rate = p.bath.zeta / m;
    return -(p.hbar * p.bath.zeta / (pi * m * m)) * t * t * (std::log(rate * t) + euler_gamma - 1.5);
}

} // namespace qbm
