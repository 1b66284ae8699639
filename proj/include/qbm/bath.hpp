// bath.hpp: Dissipation models: memory-function transform, response function, SRT rates

#pragma once

#include <complex>

namespace qbm {

enum class BathKind { ohmic, single_relaxation_time };

// Memory function mu(t) = (zeta/tau) e^{-t/tau} for t > 0; tau = 0 is the Ohmic
// (instantaneous friction) limit.
struct BathModel {
    BathKind kind{BathKind::ohmic};
    double zeta{1.0}; // friction constant
    double tau{0.0};  // bath relaxation time, zero iff Ohmic

    static BathModel ohmic(double zeta);
    static BathModel single_relaxation_time(double zeta, double tau);

    bool is_ohmic() const { return kind == BathKind::ohmic; }
};

// Throws ValidationError for non-positive zeta/mass or inconsistent tau, and
// UnderdampedBathError when 4 zeta tau / m >= 1.
void validate(const BathModel& model, double mass);

// Decay rates of the single-relaxation-time model: fast + slow = 1/tau and
// fast * slow = zeta / (m tau).
struct RatePair {
    double fast{0.0}; // Omega
    double slow{0.0}; // gamma
    bool near_degenerate{false}; // (fast - slow)/(fast + slow) < 1e-6
};

inline constexpr double near_degenerate_threshold = 1.0e-6;

RatePair rates(const BathModel& model, double mass);

// Fourier transform of the memory function, defined for Im z > 0 (Im z = 0 is
// accepted as the boundary value).
std::complex<double> mu_tilde(const BathModel& model, std::complex<double> z);

// alpha(z) = 1 / (-m z^2 - i z mu_tilde(z)) by direct complex evaluation.
std::complex<double> response(const BathModel& model, std::complex<double> z, double mass);

// Im alpha(omega + i0+) for omega > 0. For both models this reduces to
//   zeta / (omega [(zeta - m tau omega^2)^2 + m^2 omega^2]),
// which is strictly positive.
double response_im(const BathModel& model, double omega, double mass);

// Analytic continuation of omega -> Im alpha(omega + i0+) off the real axis.
// Singular only on the imaginary axis.
std::complex<double> response_im_continued(const BathModel& model, std::complex<double> z, double mass);

} // namespace qbm
