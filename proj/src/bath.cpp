// bath.cpp: Dissipation models

#include "qbm/bath.hpp"

#include <cmath>

#include "qbm/errors.hpp"

namespace qbm {

namespace {

void require_zeta(double zeta) {
    if (!(zeta > 0.0) || !std::isfinite(zeta)) {
        throw ValidationError("friction constant zeta must be positive");
    }
}

} // namespace

BathModel BathModel::ohmic(double zeta) {
    require_zeta(zeta);
    return {BathKind::ohmic, zeta, 0.0};
}

BathModel BathModel::single_relaxation_time(double zeta, double tau) {
    require_zeta(zeta);
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw ValidationError("single-relaxation-time bath requires tau > 0");
    }
    return {BathKind::single_relaxation_time, zeta, tau};
}

void validate(const BathModel& model, double mass) {
    if (!(mass > 0.0) || !std::isfinite(mass)) {
        throw ValidationError("mass must be positive");
    }
    require_zeta(model.zeta);
    if (model.is_ohmic()) {
        if (model.tau != 0.0) {
            throw ValidationError("Ohmic bath must have tau = 0");
        }
        return;
    }
    if (!(model.tau > 0.0) || !std::isfinite(model.tau)) {
        throw ValidationError("single-relaxation-time bath requires tau > 0");
    }
    if (4.0 * model.zeta * model.tau / mass >= 1.0) {
        throw UnderdampedBathError();
    }
}

RatePair rates(const BathModel& model, double mass) {
    if (model.is_ohmic()) {
        throw ValidationError("rates: defined for the single-relaxation-time model only");
    }
    validate(model, mass);
    const double disc = std::sqrt(1.0 - 4.0 * model.zeta * model.tau / mass);
    RatePair r;
    r.fast = (1.0 + disc) / (2.0 * model.tau);
    // gamma = zeta / (m tau Omega).
    r.slow = model.zeta / (mass * model.tau * r.fast);
    r.near_degenerate = disc < near_degenerate_threshold;
    return r;
}

std::complex<double> mu_tilde(const BathModel& model, std::complex<double> z) {
    if (z.imag() < 0.0) {
        throw ValidationError("mu_tilde: requires Im z >= 0");
    }
    if (model.is_ohmic()) {
        return model.zeta;
    }
    const std::complex<double> i{0.0, 1.0};
    return model.zeta / (1.0 - i * z * model.tau);
}

std::complex<double> response(const BathModel& model, std::complex<double> z, double mass) {
    const std::complex<double> i{0.0, 1.0};
    return 1.0 / (-mass * z * z - i * z * mu_tilde(model, z));
}

double response_im(const BathModel& model, double omega, double mass) {
    if (!(omega > 0.0)) {
        throw ValidationError("response_im: omega must be positive");
    }
    const double w2 = omega * omega;
    const double even = model.zeta - mass * model.tau * w2;
    return model.zeta / (omega * (even * even + mass * mass * w2));
}

std::complex<double> response_im_continued(const BathModel& model, std::complex<double> z, double mass) {
    const std::complex<double> z2 = z * z;
    const std::complex<double> even = model.zeta - mass * model.tau * z2;
    return model.zeta / (z * (even * even + mass * mass * z2));
}

} // namespace qbm
