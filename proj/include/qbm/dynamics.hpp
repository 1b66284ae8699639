// dynamics.hpp: Mean-square displacement, commutator, packet variance and regime laws

#pragma once

#include "qbm/bath.hpp"
#include "qbm/quadrature.hpp"

namespace qbm {

// Free particle coupled to a bath. Any consistent unit system works; the CLI
// uses reduced units with m = zeta = sigma = 1, where hbar becomes hbar/(zeta sigma^2).
struct FreeParticle {
    BathModel bath{};
    double mass{1.0};
    double hbar{1.0};

    void validate() const;
};

// The commutator is purely imaginary, [x(0), x(t)] = i C(t); C is stored as a real number.
struct TrajectoryPoint {
    double t{0.0};
    double s{0.0};  // mean-square displacement <(x(t) - x(0))^2>
    double C{0.0};  // commutator magnitude
    double w2{0.0}; // single-packet variance
};

// Zero-temperature s(t) in closed form:
//   SRT:   (2 hbar / pi zeta) [Omega^2 V(gamma t) - gamma^2 V(Omega t)] / (Omega^2 - gamma^2)
//   Ohmic: (2 hbar / pi zeta) V(zeta t / m)
// Near-degenerate rates switch to a second-order expansion in (Omega - gamma)/(Omega + gamma).
double msd_zero_t(const FreeParticle& p, double t);

// s(t) at temperature theta = kT/hbar (a rate) from the fluctuation integral.
quadrature::QuadratureResult msd_finite_t(const FreeParticle& p, double t, double theta,
                                          const quadrature::QuadratureConfig& cfg = {});

// Closed form at theta = 0, quadrature otherwise. Throws NumericalError if the
// quadrature misses its tolerance.
double msd(const FreeParticle& p, double t, double theta, const quadrature::QuadratureConfig& cfg = {});

// C(t); temperature independent, C(0) = 0, C(inf) = hbar / zeta.
double commutator_magnitude(const FreeParticle& p, double t);

// (2 hbar / pi) x the sine-kernel fluctuation integral; the quadrature route to C(t).
quadrature::QuadratureResult commutator_quadrature(const FreeParticle& p, double t,
                                                   const quadrature::QuadratureConfig& cfg = {});

// w^2 = sigma^2 + C^2 / (4 sigma^2) + s.
double packet_variance(const FreeParticle& p, double t, double sigma, double theta,
                       const quadrature::QuadratureConfig& cfg = {});

TrajectoryPoint trajectory_point(const FreeParticle& p, double t, double sigma, double theta,
                                 const quadrature::QuadratureConfig& cfg = {});

// <v^2> = hbar gamma Omega log(Omega/gamma) / (pi m (Omega - gamma)) at zero temperature.
// Ohmic baths are rejected: the result diverges logarithmically without a cutoff.
double mean_square_velocity(const FreeParticle& p);

// -(hbar zeta / pi m^2) log(zeta tau / m), the tau -> 0 form of the above.
double mean_square_velocity_log_approx(const FreeParticle& p);

// <v^2> t^2, valid for t << tau.
double msd_short_time(const FreeParticle& p, double t);

// -(hbar zeta / pi m^2) t^2 [log(zeta t / m) + gamma_E - 3/2], valid for tau << t << m / zeta.
double msd_intermediate(const FreeParticle& p, double t);

} // namespace qbm
