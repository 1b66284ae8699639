// decoherence.hpp: Attenuation coefficient, decoherence times and cat-state profiles

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qbm/dynamics.hpp"
#include "qbm/quadrature.hpp"

namespace qbm {

// Two Gaussian packets of variance sigma^2 centred at -d/2 and +d/2.
struct CatState {
    double sigma{1.0};
    double separation{10.0};

    void validate() const;
    // The interference formulas assume separation >> sigma; below 3 sigma this flags.
    bool separation_warning() const { return separation < 3.0 * sigma; }
};

// a(t) = exp(-s d^2 / (8 sigma^2 w^2)) from an already evaluated trajectory point.
double attenuation_from(const CatState& state, const TrajectoryPoint& point);

double attenuation_exact(const CatState& state, const FreeParticle& p, double t, double theta,
                         const quadrature::QuadratureConfig& cfg = {});

// exp{(t/tau0)^2 log(zeta tau / m)} for t << tau. SRT only.
double attenuation_short(const CatState& state, const FreeParticle& p, double t);

// exp{(t/tau0)^2 [log(zeta t / m) + gamma_E - 3/2]} for tau << t << m/zeta. Rejected
// when the bracket is non-negative (zeta t / m >= e^{3/2 - gamma_E}).
double attenuation_intermediate(const CatState& state, const FreeParticle& p, double t);

// tau0 = (m sigma^2 / d) sqrt(8 pi / (hbar zeta)).
double tau0(const CatState& state, const FreeParticle& p);

enum class DecoherenceMethod { root_find_exact, log_approx };

const char* to_string(DecoherenceMethod method);

struct DecoherenceReport {
    double tau0{0.0};
    double tau_d{0.0};                    // first time with a(t) = 1/e
    std::optional<double> tau_d_approx{}; // tau0 |log(zeta tau / m)|^{-1/2}; SRT only
    DecoherenceMethod method{DecoherenceMethod::root_find_exact};
    double bracket_lo{0.0};
    double bracket_hi{0.0};
    bool ordering_holds{true}; // tau_d < tau0; holds in the regime zeta tau0 / m << 1
};

// Geometric scan from 1e-6 tau0 (doubling) to the first sign change of a(t) - 1/e,
// then bisection in log t to relative width 1e-10. Throws NumericalError when no
// crossing exists below t = 1e6 m / zeta.
DecoherenceReport decoherence_time(const CatState& state, const FreeParticle& p, double theta,
                                   const quadrature::QuadratureConfig& cfg = {});

struct ProfilePoint {
    double x{0.0};
    double probability{0.0};
};

// P(x, t) for the cat state at one time; the trajectory point is evaluated once.
class InterferencePattern {
public:
    InterferencePattern(const CatState& state, const TrajectoryPoint& point);

    static InterferencePattern evaluate(const CatState& state, const FreeParticle& p, double t,
                                        double theta, const quadrature::QuadratureConfig& cfg = {});

    double probability(double x) const;

    // Ratio of the factor multiplying the cosine to twice the geometric mean of the
    // two direct packet terms, evaluated at x.
    double visibility(double x = 0.0) const;

    double attenuation() const { return attenuation_; }
    double fringe_wavenumber() const { return wavenumber_; } // C d / (4 sigma^2 w^2)
    const TrajectoryPoint& point() const { return point_; }
    const CatState& state() const { return state_; }

    // int P dx over [-(d/2 + 8w), d/2 + 8w], refined around the packet centres.
    quadrature::QuadratureResult normalization(const quadrature::QuadratureConfig& cfg = {}) const;

private:
    double log_packet(double x) const; // log P0(x, t)

    CatState state_;
    TrajectoryPoint point_;
    double attenuation_{1.0};
    double wavenumber_{0.0};
    double log_norm_{0.0}; // log of 1 / (2 (1 + e^{-d^2/8 sigma^2}))
};

std::vector<ProfilePoint> probability_profile(const CatState& state, const FreeParticle& p, double t,
                                              double theta, std::span<const double> x_grid,
                                              const quadrature::QuadratureConfig& cfg = {});

double fringe_visibility(const CatState& state, const FreeParticle& p, double t, double theta,
                         const quadrature::QuadratureConfig& cfg = {});

} // namespace qbm
