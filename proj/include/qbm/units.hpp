// units.hpp: SI parameter ingestion and reduction to dimensionless units

#pragma once

#include <string_view>

#include <json.hpp>

#include "qbm/decoherence.hpp"
#include "qbm/dynamics.hpp"

namespace qbm::units {

struct PhysicalParams {
    double mass_kg{0.0};
    double zeta{0.0};          // friction constant, kg/s
    double tau_s{0.0};         // bath relaxation time; 0 selects the Ohmic model
    double sigma_m{0.0};       // initial packet width
    double d_m{0.0};           // packet separation
    double temperature_K{0.0};
};

// Dimensionless groups for time unit m/zeta, length unit sigma and mass unit m.
// In these units hbar becomes kappa and kT/hbar becomes theta.
struct ReducedParams {
    double tau_hat{0.0};      // zeta tau / m
    double d_hat{0.0};        // d / sigma
    double kappa{0.0};        // hbar / (zeta sigma^2)
    double theta{0.0};        // kT / (hbar zeta / m)
    double scale_time{0.0};   // m / zeta, seconds
    double scale_length{0.0}; // sigma, metres
};

// Throws ValidationError naming the offending field; UnderdampedBathError if 4 zeta tau / m >= 1.
void validate(const PhysicalParams& p);

ReducedParams reduce(const PhysicalParams& p);
PhysicalParams restore(const ReducedParams& r);

// d < 3 sigma: the cat-state formulas assume well separated packets.
bool separation_warning(const PhysicalParams& p);

// kT / (hbar gamma); numerically close to T[K] / gamma[1e11 s^-1].
double thermal_ratio(double temperature_K, double gamma);

// Reduced-unit model objects: m = zeta = sigma = 1, hbar = kappa.
FreeParticle reduced_particle(const ReducedParams& r);
CatState reduced_cat_state(const ReducedParams& r);

// Reads the six PhysicalParams fields (exact names) from a JSON object; other keys are ignored.
PhysicalParams params_from_json(const nlohmann::json& doc);
PhysicalParams params_from_json_text(std::string_view text);

} // namespace qbm::units
