// units.cpp: SI ingestion and dimensionless reduction

#include "qbm/units.hpp"

#include <cmath>
#include <string>

#include "qbm/constants.hpp"
#include "qbm/errors.hpp"

namespace qbm::units {

namespace {

void require(bool ok, const char* field, const char* rule) {
    if (!ok) {
        throw ValidationError(std::string(field) + ": " + rule);
    }
}

double read_field(const nlohmann::json& doc, const char* field) {
    if (!doc.contains(field)) {
        throw ValidationError(std::string(field) + ": missing");
    }
    const auto& value = doc.at(field);
    if (!value.is_number()) {
        throw ValidationError(std::string(field) + ": must be a number");
    }
    return value.get<double>();
}

} // namespace

void validate(const PhysicalParams& p) {
    require(p.mass_kg > 0.0 && std::isfinite(p.mass_kg), "mass_kg", "must be positive");
    require(p.zeta > 0.0 && std::isfinite(p.zeta), "zeta", "must be positive");
    require(p.tau_s >= 0.0 && std::isfinite(p.tau_s), "tau_s", "must be non-negative");
    require(p.sigma_m > 0.0 && std::isfinite(p.sigma_m), "sigma_m", "must be positive");
    require(p.d_m > 0.0 && std::isfinite(p.d_m), "d_m", "must be positive");
    require(p.temperature_K >= 0.0 && std::isfinite(p.temperature_K), "temperature_K", "must be non-negative");
    if (4.0 * p.zeta * p.tau_s / p.mass_kg >= 1.0) {
        throw UnderdampedBathError();
    }
}

ReducedParams reduce(const PhysicalParams& p) {
    validate(p);
    ReducedParams r;
    r.scale_time = p.mass_kg / p.zeta;
    r.scale_length = p.sigma_m;
    r.tau_hat = p.tau_s / r.scale_time;
    r.d_hat = p.d_m / p.sigma_m;
    r.kappa = hbar_si / (p.zeta * p.sigma_m * p.sigma_m);
    r.theta = boltzmann_si * p.temperature_K * r.scale_time / hbar_si;
    return r;
}

PhysicalParams restore(const ReducedParams& r) {
    PhysicalParams p;
    p.sigma_m = r.scale_length;
    p.zeta = hbar_si / (r.kappa * r.scale_length * r.scale_length);
    p.mass_kg = r.scale_time * p.zeta;
    p.tau_s = r.tau_hat * r.scale_time;
    p.d_m = r.d_hat * r.scale_length;
    p.temperature_K = r.theta * hbar_si / (boltzmann_si * r.scale_time);
    return p;
}

bool separation_warning(const PhysicalParams& p) {
    return p.d_m < 3.0 * p.sigma_m;
}

double thermal_ratio(double temperature_K, double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw ValidationError("gamma: must be positive");
    }
    if (!(temperature_K >= 0.0)) {
        throw ValidationError("temperature_K: must be non-negative");
    }
    return boltzmann_si * temperature_K / (hbar_si * gamma);
}

FreeParticle reduced_particle(const ReducedParams& r) {
    FreeParticle p;
    p.mass = 1.0;
    p.hbar = r.kappa;
    p.bath = r.tau_hat > 0.0 ? BathModel::single_relaxation_time(1.0, r.tau_hat) : BathModel::ohmic(1.0);
    return p;
}

CatState reduced_cat_state(const ReducedParams& r) {
    return {1.0, r.d_hat};
}

PhysicalParams params_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) {
        throw ValidationError("parameter document must be a JSON object");
    }
    PhysicalParams p;
    p.mass_kg = read_field(doc, "mass_kg");
    p.zeta = read_field(doc, "zeta");
    p.tau_s = read_field(doc, "tau_s");
    p.sigma_m = read_field(doc, "sigma_m");
    p.d_m = read_field(doc, "d_m");
    p.temperature_K = read_field(doc, "temperature_K");
    return p;
}

PhysicalParams params_from_json_text(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("malformed JSON: ") + e.what());
    }
    return params_from_json(doc);
}

} // namespace qbm::units
