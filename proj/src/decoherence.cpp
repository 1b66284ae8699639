// decoherence.cpp: Attenuation, decoherence times and cat-state probability profiles

#include "qbm/decoherence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qbm/constants.hpp"
#include "qbm/errors.hpp"

namespace qbm {

namespace {

double attenuation_exponent(const CatState& state, const TrajectoryPoint& point) {
    const double d = state.separation;
    return point.s * d * d / (8.0 * state.sigma * state.sigma * point.w2);
}

void require_srt(const FreeParticle& p, const char* what) {
    if (p.bath.is_ohmic()) {
        throw ValidationError(std::string(what) + ": requires the single-relaxation-time model (tau > 0)");
    }
}

} // namespace

void CatState::validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw ValidationError("packet width sigma must be positive");
    }
    if (!(separation > 0.0) || !std::isfinite(separation)) {
        throw ValidationError("packet separation d must be positive");
    }
}

double attenuation_from(const CatState& state, const TrajectoryPoint& point) {
    return std::exp(-attenuation_exponent(state, point));
}

double attenuation_exact(const CatState& state, const FreeParticle& p, double t, double theta,
                         const quadrature::QuadratureConfig& cfg) {
    state.validate();
    return attenuation_from(state, trajectory_point(p, t, state.sigma, theta, cfg));
}

double attenuation_short(const CatState& state, const FreeParticle& p, double t) {
    require_srt(p, "attenuation_short");
    const double ratio = t / tau0(state, p);
    return std::exp(ratio * ratio * std::log(p.bath.zeta * p.bath.tau / p.mass));
}

double attenuation_intermediate(const CatState& state, const FreeParticle& p, double t) {
    const double scale = tau0(state, p);
    if (!(t >= 0.0)) {
        throw ValidationError("time must be non-negative");
    }
    if (t == 0.0) {
        return 1.0;
    }
    const double bracket = std::log(p.bath.zeta * t / p.mass) + euler_gamma - 1.5;
    if (bracket >= 0.0) {
        throw ValidationError("intermediate-time attenuation requires zeta t / m < exp(3/2 - gamma_E)");
    }
    const double ratio = t / scale;
    return std::exp(ratio * ratio * bracket);
}

double tau0(const CatState& state, const FreeParticle& p) {
    state.validate();
    p.validate();
    const double s = state.sigma;
    return p.mass * s * s / state.separation * std::sqrt(8.0 * pi / (p.hbar * p.bath.zeta));
}

const char* to_string(DecoherenceMethod method) {
    switch (method) {
    case DecoherenceMethod::root_find_exact: return "root_find_exact";
    case DecoherenceMethod::log_approx: return "log_approx";
    }
    return "unknown";
}

DecoherenceReport decoherence_time(const CatState& state, const FreeParticle& p, double theta,
                                   const quadrature::QuadratureConfig& cfg) {
    DecoherenceReport report;
    report.tau0 = tau0(state, p);
    if (!p.bath.is_ohmic()) {
        report.tau_d_approx = report.tau0 / std::sqrt(std::abs(std::log(p.bath.zeta * p.bath.tau / p.mass)));
    }

    // Positive once a(t) has dropped below 1/e.
    auto excess = [&](double t) {
        return attenuation_exponent(state, trajectory_point(p, t, state.sigma, theta, cfg)) - 1.0;
    };

    const double t_limit = 1.0e6 * p.mass / p.bath.zeta;
    double hi = 1.0e-6 * report.tau0;
    double lo = 0.0;
    if (excess(hi) >= 0.0) {
        // Crossing below the nominal start: walk down instead.
        lo = 0.5 * hi;
        int guard = 0;
        while (excess(lo) >= 0.0) {
            hi = lo;
            lo *= 0.5;
            if (++guard > 400) {
                throw NumericalError("decoherence_time: attenuation below 1/e at every scanned time");
            }
        }
    } else {
        while (true) {
            lo = hi;
            hi *= 2.0;
            if (hi > t_limit) {
                std::ostringstream msg;
                msg << "decoherence_time: bracket scan failed, a(t) stays above 1/e up to t = " << t_limit;
                throw NumericalError(msg.str());
            }
            if (excess(hi) >= 0.0) {
                break;
            }
        }
    }
    report.bracket_lo = lo;
    report.bracket_hi = hi;

    while ((hi - lo) > 1e-10 * hi) {
        const double mid = std::sqrt(lo * hi);
        if (excess(mid) >= 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    report.tau_d = 0.5 * (lo + hi);
    report.method = DecoherenceMethod::root_find_exact;
    report.ordering_holds = report.tau_d < report.tau0;
    return report;
}

InterferencePattern::InterferencePattern(const CatState& state, const TrajectoryPoint& point)
    : state_(state), point_(point) {
    state_.validate();
    if (!(point_.w2 > 0.0)) {
        throw ValidationError("packet variance must be positive");
    }
    const double d = state_.separation;
    const double sigma2 = state_.sigma * state_.sigma;
    attenuation_ = attenuation_from(state_, point_);
    wavenumber_ = point_.C * d / (4.0 * sigma2 * point_.w2);
    log_norm_ = -std::log(2.0) - std::log1p(std::exp(-d * d / (8.0 * sigma2)));
}

InterferencePattern InterferencePattern::evaluate(const CatState& state, const FreeParticle& p, double t,
                                                  double theta, const quadrature::QuadratureConfig& cfg) {
    state.validate();
    return InterferencePattern(state, trajectory_point(p, t, state.sigma, theta, cfg));
}

double InterferencePattern::log_packet(double x) const {
    const double w2 = point_.w2;
    return -0.5 * std::log(2.0 * pi * w2) - x * x / (2.0 * w2);
}

double InterferencePattern::probability(double x) const {
    const double half = 0.5 * state_.separation;
    const double w2 = point_.w2;
    const double direct = std::exp(log_norm_ + log_packet(x - half)) + std::exp(log_norm_ + log_packet(x + half));
    const double log_envelope = log_norm_ + std::log(2.0) - attenuation_exponent(state_, point_)
                              - state_.separation * state_.separation / (8.0 * w2) + log_packet(x);
    return direct + std::exp(log_envelope) * std::cos(wavenumber_ * x);
}

double InterferencePattern::visibility(double x) const {
    const double half = 0.5 * state_.separation;
    const double log_factor = std::log(2.0) - attenuation_exponent(state_, point_)
                            - state_.separation * state_.separation / (8.0 * point_.w2) + log_packet(x);
    const double log_geometric_mean = 0.5 * (log_packet(x - half) + log_packet(x + half));
    return std::exp(log_factor - (std::log(2.0) + log_geometric_mean));
}

quadrature::QuadratureResult InterferencePattern::normalization(const quadrature::QuadratureConfig& cfg) const {
    const double w = std::sqrt(point_.w2);
    const double half = 0.5 * state_.separation;
    const double reach = 8.0 * w;
    const double edge = half + reach;

    double fine_width = 0.5 * w;
    if (wavenumber_ > 0.0) {
        fine_width = std::min(fine_width, pi / (2.0 * wavenumber_));
    }

    // Break points: domain edges and a +-8w window around each of -d/2, 0, +d/2.
    std::vector<double> cuts{-edge, edge};
    for (double centre : {-half, 0.0, half}) {
        cuts.push_back(std::clamp(centre - reach, -edge, edge));
        cuts.push_back(std::clamp(centre + reach, -edge, edge));
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto f = [this](double x) { return probability(x); };
    quadrature::QuadratureResult total;
    double carry = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i];
        const double b = cuts[i + 1];
        if (!(b > a)) {
            continue;
        }
        const double mid = 0.5 * (a + b);
        const bool near_centre = std::abs(mid) < reach || std::abs(std::abs(mid) - half) < reach;
        const double width = near_centre ? fine_width : std::numeric_limits<double>::infinity();
        const auto part = quadrature::integrate_interval(f, a, b, cfg, width);
        // Kahan accumulation across segments.
        const double y = part.value - carry;
        const double sum = total.value + y;
        carry = (sum - total.value) - y;
        total.value = sum;
        total.est_error += part.est_error;
        total.panels_used += part.panels_used;
        total.converged = total.converged && part.converged;
        total.max_panel_width = std::max(total.max_panel_width, part.max_panel_width);
    }
    // Mass outside +-(d/2 + 8w): Gaussian tails, erfc(8/sqrt 2) per side per packet.
    total.tail_bound = std::erfc(8.0 / std::sqrt(2.0));
    return total;
}

std::vector<ProfilePoint> probability_profile(const CatState& state, const FreeParticle& p, double t,
                                              double theta, std::span<const double> x_grid,
                                              const quadrature::QuadratureConfig& cfg) {
    const auto pattern = InterferencePattern::evaluate(state, p, t, theta, cfg);
    std::vector<ProfilePoint> out;
    out.reserve(x_grid.size());
    for (double x : x_grid) {
        if (!std::isfinite(x)) {
            throw ValidationError("profile grid must be finite");
        }
        out.push_back({x, pattern.probability(x)});
    }
    return out;
}

double fringe_visibility(const CatState& state, const FreeParticle& p, double t, double theta,
                         const quadrature::QuadratureConfig& cfg) {
    return InterferencePattern::evaluate(state, p, t, theta, cfg).visibility(0.0);
}

} // namespace qbm
