// quadrature.hpp: Adaptive Gauss-Kronrod integration for the fluctuation integrals

#pragma once

#include <functional>
#include <limits>

#include "qbm/bath.hpp"

namespace qbm::quadrature {

struct QuadratureConfig {
    double rel_tol{1e-9};
    double abs_tol{1e-14};
    int max_panels{4096};
    double omega_epsilon{0.0}; // small-omega series threshold; 0 selects 1e-6 x natural scale
    int cutoff_periods{4};     // real-axis segment is [0, cutoff_periods * 2 pi / t]

    void validate() const;
};

struct QuadratureResult {
    double value{0.0};
    double est_error{0.0};  // panel error estimate on the resolved range
    int panels_used{0};
    double tail_bound{0.0}; // error estimate of everything beyond the cutoff
    bool converged{true};
    double max_panel_width{0.0}; // widest panel on the oscillatory range

    double error_budget() const { return est_error + tail_bound; }
};

enum class Kernel { one_minus_cos, sin };

// int_0^inf d omega Im alpha(omega) coth(omega / 2 theta) (1 - cos omega t)  (one_minus_cos), or
// int_0^inf d omega Im alpha(omega) sin(omega t)                            (sin; no coth).
//
// [0, W] with W = cutoff_periods * 2 pi / t is split into panels no wider than
// pi / (4 t) and refined adaptively. Beyond W the cosine/sine part is integrated
// along W + i y, where the integrand decays like e^{-y t}. Im alpha and coth have
// poles only on the imaginary axis.
// The non-oscillatory remainder int_W^inf Im alpha coth is mapped onto (0, 1].
QuadratureResult integrate_fluctuation(const BathModel& model, double mass, double t, double theta,
                                       Kernel kernel, const QuadratureConfig& cfg = {});

// Threshold below which the small-omega series is spliced in (theta > 0 only).
double resolved_omega_epsilon(const BathModel& model, double mass, double t, double theta,
                              const QuadratureConfig& cfg);

// Integrand of integrate_fluctuation on the real axis, with the series splice.
double fluctuation_integrand(const BathModel& model, double mass, double omega, double t,
                             double theta, Kernel kernel, double omega_epsilon);

// Leading small-omega form: coth Laurent x Im alpha to O(omega^2) x kernel Taylor.
double fluctuation_integrand_series(const BathModel& model, double mass, double omega, double t,
                                    double theta, Kernel kernel);

// |f(y)| <= constant * y^{-power} for y beyond the integration start; power > 1.
struct TailDecay {
    double constant{1.0};
    double power{2.0};
};

// Integral over [a, inf): panels are appended in doubling segments until the
// power-law tail bound drops below half the tolerance. max_panel_width caps the
// initial subdivision (pass a fraction of the period for oscillatory f).
QuadratureResult integrate_generic(const std::function<double(double)>& f, double a, TailDecay decay,
                                   const QuadratureConfig& cfg = {},
                                   double max_panel_width = std::numeric_limits<double>::infinity());

QuadratureResult integrate_interval(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureConfig& cfg = {},
                                    double max_panel_width = std::numeric_limits<double>::infinity());

} // namespace qbm::quadrature
