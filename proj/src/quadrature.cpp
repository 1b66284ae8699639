// quadrature.cpp: Adaptive Gauss-Kronrod engine and the fluctuation integrals

#include "qbm/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <queue>
#include <vector>

#include "qbm/constants.hpp"
#include "qbm/errors.hpp"
#include "qbm/specfun.hpp"

namespace qbm::quadrature {

namespace {

using cplx = std::complex<double>;

constexpr double eps = std::numeric_limits<double>::epsilon();

// 15-point Kronrod extension of the 7-point Gauss rule.
constexpr std::array<double, 8> kronrod_nodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kronrod_weights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> gauss_weights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// Neumaier summation; complex values are compensated per component.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + carry_; }

private:
    double sum_{0.0};
    double carry_{0.0};
};

template <class Value>
struct Accumulator;

template <>
struct Accumulator<double> {
    CompensatedSum s;
    void add(double x) { s.add(x); }
    double value() const { return s.value(); }
};

template <>
struct Accumulator<cplx> {
    CompensatedSum re, im;
    void add(cplx x) {
        re.add(x.real());
        im.add(x.imag());
    }
    cplx value() const { return {re.value(), im.value()}; }
};

template <class Value>
struct Panel {
    double a{0.0};
    double b{0.0};
    Value value{};
    double error{0.0};

    bool operator<(const Panel& other) const { return error < other.error; }
};

template <class Value, class F>
Panel<Value> gauss_kronrod(const F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::array<Value, 7> f1{};
    std::array<Value, 7> f2{};

    const Value fc = f(center);
    Value res_k = fc * kronrod_weights[7];
    Value res_g = fc * gauss_weights[3];
    double res_abs = std::abs(res_k);
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kronrod_nodes[j];
        f1[j] = f(center - dx);
        f2[j] = f(center + dx);
        res_k += kronrod_weights[j] * (f1[j] + f2[j]);
        res_abs += kronrod_weights[j] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 1) {
            res_g += gauss_weights[j / 2] * (f1[j] + f2[j]);
        }
    }
    const Value mean = res_k * 0.5;
    double res_asc = kronrod_weights[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j) {
        res_asc += kronrod_weights[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
    }
    const double scale = std::abs(half);
    res_abs *= scale;
    res_asc *= scale;
    double err = std::abs((res_k - res_g) * half);
    if (res_asc != 0.0 && err != 0.0) {
        err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
    }
    if (res_abs > std::numeric_limits<double>::min() / (50.0 * eps)) {
        err = std::max(50.0 * eps * res_abs, err);
    }
    return {a, b, res_k * half, err};
}

// Global adaptive bisection over a growing set of panels.
template <class Value, class F>
class AdaptiveIntegrator {
public:
    AdaptiveIntegrator(const F& f, int max_panels) : f_(f), max_panels_(max_panels) {}

    void add_interval(double a, double b, double max_width) {
        int pieces = 1;
        if (std::isfinite(max_width) && max_width > 0.0) {
            pieces = std::max(1, static_cast<int>(std::ceil((b - a) / max_width * (1.0 - 1e-12))));
        }
        const double width = (b - a) / pieces;
        for (int k = 0; k < pieces; ++k) {
            const double lo = a + k * width;
            const double hi = (k + 1 == pieces) ? b : a + (k + 1) * width;
            push(gauss_kronrod<Value>(f_, lo, hi));
        }
    }

    // Bisects the worst panel while the error exceeds the tolerance. Returns
    // false when the panel budget runs out or panels can no longer be split.
    bool refine(double rel_tol, double abs_tol) {
        while (error_ > tolerance(rel_tol, abs_tol)) {
            if (static_cast<int>(heap_.size()) >= max_panels_ || !bisect_worst()) {
                recompute();
                return error_ <= tolerance(rel_tol, abs_tol);
            }
        }
        recompute();
        return error_ <= tolerance(rel_tol, abs_tol);
    }

    double tolerance(double rel_tol, double abs_tol) const {
        return std::max(abs_tol, rel_tol * std::abs(value_));
    }

    bool bisect_worst() {
        const Panel<Value> worst = heap_.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b) || (worst.b - worst.a) < 64.0 * eps * std::max(std::abs(worst.a), std::abs(worst.b))) {
            return false;
        }
        heap_.pop();
        value_ -= worst.value;
        error_ -= worst.error;
        push(gauss_kronrod<Value>(f_, worst.a, mid));
        push(gauss_kronrod<Value>(f_, mid, worst.b));
        return true;
    }

    void recompute() {
        auto copy = heap_;
        Accumulator<Value> v;
        CompensatedSum e;
        while (!copy.empty()) {
            v.add(copy.top().value);
            e.add(copy.top().error);
            copy.pop();
        }
        value_ = v.value();
        error_ = e.value();
    }

    double max_width() const {
        auto copy = heap_;
        double w = 0.0;
        while (!copy.empty()) {
            w = std::max(w, copy.top().b - copy.top().a);
            copy.pop();
        }
        return w;
    }

    Value value() const { return value_; }
    double error() const { return error_; }
    int panels() const { return static_cast<int>(heap_.size()); }
    bool full() const { return static_cast<int>(heap_.size()) >= max_panels_; }

private:
    void push(const Panel<Value>& p) {
        value_ += p.value;
        error_ += p.error;
        heap_.push(p);
    }

    const F& f_;
    int max_panels_;
    std::priority_queue<Panel<Value>> heap_;
    Value value_{};
    double error_{0.0};
};

struct PartResult {
    double value{0.0};
    double error{0.0};
    int panels{0};
    bool converged{true};
};

// coth(w) for Re w > 0 without overflow.
cplx coth_complex(cplx w) {
    const cplx e = std::exp(-2.0 * w);
    return (1.0 + e) / (1.0 - e);
}

double one_minus_cos(double x) {
    const double s = std::sin(0.5 * x);
    return 2.0 * s * s;
}

} // namespace

void QuadratureConfig::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
        throw ValidationError("quadrature tolerances must be positive");
    }
    if (max_panels < 16) {
        throw ValidationError("max_panels must be at least 16");
    }
    if (omega_epsilon < 0.0) {
        throw ValidationError("omega_epsilon must be non-negative");
    }
    if (cutoff_periods < 1) {
        throw ValidationError("cutoff_periods must be at least 1");
    }
}

double resolved_omega_epsilon(const BathModel& model, double mass, double t, double theta,
                              const QuadratureConfig& cfg) {
    if (cfg.omega_epsilon > 0.0) {
        return cfg.omega_epsilon;
    }
    double scale = model.zeta / mass;
    if (t > 0.0) {
        scale = std::min(scale, 1.0 / t);
    }
    if (theta > 0.0) {
        scale = std::min(scale, 2.0 * theta);
    }
    return 1e-6 * scale;
}

double fluctuation_integrand_series(const BathModel& model, double mass, double omega, double t,
                                    double theta, Kernel kernel) {
    const double z = model.zeta;
    const double c2 = (mass * mass - 2.0 * z * mass * model.tau) / (z * z);
    const double im_alpha = (1.0 - c2 * omega * omega) / (z * omega);
    const double wt = omega * t;
    if (kernel == Kernel::sin) {
        return im_alpha * wt * (1.0 - wt * wt / 6.0);
    }
    double coth = 1.0;
    if (theta > 0.0) {
        const double x = omega / (2.0 * theta);
        coth = (1.0 + x * x / 3.0) / x;
    }
    return im_alpha * coth * 0.5 * wt * wt * (1.0 - wt * wt / 12.0);
}

double fluctuation_integrand(const BathModel& model, double mass, double omega, double t,
                             double theta, Kernel kernel, double omega_epsilon) {
    if (theta > 0.0 && omega < omega_epsilon) {
        return fluctuation_integrand_series(model, mass, omega, t, theta, kernel);
    }
    const double im_alpha = response_im(model, omega, mass);
    if (kernel == Kernel::sin) {
        return im_alpha * std::sin(omega * t);
    }
    return im_alpha * specfun::coth_kernel(omega, theta) * one_minus_cos(omega * t);
}

QuadratureResult integrate_fluctuation(const BathModel& model, double mass, double t, double theta,
                                       Kernel kernel, const QuadratureConfig& cfg) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw ValidationError("integrate_fluctuation: t must be non-negative");
    }
    if (!(theta >= 0.0) || !std::isfinite(theta)) {
        throw ValidationError("integrate_fluctuation: theta must be non-negative");
    }
    validate(model, mass);
    cfg.validate();
    if (t == 0.0) {
        return {};
    }

    const double cutoff = cfg.cutoff_periods * 2.0 * pi / t;
    const double max_width = pi / (4.0 * t);
    const double omega_eps = resolved_omega_epsilon(model, mass, t, theta, cfg);
    const bool thermal = kernel == Kernel::one_minus_cos && theta > 0.0;

    auto h_complex = [&](cplx z) {
        cplx h = response_im_continued(model, z, mass);
        if (thermal) {
            h *= coth_complex(z / (2.0 * theta));
        }
        return h;
    };

    auto real_axis = [&](double omega) {
        return fluctuation_integrand(model, mass, omega, t, theta, kernel, omega_eps);
    };
    // int_W^inf h(omega) e^{i omega t} d omega = (i e^{i W t} / t) int_0^inf h(W + i s/t) e^{-s} ds,
    // with s = u / (1 - u).
    auto rotated = [&](double u) {
        const double one_minus_u = 1.0 - u;
        const double s = u / one_minus_u;
        return h_complex(cplx{cutoff, s / t}) * (std::exp(-s) / (one_minus_u * one_minus_u * t));
    };
    // int_W^inf h(omega) d omega with omega = W / u.
    auto smooth_tail = [&](double u) {
        const double omega = cutoff / u;
        double h = response_im(model, omega, mass);
        if (thermal) {
            h *= specfun::coth_kernel(omega, theta);
        }
        return h * cutoff / (u * u);
    };

    auto run = [&](double rel_tol, double abs_tol) {
        QuadratureResult out;
        const double part_rel = rel_tol / 4.0;
        const double part_abs = abs_tol / 4.0;

        AdaptiveIntegrator<double, decltype(real_axis)> head(real_axis, cfg.max_panels);
        head.add_interval(0.0, cutoff, max_width);
        const bool head_ok = head.refine(part_rel, part_abs);

        AdaptiveIntegrator<cplx, decltype(rotated)> osc(rotated, cfg.max_panels);
        osc.add_interval(0.0, 1.0, 0.125);
        const bool osc_ok = osc.refine(part_rel, part_abs);
        const cplx phase = cplx{0.0, 1.0} * std::polar(1.0, std::fmod(cutoff * t, 2.0 * pi));
        const cplx tail_osc = phase * osc.value();

        double tail = 0.0;
        double tail_err = osc.error();
        bool tail_ok = osc_ok;
        int tail_panels = osc.panels();
        if (kernel == Kernel::one_minus_cos) {
            AdaptiveIntegrator<double, decltype(smooth_tail)> smooth(smooth_tail, cfg.max_panels);
            smooth.add_interval(0.0, 1.0, 0.125);
            tail_ok = smooth.refine(part_rel, part_abs) && tail_ok;
            tail = smooth.value() - tail_osc.real();
            tail_err += smooth.error();
            tail_panels += smooth.panels();
        } else {
            tail = tail_osc.imag();
        }

        CompensatedSum total;
        total.add(head.value());
        total.add(tail);
        out.value = total.value();
        out.est_error = head.error();
        out.tail_bound = tail_err;
        out.panels_used = head.panels() + tail_panels;
        out.max_panel_width = head.max_width();
        out.converged = head_ok && tail_ok;
        return out;
    };

    QuadratureResult result = run(cfg.rel_tol, cfg.abs_tol);
    const double budget = cfg.rel_tol * std::abs(result.value) + cfg.abs_tol;
    if (result.converged && result.error_budget() > budget) {
        // The parts partially cancel; retry with an absolute target from the first pass.
        result = run(cfg.rel_tol, std::max(cfg.abs_tol, cfg.rel_tol * std::abs(result.value)));
    }
    if (result.error_budget() > cfg.rel_tol * std::abs(result.value) + cfg.abs_tol) {
        result.converged = false;
    }
    return result;
}

QuadratureResult integrate_generic(const std::function<double(double)>& f, double a, TailDecay decay,
                                   const QuadratureConfig& cfg, double max_panel_width) {
    cfg.validate();
    if (!(decay.power > 1.0) || !(decay.constant >= 0.0)) {
        throw ValidationError("integrate_generic: tail decay needs power > 1 and constant >= 0");
    }
    if (!std::isfinite(a)) {
        throw ValidationError("integrate_generic: start must be finite");
    }
    AdaptiveIntegrator<double, std::function<double(double)>> engine(f, cfg.max_panels);
    double right = a + std::max(1.0, std::abs(a));
    engine.add_interval(a, right, max_panel_width);
    auto tail_bound = [&](double y) {
        return y > 0.0 ? decay.constant * std::pow(y, 1.0 - decay.power) / (decay.power - 1.0)
                       : std::numeric_limits<double>::infinity();
    };

    bool converged = true;
    while (true) {
        const double tol = engine.tolerance(cfg.rel_tol, cfg.abs_tol);
        const double tail = tail_bound(right);
        if (tail > 0.5 * tol) {
            if (engine.full()) {
                converged = false;
                break;
            }
            const double next = a + 2.0 * (right - a);
            engine.add_interval(right, next, max_panel_width);
            right = next;
            continue;
        }
        if (engine.error() > 0.5 * tol) {
            if (engine.full() || !engine.bisect_worst()) {
                converged = false;
                break;
            }
            continue;
        }
        engine.recompute();
        if (engine.error() > 0.5 * engine.tolerance(cfg.rel_tol, cfg.abs_tol)) {
            continue;
        }
        break;
    }
    engine.recompute();
    QuadratureResult out;
    out.value = engine.value();
    out.est_error = engine.error();
    out.tail_bound = tail_bound(right);
    out.panels_used = engine.panels();
    out.max_panel_width = engine.max_width();
    out.converged = converged;
    return out;
}

QuadratureResult integrate_interval(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureConfig& cfg, double max_panel_width) {
    cfg.validate();
    if (!(b > a) || !std::isfinite(a) || !std::isfinite(b)) {
        throw ValidationError("integrate_interval: requires finite a < b");
    }
    AdaptiveIntegrator<double, std::function<double(double)>> engine(f, cfg.max_panels);
    engine.add_interval(a, b, max_panel_width);
    QuadratureResult out;
    out.converged = engine.refine(cfg.rel_tol, cfg.abs_tol);
    out.value = engine.value();
    out.est_error = engine.error();
    out.panels_used = engine.panels();
    out.max_panel_width = engine.max_width();
    return out;
}

} // namespace qbm::quadrature
