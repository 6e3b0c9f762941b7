#pragma once

#include <array>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "nanoradar/constants.hpp"
#include "nanoradar/errors.hpp"

namespace nanoradar::pd {

/// Resonant-cavity-enhanced photodetector parameters.  N_ph / P_ph are treated
/// as dimensionless photo-carrier counts driven by the photon rate P_i / (h nu).
struct RcePdParams {
    double q = constants::elementary_charge; // C
    double x_a = 0.0;       // active region width, m
    double w_n = 0.0;       // electron drift region width, m
    double w_p = 0.0;       // hole drift region width, m
    double v_n = 0.0;       // electron saturation velocity, m/s
    double v_p = 0.0;       // hole saturation velocity, m/s
    double alpha_eff = 0.0; // effective absorption, 1/m
    double mu_f = 0.0;      // forward quantum efficiency, [0, 1]
    double mu_b = 0.0;      // backward quantum efficiency, [0, 1]
    double nu = 0.0;        // optical frequency, Hz

    void validate() const {
        if (!(q > 0.0)) throw domain_error("RcePdParams: q must be > 0");
        if (!(x_a > 0.0 && w_n > 0.0 && w_p > 0.0)) throw domain_error("RcePdParams: widths must be > 0");
        if (!(v_n > 0.0 && v_p > 0.0)) throw domain_error("RcePdParams: velocities must be > 0");
        if (!(alpha_eff > 0.0)) throw domain_error("RcePdParams: alpha_eff must be > 0");
        if (!(mu_f >= 0.0 && mu_b >= 0.0 && mu_f + mu_b <= 1.0))
            throw domain_error("RcePdParams: need 0 <= mu_f + mu_b <= 1");
        if (!(nu > 0.0)) throw domain_error("RcePdParams: optical frequency must be > 0");
    }
};

/// Grouping of the drift term -alpha w in the window-2 forward exponential.
/// The default keeps it inside the exponent (symmetric with the backward
/// exponential, and the response then closes at the window edge); the
/// alternate places it outside, for sensitivity comparisons.
enum class ExponentGrouping { drift_inside, drift_outside };

/// mu* = mu / (1 - e^{-alpha_eff x_a}).
inline std::pair<double, double> quantum_efficiency_factors(const RcePdParams& p) {
    p.validate();
    const double absorbed = 1.0 - std::exp(-p.alpha_eff * p.x_a);
    if (!(absorbed > 0.0)) throw domain_error("quantum_efficiency_factors: vanishing absorption");
    return {p.mu_f / absorbed, p.mu_b / absorbed};
}

namespace detail {

inline double unit_step(double s) { return s < 0.0 ? 0.0 : 1.0; }

// Shared piecewise expression for one carrier species with drift width w and
// saturation velocity v.
inline double carrier_count(double t, double photon_rate, const RcePdParams& p, double w, double v,
                            ExponentGrouping grouping) {
    const double a = p.alpha_eff;
    const double e_xa = std::exp(-a * p.x_a);
    const auto [mu_f_star, mu_b_star] = quantum_efficiency_factors(p);

    const double t1 = w / v;
    const double t2 = (w + p.x_a) / v;
    const double window1 = unit_step(t) - unit_step(t - t1);
    const double window2 = unit_step(t - t1) - unit_step(t - t2);
    if (window1 == 0.0 && window2 == 0.0) return 0.0;

    const double plateau = (mu_f_star + mu_b_star) * (1.0 - e_xa);

    double sweep = 0.0;
    if (window2 != 0.0) {
        const double forward = (grouping == ExponentGrouping::drift_inside)
                                   ? mu_f_star * (1.0 - std::exp(-a * p.x_a + a * v * t - a * w))
                                   : mu_f_star * (1.0 - std::exp(-a * p.x_a + a * v * t) - a * w);
        const double backward = mu_b_star * (-e_xa + std::exp(a * v * t - a * w));
        sweep = forward + backward;
    }
    return photon_rate * (plateau * window1 + sweep * window2);
}

} // namespace detail

/// Photo-generated electron and hole counts (N_ph, P_ph) under step-on
/// illumination P_i starting at t = 0.
inline std::pair<double, double> photo_carrier_concentrations(double t, double incident_power, const RcePdParams& p,
                                                              ExponentGrouping grouping = ExponentGrouping::drift_inside) {
    p.validate();
    if (!(incident_power >= 0.0)) throw domain_error("photo_carrier_concentrations: P_i must be >= 0");
    const double photon_rate = incident_power / (constants::planck * p.nu);
    return {detail::carrier_count(t, photon_rate, p, p.w_n, p.v_n, grouping),
            detail::carrier_count(t, photon_rate, p, p.w_p, p.v_p, grouping)};
}

/// I_ph(t) = q / (x_a + w_n + w_p) [ v_n N_ph(t) + v_p P_ph(t) ].
inline double photocurrent(double t, double incident_power, const RcePdParams& p,
                           ExponentGrouping grouping = ExponentGrouping::drift_inside) {
    const auto [n_ph, p_ph] = photo_carrier_concentrations(t, incident_power, p, grouping);
    return p.q / (p.x_a + p.w_n + p.w_p) * (p.v_n * n_ph + p.v_p * p_ph);
}

struct PhotocurrentTrace {
    std::vector<double> times;    // seconds, strictly increasing
    std::vector<double> currents; // amperes
    // transit-window boundaries: w_n/v_n, (w_n+x_a)/v_n, w_p/v_p, (w_p+x_a)/v_p
    std::array<double, 4> window_boundaries{0, 0, 0, 0};
};

inline PhotocurrentTrace photocurrent_series(std::span<const double> t_grid, double incident_power,
                                             const RcePdParams& p,
                                             ExponentGrouping grouping = ExponentGrouping::drift_inside) {
    p.validate();
    for (size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1])) throw domain_error("photocurrent_series: time grid must be increasing");

    PhotocurrentTrace trace;
    trace.times.assign(t_grid.begin(), t_grid.end());
    trace.currents.reserve(t_grid.size());
    for (double t : t_grid) trace.currents.push_back(photocurrent(t, incident_power, p, grouping));
    trace.window_boundaries = {p.w_n / p.v_n, (p.w_n + p.x_a) / p.v_n, p.w_p / p.v_p, (p.w_p + p.x_a) / p.v_p};
    return trace;
}

/// Optional first-order RC low-pass with time constant tau = R_tot C_d,
/// applied to a sampled trace.  The filter state starts discharged at the
/// first sample.  Readout-circuit extension, separate from the carrier
/// transport model itself.
inline PhotocurrentTrace apply_rc_lowpass(const PhotocurrentTrace& trace, double tau) {
    if (!(tau > 0.0)) throw domain_error("apply_rc_lowpass: time constant must be > 0");
    PhotocurrentTrace out = trace;
    if (out.currents.empty()) return out;
    double y = 0.0;
    out.currents.front() = y;
    for (size_t i = 1; i < out.currents.size(); ++i) {
        const double dt = out.times[i] - out.times[i - 1];
        const double blend = 1.0 - std::exp(-dt / tau);
        y += blend * (trace.currents[i] - y);
        out.currents[i] = y;
    }
    return out;
}

} // namespace nanoradar::pd
