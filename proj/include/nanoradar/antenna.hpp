#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <utility>

#include "nanoradar/constants.hpp"
#include "nanoradar/errors.hpp"
#include "nanoradar/quadrature.hpp"

namespace nanoradar::antenna {

using cplx = std::complex<double>;

/// Angular power density p(theta, phi) >= 0, in W/sr or normalized 1/sr.
struct RadiationPattern {
    std::function<double(double, double)> density;

    double operator()(double theta, double phi) const { return density(theta, phi); }
};

inline RadiationPattern isotropic_pattern() {
    return {[](double, double) { return 1.0 / (4.0 * constants::pi); }};
}

/// Normalized dipole pattern P_n = (3/8pi) sin^2(theta).
inline RadiationPattern dipole_normalized_pattern() {
    return {[](double theta, double) {
        const double s = std::sin(theta);
        return 3.0 / (8.0 * constants::pi) * s * s;
    }};
}

/// P_rad = integral of p(theta, phi) sin(theta) dphi dtheta.
inline double integrate_radiated_power(const RadiationPattern& pattern, double rel_tol = 1e-9) {
    if (!pattern.density) throw domain_error("integrate_radiated_power: pattern sampler is empty");
    return quadrature::integrate_solid_angle(pattern.density, rel_tol);
}

/// D(theta, phi) = 4 pi p(theta, phi) / P_rad.
inline double directivity(const RadiationPattern& pattern, double theta, double phi) {
    const double p_rad = integrate_radiated_power(pattern);
    if (!(p_rad > 0.0)) throw domain_error("directivity: pattern radiates no power");
    return 4.0 * constants::pi * pattern(theta, phi) / p_rad;
}

/// eta = P_rad / (P_rad + P_loss).
inline double radiation_efficiency(double p_rad, double p_loss) {
    if (!(p_rad >= 0.0) || !(p_loss >= 0.0))
        throw domain_error("radiation_efficiency: powers must be >= 0");
    if (p_rad == 0.0 && p_loss == 0.0)
        throw domain_error("radiation_efficiency: total power is zero");
    return p_rad / (p_rad + p_loss);
}

/// G = 4 pi p(theta, phi) / P_total (equivalently eta * D).
inline double gain(const RadiationPattern& pattern, double p_total, double theta, double phi) {
    if (!(p_total > 0.0)) throw domain_error("gain: total power must be > 0");
    return 4.0 * constants::pi * pattern(theta, phi) / p_total;
}

/// Radiated power of an oscillating dipole, P = |p|^2/(4 pi eps0 eps) n^3 w^4/(3 c^3).
/// The dispersion-free index defaults to 1.
inline double dipole_radiated_power(double moment_magnitude, double omega, double eps_rel = 1.0,
                                    double refractive_index = 1.0) {
    if (!(moment_magnitude >= 0.0)) throw domain_error("dipole_radiated_power: |p| must be >= 0");
    if (!(omega > 0.0 && eps_rel > 0.0 && refractive_index > 0.0))
        throw domain_error("dipole_radiated_power: omega, eps, n must be > 0");
    const double c3 = constants::speed_of_light * constants::speed_of_light * constants::speed_of_light;
    const double n3 = refractive_index * refractive_index * refractive_index;
    const double w4 = omega * omega * omega * omega;
    return moment_magnitude * moment_magnitude / (4.0 * constants::pi * constants::vacuum_permittivity * eps_rel) *
           n3 * w4 / (3.0 * c3);
}

/// Local density of states seen by a dipole emitter,
/// rho_p = (12 eps0 / (pi w^2)) P / |p|^2.
inline double ldos(double radiated_power, double moment_magnitude, double omega) {
    if (!(moment_magnitude > 0.0)) throw domain_error("ldos: |p| must be > 0");
    if (!(omega > 0.0)) throw domain_error("ldos: omega must be > 0");
    return 12.0 * constants::vacuum_permittivity / (constants::pi * omega * omega) * radiated_power /
           (moment_magnitude * moment_magnitude);
}

/// R = P_rad / (I_max^2 / 2).
inline double radiation_resistance(double p_rad, double i_max) {
    if (!(i_max > 0.0)) throw domain_error("radiation_resistance: I_max must be > 0");
    return p_rad / (i_max * i_max / 2.0);
}

/// Short-dipole radiation resistance R = (2 pi / 3) Z0 (dl / lambda)^2.
/// The formula assumes dl << lambda; above dl = 0.1 lambda it is only a trend.
inline double dipole_radiation_resistance(double delta_l, double wavelength) {
    if (!(delta_l >= 0.0)) throw domain_error("dipole_radiation_resistance: length must be >= 0");
    if (!(wavelength > 0.0)) throw domain_error("dipole_radiation_resistance: wavelength must be > 0");
    const double r = delta_l / wavelength;
    return 2.0 * constants::pi / 3.0 * constants::free_space_impedance * r * r;
}

inline bool short_dipole_assumption_ok(double delta_l, double wavelength) {
    return delta_l <= 0.1 * wavelength;
}

/// lambda_eff = n1 + n2 (lambda / lambda_p).  n1 and n2 are geometry constants
/// supplied by the caller (lengths); the linear form has no universal values.
inline double effective_wavelength(double n1, double n2, double wavelength, double plasma_wavelength) {
    if (!(plasma_wavelength > 0.0)) throw domain_error("effective_wavelength: plasma wavelength must be > 0");
    return n1 + n2 * (wavelength / plasma_wavelength);
}

/// SR = lambda_eff lambda_1 / lambda_2, evaluated literally (the quotient
/// carries length units; see README for the dimensional caveat).
inline double scaling_ratio(double lambda_eff, double lambda1, double lambda2) {
    if (!(lambda2 > 0.0)) throw domain_error("scaling_ratio: lambda2 must be > 0");
    return lambda_eff * lambda1 / lambda2;
}

/// Uniform linear array along the theta = 0 axis.
struct ArraySpec {
    int count = 1;               // N >= 1
    double spacing = 0.0;        // d, meters
    double progressive_phase = 0.0; // beta, radians
    double wavelength = 0.0;     // meters

    void validate() const {
        if (count < 1) throw domain_error("ArraySpec: element count must be >= 1");
        if (!(spacing > 0.0)) throw domain_error("ArraySpec: spacing must be > 0");
        if (!(wavelength > 0.0)) throw domain_error("ArraySpec: wavelength must be > 0");
    }
};

/// Hansen-Woodyard end-fire spacing d = (N-1)/N lambda/4.
inline double hansen_woodyard_spacing(int count, double wavelength) {
    if (count < 1) throw domain_error("hansen_woodyard_spacing: count must be >= 1");
    if (!(wavelength > 0.0)) throw domain_error("hansen_woodyard_spacing: wavelength must be > 0");
    return (count - 1.0) / count * wavelength / 4.0;
}

/// AF(theta) = sum_{m=0}^{N-1} e^{i m (k d cos(theta) + beta)}.
inline cplx array_factor(const ArraySpec& spec, double theta) {
    spec.validate();
    const double k = 2.0 * constants::pi / spec.wavelength;
    const double psi = k * spec.spacing * std::cos(theta) + spec.progressive_phase;
    cplx af(0.0, 0.0);
    for (int m = 0; m < spec.count; ++m) af += std::exp(cplx(0.0, m * psi));
    return af;
}

/// p_array(theta, phi) = element(theta, phi) |AF(theta)|^2 / N^2.
inline RadiationPattern uniform_array_pattern(const ArraySpec& spec, RadiationPattern element) {
    spec.validate();
    if (spec.count == 1) return element;
    return {[spec, element = std::move(element)](double theta, double phi) {
        const double af2 = std::norm(array_factor(spec, theta));
        return element(theta, phi) * af2 / (static_cast<double>(spec.count) * spec.count);
    }};
}

} // namespace nanoradar::antenna
