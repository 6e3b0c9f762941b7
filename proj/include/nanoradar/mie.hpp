#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nanoradar/constants.hpp"
#include "nanoradar/errors.hpp"
#include "nanoradar/medium.hpp"
#include "nanoradar/pattern.hpp"
#include "nanoradar/specfun.hpp"
#include "nanoradar/vswf.hpp"

namespace nanoradar::mie {

using cplx = std::complex<double>;

/// Homogeneous spherical scatterer.  rri is the relative refractive index
/// m = n_particle / n_medium; fields vary as e^{-i omega t}, so absorbing
/// particles have Im(rri) >= 0.
struct Sphere {
    double radius = 0.0;                    // meters
    cplx rri{1.0, 0.0};                     // dimensionless
    std::array<double, 3> center{0.0, 0.0, 0.0}; // meters

    void validate() const {
        if (!(radius > 0.0)) throw domain_error("Sphere: radius must be > 0");
        if (rri.imag() < 0.0) throw domain_error("Sphere: Im(rri) must be >= 0 under the e^{-i omega t} convention");
    }
};

/// Partial-wave coefficients a_n, b_n, stored 1-based (index n, entry [0] unused).
struct MieCoefficients {
    int order_max = 0;
    std::vector<cplx> a, b;
    double x = 0.0; // size parameter
    cplx m{1.0, 0.0};
};

/// x = 2 pi n_medium r / lambda_0.
inline double size_parameter(double radius, double wavelength_vacuum, double medium_index) {
    if (!(radius > 0.0 && wavelength_vacuum > 0.0 && medium_index > 0.0))
        throw domain_error("size_parameter: all inputs must be > 0");
    return 2.0 * constants::pi * medium_index * radius / wavelength_vacuum;
}

/// Series cutoff N = ceil(x + 4 x^{1/3} + 2).
inline int truncation_order(double x) {
    if (!(x > 0.0)) throw domain_error("truncation_order: x must be > 0");
    return static_cast<int>(std::ceil(x + 4.0 * std::cbrt(x) + 2.0));
}

/// Lorenz-Mie partial-wave coefficients of a homogeneous sphere:
///   a_n = [m psi_n(mx) psi_n'(x) - psi_n(x) psi_n'(mx)] / [m psi_n(mx) xi_n'(x) - xi_n(x) psi_n'(mx)]
///   b_n = [psi_n(mx) psi_n'(x) - m psi_n(x) psi_n'(mx)] / [psi_n(mx) xi_n'(x) - m xi_n(x) psi_n'(mx)]
/// Both Riccati tables go through the same complex path, so m = 1 cancels exactly.
inline MieCoefficients lorenz_mie_coefficients(double x, cplx m, int order_max) {
    if (!(x > 0.0)) throw domain_error("lorenz_mie_coefficients: x must be > 0");
    if (m == cplx(0.0, 0.0)) throw domain_error("lorenz_mie_coefficients: m must be nonzero");
    if (order_max < 1) throw domain_error("lorenz_mie_coefficients: order_max must be >= 1");

    const auto outer = specfun::riccati_bessel(order_max, cplx(x, 0.0));
    const auto inner = specfun::riccati_bessel(order_max, m * x);

    MieCoefficients c;
    c.order_max = order_max;
    c.x = x;
    c.m = m;
    c.a.assign(static_cast<size_t>(order_max) + 1, cplx(0.0, 0.0));
    c.b.assign(static_cast<size_t>(order_max) + 1, cplx(0.0, 0.0));
    for (int n = 1; n <= order_max; ++n) {
        const size_t k = static_cast<size_t>(n);
        const cplx pm = inner.psi[k], pmp = inner.psi_prime[k];
        const cplx px = outer.psi[k], pxp = outer.psi_prime[k];
        const cplx xx = outer.xi[k], xxp = outer.xi_prime[k];
        const cplx den_a = m * pm * xxp - xx * pmp;
        const cplx den_b = pm * xxp - m * xx * pmp;
        if (den_a == cplx(0.0, 0.0) || den_b == cplx(0.0, 0.0) || !std::isfinite(std::abs(den_a)) ||
            !std::isfinite(std::abs(den_b)))
            throw numerical_error("lorenz_mie_coefficients: denominator underflow at order " + std::to_string(n));
        c.a[k] = (m * pm * pxp - px * pmp) / den_a;
        c.b[k] = (pm * pxp - m * px * pmp) / den_b;
    }
    return c;
}

/// Far-field amplitudes
///   S1 = sum (2n+1)/(n(n+1)) (a_n pi_n + b_n tau_n)
///   S2 = sum (2n+1)/(n(n+1)) (a_n tau_n + b_n pi_n)
inline std::pair<cplx, cplx> scattering_amplitudes(const MieCoefficients& coeffs, double theta) {
    const auto ang = specfun::angular_functions(coeffs.order_max, theta);
    cplx s1(0.0, 0.0), s2(0.0, 0.0);
    for (int n = 1; n <= coeffs.order_max; ++n) {
        const size_t k = static_cast<size_t>(n);
        const double f = (2.0 * n + 1.0) / (n * (n + 1.0));
        s1 += f * (coeffs.a[k] * ang.pi_n[k] + coeffs.b[k] * ang.tau_n[k]);
        s2 += f * (coeffs.a[k] * ang.tau_n[k] + coeffs.b[k] * ang.pi_n[k]);
    }
    return {s1, s2};
}

/// Q_sca = (2/x^2) sum (2n+1)(|a_n|^2 + |b_n|^2),  Q_ext = (2/x^2) sum (2n+1) Re(a_n + b_n).
inline std::pair<double, double> efficiencies(const MieCoefficients& coeffs) {
    double qs = 0.0, qe = 0.0;
    for (int n = 1; n <= coeffs.order_max; ++n) {
        const size_t k = static_cast<size_t>(n);
        qs += (2.0 * n + 1.0) * (std::norm(coeffs.a[k]) + std::norm(coeffs.b[k]));
        qe += (2.0 * n + 1.0) * (coeffs.a[k].real() + coeffs.b[k].real());
    }
    const double f = 2.0 / (coeffs.x * coeffs.x);
    return {f * qs, f * qe};
}

inline double intensity_from_amplitudes(cplx s1, cplx s2, Polarization pol) {
    switch (pol) {
        case Polarization::perpendicular: return std::norm(s1);
        case Polarization::parallel: return std::norm(s2);
        default: return 0.5 * (std::norm(s1) + std::norm(s2));
    }
}

inline ScatteringPattern mie_intensity_pattern(const Sphere& sphere, double medium_index,
                                               double wavelength_vacuum, std::span<const double> theta_grid,
                                               Polarization polarization) {
    sphere.validate();
    if (theta_grid.empty()) throw domain_error("mie_intensity_pattern: empty angle grid");
    for (double th : theta_grid)
        if (!(th >= 0.0 && th <= constants::pi + 1e-12))
            throw domain_error("mie_intensity_pattern: grid angle outside [0, pi]");

    const double x = size_parameter(sphere.radius, wavelength_vacuum, medium_index);
    const auto coeffs = lorenz_mie_coefficients(x, sphere.rri, truncation_order(x));

    ScatteringPattern p;
    p.theta.assign(theta_grid.begin(), theta_grid.end());
    p.intensity.reserve(theta_grid.size());
    for (double th : theta_grid) {
        const auto [s1, s2] = scattering_amplitudes(coeffs, th);
        p.intensity.push_back(intensity_from_amplitudes(s1, s2, polarization));
    }
    p.model = ScatterModel::mie;
    p.wavelength_vacuum = wavelength_vacuum;
    p.medium_index = medium_index;
    p.polarization = polarization;
    return p;
}

/// Oscillating point dipole: moment p (C m), position (m), angular frequency (rad/s).
struct DipoleSource {
    std::array<cplx, 3> moment{cplx(0, 0), cplx(0, 0), cplx(0, 0)};
    std::array<double, 3> position{0.0, 0.0, 0.0};
    double angular_frequency = 0.0;

    void validate() const {
        if (!(angular_frequency > 0.0)) throw domain_error("DipoleSource: angular frequency must be > 0");
    }
};

/// Scattering coefficients a_{ln}, b_{ln} for dipole excitation of a sphere,
/// indexed l in 1..l_max, n in -l..l.
struct DipoleScatterCoefficients {
    int l_max = 0;
    bool converged = true; // false when the last ring still carries weight
    std::vector<cplx> a, b;

    size_t index(int l, int n) const {
        if (l < 1 || l > l_max || std::abs(n) > l) throw domain_error("DipoleScatterCoefficients: index out of range");
        return static_cast<size_t>(l * l - 1 + (n + l));
    }
    cplx a_ln(int l, int n) const { return a[index(l, n)]; }
    cplx b_ln(int l, int n) const { return b[index(l, n)]; }
};

/// a_{ln} = (-1)^n (i alpha_l k^3 / eps) (2l+1)/(l(l+1)) N^(3)_{l,-n}(k r0) . p
/// b_{ln} analogous with beta_l and M^(3).  Coordinates are centered on the
/// sphere; eps is the relative permittivity of the medium; the vector wave
/// functions use the fully normalized convention of vswf.hpp.
inline DipoleScatterCoefficients dipole_excitation_coefficients(const DipoleSource& source, const Sphere& sphere,
                                                                const Medium& medium, int l_max) {
    source.validate();
    sphere.validate();
    if (l_max < 1) throw domain_error("dipole_excitation_coefficients: l_max must be >= 1");

    const std::array<double, 3> rel{source.position[0] - sphere.center[0], source.position[1] - sphere.center[1],
                                    source.position[2] - sphere.center[2]};
    const double r = std::sqrt(rel[0] * rel[0] + rel[1] * rel[1] + rel[2] * rel[2]);
    if (!(r > sphere.radius)) throw domain_error("dipole_excitation_coefficients: dipole must lie outside the sphere");

    const double k = medium.refractive_index * source.angular_frequency / constants::speed_of_light;
    const double eps = medium.relative_permittivity;
    const double x = k * sphere.radius;
    const int mie_order = std::max(l_max, truncation_order(x));
    const auto coeffs = lorenz_mie_coefficients(x, sphere.rri, mie_order);

    const double rho = k * r;
    const double theta = std::acos(std::clamp(rel[2] / r, -1.0, 1.0));
    const double phi = std::atan2(rel[1], rel[0]);
    const auto radial = specfun::riccati_bessel(l_max, cplx(rho, 0.0));
    const auto angular = vswf::normalized_angular_table(l_max, theta);

    DipoleScatterCoefficients out;
    out.l_max = l_max;
    out.a.assign(static_cast<size_t>(l_max) * (l_max + 2), cplx(0.0, 0.0));
    out.b.assign(static_cast<size_t>(l_max) * (l_max + 2), cplx(0.0, 0.0));

    const cplx i_unit(0.0, 1.0);
    const double k3_over_eps = k * k * k / eps;
    for (int l = 1; l <= l_max; ++l) {
        const cplx pre_a = i_unit * coeffs.a[static_cast<size_t>(l)] * k3_over_eps * (2.0 * l + 1.0) / (l * (l + 1.0));
        const cplx pre_b = i_unit * coeffs.b[static_cast<size_t>(l)] * k3_over_eps * (2.0 * l + 1.0) / (l * (l + 1.0));
        for (int n = -l; n <= l; ++n) {
            const auto waves = vswf::outgoing_vswf(l, -n, rho, theta, phi, radial, angular);
            const double sign = (n % 2 == 0) ? 1.0 : -1.0;
            out.a[out.index(l, n)] = sign * pre_a * vswf::dot(waves.n_wave, source.moment);
            out.b[out.index(l, n)] = sign * pre_b * vswf::dot(waves.m_wave, source.moment);
        }
    }

    double global_max = 0.0, last_ring_max = 0.0;
    for (int l = 1; l <= l_max; ++l)
        for (int n = -l; n <= l; ++n) {
            const double mag = std::max(std::abs(out.a[out.index(l, n)]), std::abs(out.b[out.index(l, n)]));
            global_max = std::max(global_max, mag);
            if (l == l_max) last_ring_max = std::max(last_ring_max, mag);
        }
    out.converged = (global_max == 0.0) || (last_ring_max <= 1e-10 * global_max);
    return out;
}

} // namespace nanoradar::mie
