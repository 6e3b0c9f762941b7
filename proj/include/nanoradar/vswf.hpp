#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "nanoradar/constants.hpp"
#include "nanoradar/errors.hpp"
#include "nanoradar/specfun.hpp"

namespace nanoradar::vswf {

using cplx = std::complex<double>;
using cvec3 = std::array<cplx, 3>;

// Fully normalized associated Legendre functions (no Condon-Shortley phase):
//   Pbar_l^m = sqrt((2l+1)/(4pi) (l-m)!/(l+m)!) P_l^m(cos theta)
// together with pibar = m Pbar / sin(theta) and taubar = d Pbar / d theta.
// pibar and taubar are produced by recurrences that never divide by sin(theta),
// so the pole values theta in {0, pi} come out finite and exact.
struct AngularTable {
    int l_max = 0;
    double theta = 0.0;
    // Index (l, m) with 0 <= m <= l flattened as l * (l_max + 1) + m.
    std::vector<double> p, pi, tau;

    size_t idx(int l, int m) const { return static_cast<size_t>(l) * (l_max + 1) + m; }
    double p_lm(int l, int m) const { return m >= 0 ? p[idx(l, m)] : parity(m) * p[idx(l, -m)]; }
    double pi_lm(int l, int m) const { return m >= 0 ? pi[idx(l, m)] : -parity(m) * pi[idx(l, -m)]; }
    double tau_lm(int l, int m) const { return m >= 0 ? tau[idx(l, m)] : parity(m) * tau[idx(l, -m)]; }

    static double parity(int m) { return (m % 2 == 0) ? 1.0 : -1.0; }
};

inline AngularTable normalized_angular_table(int l_max, double theta) {
    if (l_max < 1) throw domain_error("normalized_angular_table: l_max must be >= 1");
    AngularTable t;
    t.l_max = l_max;
    t.theta = theta;
    const size_t count = static_cast<size_t>(l_max + 1) * (l_max + 1);
    t.p.assign(count, 0.0);
    t.pi.assign(count, 0.0);
    t.tau.assign(count, 0.0);

    const double mu = std::cos(theta);
    const double s = std::sin(theta);

    // Diagonal seeds: Pbar_m^m = c_m sin^m, with c_m = c_{m-1} sqrt((2m+1)/(2m)).
    // The pi seed keeps one factor of sin un-applied (pi_m^m = m c_m sin^{m-1}).
    std::vector<double> diag_c(static_cast<size_t>(l_max) + 1);
    diag_c[0] = 1.0 / std::sqrt(4.0 * constants::pi);
    for (int m = 1; m <= l_max; ++m)
        diag_c[static_cast<size_t>(m)] = diag_c[static_cast<size_t>(m) - 1] * std::sqrt((2.0 * m + 1.0) / (2.0 * m));

    for (int m = 0; m <= l_max; ++m) {
        const double c = diag_c[static_cast<size_t>(m)];
        const double sin_pow_m = std::pow(s, m);
        const double sin_pow_m1 = (m >= 1) ? std::pow(s, m - 1) : 0.0;
        t.p[t.idx(m, m)] = c * sin_pow_m;
        if (m >= 1) t.pi[t.idx(m, m)] = m * c * sin_pow_m1;
        // Upward in l at fixed m; P and pi share the same three-term recurrence.
        double p_prev = 0.0, p_cur = t.p[t.idx(m, m)];
        double q_prev = 0.0, q_cur = t.pi[t.idx(m, m)];
        for (int l = m + 1; l <= l_max; ++l) {
            const double a = std::sqrt((2.0 * l + 1.0) * (2.0 * l - 1.0) / ((l - m) * (double)(l + m)));
            // (l-1-m) = 0 at l = m+1, so the P_{l-2} term drops out by itself.
            const double b = std::sqrt((2.0 * l + 1.0) * (l - 1.0 - m) * (l - 1.0 + m) /
                                       ((2.0 * l - 3.0) * (l - m) * (double)(l + m)));
            const double p_next = a * mu * p_cur - b * p_prev;
            const double q_next = a * mu * q_cur - b * q_prev;
            p_prev = p_cur;
            p_cur = p_next;
            q_prev = q_cur;
            q_cur = q_next;
            t.p[t.idx(l, m)] = p_cur;
            t.pi[t.idx(l, m)] = q_cur;
        }
        // taubar from the derivative relation; m = 0 needs the sin division with
        // its zero limit at the poles.
        for (int l = std::max(m, 1); l <= l_max; ++l) {
            const double ratio = (l > m) ? std::sqrt((2.0 * l + 1.0) * (l - m) * (l + m) / (2.0 * l - 1.0)) : 0.0;
            if (m > 0) {
                const double pim1 = (l - 1 >= m) ? t.pi[t.idx(l - 1, m)] : 0.0;
                t.tau[t.idx(l, m)] = (l * mu * t.pi[t.idx(l, m)] - ratio * pim1) / m;
            } else {
                // dP/dtheta vanishes at both poles for m = 0; the quotient
                // form would amplify rounding noise by 1/sin(theta) there
                if (std::abs(s) < 1e-10) {
                    t.tau[t.idx(l, 0)] = 0.0;
                } else {
                    const double pm1 = (l - 1 >= 0) ? t.p[t.idx(l - 1, 0)] : 0.0;
                    t.tau[t.idx(l, 0)] = (l * mu * t.p[t.idx(l, 0)] - ratio * pm1) / s;
                }
            }
        }
    }
    return t;
}

/// Spherical-basis unit vectors at (theta, phi) in Cartesian components.
struct SphericalBasis {
    std::array<double, 3> r_hat, theta_hat, phi_hat;
};

inline SphericalBasis spherical_basis(double theta, double phi) {
    const double st = std::sin(theta), ct = std::cos(theta);
    const double sp = std::sin(phi), cp = std::cos(phi);
    return {{st * cp, st * sp, ct}, {ct * cp, ct * sp, -st}, {-sp, cp, 0.0}};
}

// Outgoing vector spherical wave functions (radial function h_l^(1)), in the
// fully normalized convention above:
//   M_lm = h_l(rho) [ i pibar theta_hat - taubar phi_hat ] e^{i m phi}
//   N_lm = { l(l+1) (h_l/rho) Pbar r_hat + (xi_l'/rho) [ taubar theta_hat + i pibar phi_hat ] } e^{i m phi}
struct OutgoingWaves {
    cvec3 m_wave, n_wave; // Cartesian components
};

inline OutgoingWaves outgoing_vswf(int l, int m, double rho, double theta, double phi,
                                   const specfun::RiccatiTable& radial, const AngularTable& angular) {
    if (l < 1 || std::abs(m) > l) throw domain_error("outgoing_vswf: invalid (l, m)");
    if (!(rho > 0.0)) throw domain_error("outgoing_vswf: rho must be > 0");

    const cplx i_unit(0.0, 1.0);
    const cplx h = radial.xi[static_cast<size_t>(l)] / rho;
    const cplx xi_prime = radial.xi_prime[static_cast<size_t>(l)];
    const double pbar = angular.p_lm(l, m);
    const double pibar = angular.pi_lm(l, m);
    const double taubar = angular.tau_lm(l, m);
    const cplx azimuth = std::exp(i_unit * (double)m * phi);

    const cplx m_theta = i_unit * pibar * h * azimuth;
    const cplx m_phi = -taubar * h * azimuth;
    const cplx n_r = (double)(l * (l + 1)) * (h / rho) * pbar * azimuth;
    const cplx n_theta = (xi_prime / rho) * taubar * azimuth;
    const cplx n_phi = (xi_prime / rho) * i_unit * pibar * azimuth;

    const auto basis = spherical_basis(theta, phi);
    OutgoingWaves out;
    for (int c = 0; c < 3; ++c) {
        out.m_wave[static_cast<size_t>(c)] =
            m_theta * basis.theta_hat[static_cast<size_t>(c)] + m_phi * basis.phi_hat[static_cast<size_t>(c)];
        out.n_wave[static_cast<size_t>(c)] = n_r * basis.r_hat[static_cast<size_t>(c)] +
                                             n_theta * basis.theta_hat[static_cast<size_t>(c)] +
                                             n_phi * basis.phi_hat[static_cast<size_t>(c)];
    }
    return out;
}

inline cplx dot(const cvec3& a, const cvec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

} // namespace nanoradar::vswf
