#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "nanoradar/constants.hpp"
#include "nanoradar/errors.hpp"

namespace nanoradar::specfun {

using cplx = std::complex<double>;

inline constexpr int max_order = 10000;
inline constexpr double max_argument = 1e6;

namespace detail {

// Downward (Miller) recurrence for j_0..j_{order_max}, normalized against the
// closed forms j_0 = sin z / z and j_1 = sin z / z^2 - cos z / z.  Upward
// recurrence is unstable for j_n; the start order follows N = n + ceil(15 + |z|).
inline std::vector<cplx> bessel_j_chain(int order_max, cplx z) {
    const double az = std::abs(z);
    if (order_max < 0) throw domain_error("spherical_bessel_j: negative order");
    if (order_max > max_order) throw domain_error("spherical_bessel_j: order above domain bound");
    if (!(az < max_argument)) throw domain_error("spherical_bessel_j: |argument| above domain bound");

    // Keep at least orders 0..1 so both normalization anchors exist.
    const int kept = std::max(order_max, 1);
    std::vector<cplx> j(static_cast<size_t>(kept) + 1);
    if (az == 0.0) {
        j[0] = 1.0;
        j.resize(static_cast<size_t>(order_max) + 1);
        return j; // j_n(0) = 0 for n >= 1
    }

    const int start = kept + static_cast<int>(std::ceil(15.0 + az));
    cplx fkp1 = 0.0;
    cplx fk = 1e-30;
    for (int k = start; k >= 1; --k) {
        cplx fkm1 = (2.0 * k + 1.0) / z * fk - fkp1;
        // Rescale before overflow; the chain is linear so stored entries scale too.
        if (std::abs(fkm1) > 1e250) {
            constexpr double s = 1e-250;
            fkm1 *= s;
            fk *= s;
            if (k - 1 <= kept) {
                for (int t = k; t <= kept; ++t) j[static_cast<size_t>(t)] *= s;
            }
        }
        if (k - 1 <= kept) j[static_cast<size_t>(k - 1)] = fkm1;
        fkp1 = fk;
        fk = fkm1;
    }

    const cplx j0 = std::sin(z) / z;
    const cplx j1 = std::sin(z) / (z * z) - std::cos(z) / z;
    // Anchor on whichever closed form is farther from a zero of sin/cos.
    const cplx scale = (std::abs(j0) >= std::abs(j1)) ? j0 / j[0] : j1 / j[1];
    for (auto& v : j) {
        v *= scale;
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw numerical_error("spherical_bessel_j: non-finite value in recurrence");
    }
    j.resize(static_cast<size_t>(order_max) + 1);
    return j;
}

// Upward recurrence for y_0..y_{order_max}; stable since y_n grows with order.
inline std::vector<cplx> bessel_y_chain(int order_max, cplx z) {
    if (order_max < 0) throw domain_error("spherical_bessel_y: negative order");
    if (std::abs(z) == 0.0) throw domain_error("spherical_bessel_y: singular at zero argument");
    std::vector<cplx> y(static_cast<size_t>(order_max) + 1);
    y[0] = -std::cos(z) / z;
    if (order_max >= 1) y[1] = -std::cos(z) / (z * z) - std::sin(z) / z;
    for (int n = 1; n + 1 <= order_max; ++n)
        y[static_cast<size_t>(n) + 1] = (2.0 * n + 1.0) / z * y[static_cast<size_t>(n)] - y[static_cast<size_t>(n) - 1];
    return y;
}

} // namespace detail

/// j_n(z).  z = 0 handled analytically: j_0(0) = 1, j_n(0) = 0 for n >= 1.
inline cplx spherical_bessel_j(int order, cplx argument) {
    return detail::bessel_j_chain(order, argument)[static_cast<size_t>(order)];
}

/// h_n^(1)(x) = j_n(x) + i y_n(x), real x > 0.
inline cplx spherical_hankel1(int order, double argument) {
    if (!(argument > 0.0)) throw domain_error("spherical_hankel1: argument must be > 0 (singular at origin)");
    const cplx z(argument, 0.0);
    const cplx j = detail::bessel_j_chain(order, z)[static_cast<size_t>(order)];
    const cplx y = detail::bessel_y_chain(order, z)[static_cast<size_t>(order)];
    return j + cplx(0.0, 1.0) * y;
}

/// Riccati-Bessel pairs psi_n(z) = z j_n(z), xi_n(z) = z h_n^(1)(z) and their
/// derivatives, orders 0..order_max (the n = 0 entries seed the recurrences).
struct RiccatiTable {
    int order_max = 0;
    std::vector<cplx> psi, psi_prime, xi, xi_prime;
};

inline RiccatiTable riccati_bessel(int order_max, cplx argument) {
    if (order_max < 1) throw domain_error("riccati_bessel: order_max must be >= 1");
    if (std::abs(argument) == 0.0) throw domain_error("riccati_bessel: singular at zero argument");

    const cplx z = argument;
    const auto j = detail::bessel_j_chain(order_max, z);
    const auto y = detail::bessel_y_chain(order_max, z);

    RiccatiTable t;
    t.order_max = order_max;
    const size_t n_total = static_cast<size_t>(order_max) + 1;
    t.psi.resize(n_total);
    t.psi_prime.resize(n_total);
    t.xi.resize(n_total);
    t.xi_prime.resize(n_total);
    const cplx i_unit(0.0, 1.0);
    for (size_t n = 0; n < n_total; ++n) {
        t.psi[n] = z * j[n];
        t.xi[n] = z * (j[n] + i_unit * y[n]);
    }
    t.psi_prime[0] = std::cos(z);
    t.xi_prime[0] = std::exp(i_unit * z); // d/dz [-i e^{iz}]
    for (size_t n = 1; n < n_total; ++n) {
        const cplx nn(static_cast<double>(n), 0.0);
        t.psi_prime[n] = t.psi[n - 1] - nn / z * t.psi[n];
        t.xi_prime[n] = t.xi[n - 1] - nn / z * t.xi[n];
    }
    return t;
}

/// Mie angular functions pi_n = P_n^1(cos theta)/sin theta and tau_n = dP_n^1/dtheta,
/// orders 1..order_max.  The upward recurrences involve only cos theta, so the
/// theta = 0 and theta = pi limits come out analytically (pi_n = +-n(n+1)/2 etc).
struct AngularFunctionTable {
    int order_max = 0;
    double theta = 0.0;
    std::vector<double> pi_n, tau_n; // index n, entry [0] unused
};

inline AngularFunctionTable angular_functions(int order_max, double theta) {
    if (order_max < 1) throw domain_error("angular_functions: order_max must be >= 1");
    if (!(theta >= 0.0 && theta <= constants::pi + 1e-12))
        throw domain_error("angular_functions: theta outside [0, pi]");

    AngularFunctionTable t;
    t.order_max = order_max;
    t.theta = theta;
    t.pi_n.assign(static_cast<size_t>(order_max) + 1, 0.0);
    t.tau_n.assign(static_cast<size_t>(order_max) + 1, 0.0);

    const double mu = std::cos(theta);
    double pi_prev = 0.0; // pi_0
    double pi_cur = 1.0;  // pi_1
    t.pi_n[1] = pi_cur;
    t.tau_n[1] = mu; // 1*mu*pi_1 - 2*pi_0
    for (int n = 2; n <= order_max; ++n) {
        const double pi_next = ((2.0 * n - 1.0) * mu * pi_cur - n * pi_prev) / (n - 1.0);
        pi_prev = pi_cur;
        pi_cur = pi_next;
        t.pi_n[static_cast<size_t>(n)] = pi_cur;
        t.tau_n[static_cast<size_t>(n)] = n * mu * pi_cur - (n + 1.0) * pi_prev;
    }
    return t;
}

} // namespace nanoradar::specfun
