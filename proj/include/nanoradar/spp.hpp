#pragma once

#include <cmath>
#include <complex>

#include "nanoradar/constants.hpp"
#include "nanoradar/errors.hpp"

namespace nanoradar::spp {

using cplx = std::complex<double>;

/// Free-electron metal: eps(w) = eps_inf - w_p^2 / (w^2 + i gamma w).
/// Under the e^{-i omega t} convention of the scattering modules, damping
/// gives Im(eps) > 0.
struct DrudeMetal {
    double plasma_frequency = 0.0; // rad/s
    double damping = 0.0;          // rad/s, >= 0
    double eps_inf = 1.0;

    void validate() const {
        if (!(plasma_frequency > 0.0)) throw domain_error("DrudeMetal: plasma frequency must be > 0");
        if (!(damping >= 0.0)) throw domain_error("DrudeMetal: damping must be >= 0");
    }
};

/// Metal (region 1, z < 0) against a non-absorbing dielectric (region 2, z > 0).
struct Interface {
    DrudeMetal metal;
    double eps_dielectric = 1.0;

    void validate() const {
        metal.validate();
        if (!(eps_dielectric > 0.0)) throw domain_error("Interface: dielectric permittivity must be > 0");
    }
};

inline cplx drude_permittivity(const DrudeMetal& metal, double omega) {
    metal.validate();
    if (!(omega > 0.0)) throw domain_error("drude_permittivity: omega must be > 0");
    const double wp2 = metal.plasma_frequency * metal.plasma_frequency;
    return metal.eps_inf - wp2 / (omega * omega + cplx(0.0, metal.damping * omega));
}

/// Metallic behavior requires Re(eps1) < 0.
inline bool metallic_condition_check(cplx eps1) { return eps1.real() < 0.0; }

/// Surface-plasmon frequency w_spp = w_p / sqrt(1 + eps2).
inline double spp_frequency(double omega_p, double eps2) {
    if (!(omega_p > 0.0)) throw domain_error("spp_frequency: omega_p must be > 0");
    if (!(eps2 > 0.0)) throw domain_error("spp_frequency: eps2 must be > 0");
    return omega_p / std::sqrt(1.0 + eps2);
}

enum class DispersionMode {
    standard,  // k = (w/c) sqrt(eps1 eps2 / (eps1 + eps2)), pole at eps1 = -eps2
    as_printed // k = (w/c) sqrt(eps1 eps2 / eps1 + eps1), kept for comparison
};

/// SPP propagation constant at the running frequency omega.  The standard
/// interface dispersion is the default; its pole against a lossless Drude
/// metal with eps_inf = 1 sits exactly at w_p / sqrt(1 + eps2).  The
/// as_printed variant simplifies to (w/c) sqrt(eps2 + eps1) and has no such
/// pole.
inline cplx spp_wavevector(const Interface& interface, double omega, DispersionMode mode = DispersionMode::standard) {
    interface.validate();
    if (!(omega > 0.0)) throw domain_error("spp_wavevector: omega must be > 0");
    const cplx eps1 = drude_permittivity(interface.metal, omega);
    const double eps2 = interface.eps_dielectric;
    const double k0 = omega / constants::speed_of_light;

    cplx radicand;
    if (mode == DispersionMode::standard) {
        const cplx denom = eps1 + eps2;
        if (denom == cplx(0.0, 0.0)) throw pole_error("spp_wavevector: eps1 + eps2 = 0 (surface-plasmon resonance)");
        radicand = eps1 * eps2 / denom;
    } else {
        radicand = eps1 * eps2 / eps1 + eps1;
    }
    cplx k = k0 * std::sqrt(radicand);
    if (k.imag() < 0.0) k = -k;              // decaying propagation branch
    return k + cplx(0.0, 0.0);               // folds -0 components to +0
}

/// TM surface mode: amplitudes, propagation constant beta, transverse decay
/// constants k1 (metal) and k2 (dielectric).  H_y continuity forces A1 = A2.
struct TmModeField {
    cplx amplitude1{1.0, 0.0};
    cplx amplitude2{1.0, 0.0};
    cplx beta{0.0, 0.0};
    cplx k1{0.0, 0.0};
    cplx k2{0.0, 0.0};
    double omega = 0.0;
};

/// Solve the transverse constants from beta = k_spp(omega):
/// k_i = sqrt(beta^2 - eps_i (w/c)^2), Re(k_i) > 0 for confinement.
inline TmModeField solve_tm_mode(const Interface& interface, double omega) {
    interface.validate();
    const cplx beta = spp_wavevector(interface, omega, DispersionMode::standard);
    const cplx eps1 = drude_permittivity(interface.metal, omega);
    const double k0 = omega / constants::speed_of_light;

    TmModeField mode;
    mode.omega = omega;
    mode.beta = beta;
    mode.k1 = std::sqrt(beta * beta - eps1 * k0 * k0);
    mode.k2 = std::sqrt(beta * beta - interface.eps_dielectric * k0 * k0);
    if (!(mode.k1.real() > 0.0 && mode.k2.real() > 0.0))
        throw domain_error("solve_tm_mode: mode is not confined at this frequency");
    return mode;
}

struct TmFieldComponents {
    cplx e_x, e_z, h_y;
};

/// TM mode fields in their native e^{j omega t} convention (conjugation maps
/// to the scattering modules' e^{-i omega t} convention):
///   E_x,i = (-1)^i j A_i k_i / (w eps0 eps_i) e^{j beta x} e^{(-1)^{i+1} k_i z}
///   E_z,i = -A_i beta  / (w eps0 eps_i) e^{j beta x} e^{(-1)^{i+1} k_i z}
///   H_y,i = A_i                        e^{j beta x} e^{(-1)^{i+1} k_i z}
/// Region 1 is z < 0 (metal), region 2 is z >= 0; all three components share
/// the decaying exponent (the region-1 fields decay toward z -> -inf).
inline TmFieldComponents tm_mode_fields(const TmModeField& mode, const Interface& interface, double x, double z) {
    interface.validate();
    if (!(mode.omega > 0.0)) throw domain_error("tm_mode_fields: mode omega must be > 0");

    const bool region1 = (z < 0.0) || (z == 0.0 && std::signbit(z));
    const cplx eps_i = region1 ? drude_permittivity(interface.metal, mode.omega) : cplx(interface.eps_dielectric, 0.0);
    const cplx a_i = region1 ? mode.amplitude1 : mode.amplitude2;
    const cplx k_i = region1 ? mode.k1 : mode.k2;
    const double sign_decay = region1 ? +1.0 : -1.0; // (-1)^{i+1}
    const double sign_ex = region1 ? -1.0 : +1.0;    // (-1)^i

    const cplx j_unit(0.0, 1.0);
    const cplx envelope = std::exp(j_unit * mode.beta * x) * std::exp(sign_decay * k_i * z);
    const cplx denom = mode.omega * constants::vacuum_permittivity * eps_i;

    TmFieldComponents f;
    f.h_y = a_i * envelope;
    f.e_x = sign_ex * j_unit * a_i * k_i / denom * envelope;
    f.e_z = -a_i * mode.beta / denom * envelope;
    return f;
}

} // namespace nanoradar::spp
