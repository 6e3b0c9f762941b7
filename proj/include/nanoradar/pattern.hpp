#pragma once

#include <string>
#include <vector>

namespace nanoradar {

enum class ScatterModel { mie, rgd };

enum class Polarization { unpolarized, parallel, perpendicular };

inline const char* to_string(ScatterModel m) { return m == ScatterModel::mie ? "mie" : "rgd"; }

inline const char* to_string(Polarization p) {
    switch (p) {
        case Polarization::parallel: return "parallel";
        case Polarization::perpendicular: return "perpendicular";
        default: return "unpolarized";
    }
}

/// Sampled differential scattered intensity over scattering angle.
/// Amplitude-module outputs are far-field normalized (|S|^2 based); the radar
/// module rescales by 1/(k^2 R^2) for range budgeting.
struct ScatteringPattern {
    std::vector<double> theta;     // radians, monotone in [0, pi]
    std::vector<double> intensity; // same length as theta
    ScatterModel model = ScatterModel::mie;
    double wavelength_vacuum = 0.0; // meters
    double medium_index = 1.0;
    Polarization polarization = Polarization::unpolarized;
    bool rgd_validity_warning = false; // carried when RGD ran out of regime
};

} // namespace nanoradar
