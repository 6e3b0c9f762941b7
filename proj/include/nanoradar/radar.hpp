#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nanoradar/constants.hpp"
#include "nanoradar/errors.hpp"
#include "nanoradar/medium.hpp"
#include "nanoradar/mie.hpp"
#include "nanoradar/pattern.hpp"
#include "nanoradar/photodetector.hpp"
#include "nanoradar/rgd.hpp"

namespace nanoradar::radar {

using cplx = std::complex<double>;

struct PlaneWaveSource {
    double wavelength = 0.0; // vacuum, meters
    Polarization polarization = Polarization::unpolarized;
};

using Source = std::variant<PlaneWaveSource, mie::DipoleSource>;
using Particle = std::variant<mie::Sphere, rgd::HomogeneousRegion>;

/// Emitter, target and channel of one sounding experiment.  The range enters
/// the echo budget as 1/R^2.
struct RadarScene {
    Source source;
    Particle particle;
    Medium medium;
    double range = 0.0; // meters

    void validate() const {
        if (!(range > 0.0)) throw domain_error("RadarScene: range must be > 0");
        if (std::holds_alternative<PlaneWaveSource>(source)) {
            if (!(std::get<PlaneWaveSource>(source).wavelength > 0.0))
                throw domain_error("RadarScene: source wavelength must be > 0");
        } else {
            std::get<mie::DipoleSource>(source).validate();
        }
    }

    double wavelength_vacuum() const {
        if (std::holds_alternative<PlaneWaveSource>(source)) return std::get<PlaneWaveSource>(source).wavelength;
        return 2.0 * constants::pi * constants::speed_of_light / std::get<mie::DipoleSource>(source).angular_frequency;
    }

    Polarization source_polarization() const {
        if (std::holds_alternative<PlaneWaveSource>(source)) return std::get<PlaneWaveSource>(source).polarization;
        return Polarization::unpolarized;
    }

    cplx particle_rri() const {
        if (std::holds_alternative<mie::Sphere>(particle)) return std::get<mie::Sphere>(particle).rri;
        return std::get<rgd::HomogeneousRegion>(particle).rri;
    }

    /// Linear dimension d used by the validity conditions (sphere diameter,
    /// box/cloud diagonal).
    double particle_dimension() const {
        if (std::holds_alternative<mie::Sphere>(particle)) return 2.0 * std::get<mie::Sphere>(particle).radius;
        return std::get<rgd::HomogeneousRegion>(particle).linear_dimension();
    }

    bool particle_is_spherical() const {
        if (std::holds_alternative<mie::Sphere>(particle)) return true;
        return std::get<rgd::HomogeneousRegion>(particle).shape == rgd::HomogeneousRegion::Shape::sphere;
    }

    mie::Sphere as_sphere() const {
        if (std::holds_alternative<mie::Sphere>(particle)) return std::get<mie::Sphere>(particle);
        const auto& region = std::get<rgd::HomogeneousRegion>(particle);
        if (region.shape != rgd::HomogeneousRegion::Shape::sphere)
            throw unsupported_configuration("RadarScene: particle is not spherical");
        return mie::Sphere{region.radius, region.rri, {region.offset[0], region.offset[1], region.offset[2]}};
    }

    rgd::HomogeneousRegion as_region() const {
        if (std::holds_alternative<rgd::HomogeneousRegion>(particle)) return std::get<rgd::HomogeneousRegion>(particle);
        const auto& sphere = std::get<mie::Sphere>(particle);
        return rgd::make_sphere_region(sphere.radius, sphere.rri,
                                       {sphere.center[0], sphere.center[1], sphere.center[2]});
    }
};

enum class ModelChoice { mie, rgd };

struct ModelSelection {
    ModelChoice model = ModelChoice::mie;
    rgd::RgdValidity validity;
    std::string rationale;
};

/// RGD when both validity conditions pass, Mie otherwise; the Mie fallback
/// requires a spherical particle.
inline ModelSelection select_model(const RadarScene& scene) {
    scene.validate();
    const double k = 2.0 * constants::pi * scene.medium.refractive_index / scene.wavelength_vacuum();
    const auto validity = rgd::validity_check(scene.particle_rri(), k, scene.particle_dimension());

    ModelSelection sel;
    sel.validity = validity;
    if (validity.valid) {
        sel.model = ModelChoice::rgd;
        sel.rationale = "RGD: contrast " + std::to_string(validity.contrast) + " and phase shift " +
                        std::to_string(validity.phase_shift) + " below limits";
        return sel;
    }
    if (!scene.particle_is_spherical())
        throw unsupported_configuration(
            "select_model: non-spherical particle outside the RGD regime (Mie path requires a sphere)");
    sel.model = ModelChoice::mie;
    sel.rationale = "Mie: RGD validity failed (contrast " + std::to_string(validity.contrast) + ", phase shift " +
                    std::to_string(validity.phase_shift) + ")";
    return sel;
}

/// Scattered intensity at range R: the far-field normalized pattern of the
/// selected model scaled by 1/(k^2 R^2).
inline ScatteringPattern echo_pattern(const RadarScene& scene, std::span<const double> theta_grid,
                                      Polarization polarization,
                                      std::optional<ModelChoice> model_override = std::nullopt) {
    scene.validate();
    const double lambda = scene.wavelength_vacuum();
    const double n_med = scene.medium.refractive_index;
    const double k = 2.0 * constants::pi * n_med / lambda;

    const ModelChoice model = model_override ? *model_override : select_model(scene).model;
    ScatteringPattern pattern = (model == ModelChoice::mie)
                                    ? mie::mie_intensity_pattern(scene.as_sphere(), n_med, lambda, theta_grid,
                                                                 polarization)
                                    : rgd::rgd_intensity_pattern(scene.as_region(), n_med, lambda, theta_grid,
                                                                 polarization);
    const double scale = 1.0 / (k * k * scene.range * scene.range);
    for (double& v : pattern.intensity) v *= scale;
    return pattern;
}

struct NoiseModel {
    enum class Kind { none, constant_floor, gaussian };
    Kind kind = Kind::none;
    double level = 0.0;  // constant floor
    double sigma = 0.0;  // gaussian std dev
    std::uint64_t seed = 0;

    void validate() const {
        if (!(level >= 0.0) || !(sigma >= 0.0)) throw domain_error("NoiseModel: level and sigma must be >= 0");
    }
};

namespace detail {

// Box-Muller on top of mt19937_64.  Hand-rolled so the sequence is identical
// across standard libraries; std::normal_distribution is not portable.
class SeededGaussian {
  public:
    explicit SeededGaussian(std::uint64_t seed) : rng_(seed) {}

    double operator()(double sigma) {
        const double u1 = std::max(uniform(), 1e-300);
        const double u2 = uniform();
        return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * constants::pi * u2);
    }

  private:
    double uniform() {
        return (rng_() >> 11) * 0x1.0p-53; // 53-bit mantissa in [0, 1)
    }
    std::mt19937_64 rng_;
};

} // namespace detail

/// none -> identity; constant_floor -> adds level; gaussian -> seeded i.i.d.
/// draws clipped at zero.  The generator is owned per call, so identical
/// seeds reproduce identical outputs.
inline ScatteringPattern apply_noise(const ScatteringPattern& pattern, const NoiseModel& noise) {
    noise.validate();
    if (noise.kind == NoiseModel::Kind::none) return pattern;
    ScatteringPattern out = pattern;
    if (noise.kind == NoiseModel::Kind::constant_floor) {
        for (double& v : out.intensity) v += noise.level;
        return out;
    }
    detail::SeededGaussian gauss(noise.seed);
    for (double& v : out.intensity) v = std::max(0.0, v + gauss(noise.sigma));
    return out;
}

/// Above-threshold angular intervals and the detectable half-angle delta.
struct DetectionReport {
    double threshold = 0.0;
    std::vector<std::pair<double, double>> intervals; // radians, disjoint, sorted
    double delta = 0.0;                               // half-width of the interval containing the look direction
    bool detected = false;
    double look_direction = constants::pi;
};

/// Maximal contiguous runs with intensity >= threshold; linear interpolation
/// refines the crossings between grid nodes.  delta is the half-width of the
/// interval containing look_direction (0 when none contains it).
inline DetectionReport threshold_detect(const ScatteringPattern& pattern, double threshold,
                                        double look_direction = constants::pi) {
    if (!(threshold >= 0.0)) throw domain_error("threshold_detect: threshold must be >= 0");
    if (pattern.theta.size() != pattern.intensity.size() || pattern.theta.empty())
        throw domain_error("threshold_detect: malformed pattern");

    DetectionReport report;
    report.threshold = threshold;
    report.look_direction = look_direction;

    const auto& th = pattern.theta;
    const auto& in = pattern.intensity;
    const size_t n = th.size();

    const auto crossing = [&](size_t i, size_t j) {
        // threshold crossing between nodes i and j by linear interpolation
        const double di = in[j] - in[i];
        if (di == 0.0) return th[i];
        const double t = (threshold - in[i]) / di;
        return th[i] + t * (th[j] - th[i]);
    };

    size_t i = 0;
    while (i < n) {
        if (in[i] >= threshold) {
            double lo = (i == 0) ? th[0] : crossing(i - 1, i);
            size_t j = i;
            while (j + 1 < n && in[j + 1] >= threshold) ++j;
            double hi = (j + 1 == n) ? th[n - 1] : crossing(j + 1, j);
            report.intervals.emplace_back(lo, hi);
            i = j + 1;
        } else {
            ++i;
        }
    }

    for (const auto& [lo, hi] : report.intervals) {
        if (look_direction >= lo && look_direction <= hi) {
            report.delta = (hi - lo) / 2.0;
            report.detected = true;
            break;
        }
    }
    return report;
}

struct PipelineResult {
    ScatteringPattern echo;  // range-budgeted, noise-free
    ScatteringPattern noisy; // after the noise stage
    DetectionReport report;
    ModelSelection selection;
};

/// echo_pattern -> apply_noise -> threshold_detect, with every intermediate
/// artifact kept for inspection.
inline PipelineResult run_pipeline(const RadarScene& scene, std::span<const double> theta_grid,
                                   const NoiseModel& noise, double threshold,
                                   double look_direction = constants::pi,
                                   std::optional<ModelChoice> model_override = std::nullopt) {
    PipelineResult result;
    result.selection = model_override
                           ? ModelSelection{*model_override, rgd::RgdValidity{}, "model forced by caller"}
                           : select_model(scene);
    try {
        result.echo = echo_pattern(scene, theta_grid, scene.source_polarization(), result.selection.model);
    } catch (const numerical_error& e) {
        throw numerical_error(std::string("pipeline stage echo_pattern: ") + e.what());
    }
    result.noisy = apply_noise(result.echo, noise);
    result.report = threshold_detect(result.noisy, threshold, look_direction);
    return result;
}

/// Optical power collected by a small aperture (midpoint approximation) fed
/// into the RCE-PD transient as a step-on illumination.
inline pd::PhotocurrentTrace echo_to_photocurrent(const ScatteringPattern& pattern, double collection_solid_angle,
                                                  double aperture_center, const pd::RcePdParams& params,
                                                  std::span<const double> t_grid) {
    if (!(collection_solid_angle > 0.0))
        throw domain_error("echo_to_photocurrent: collection solid angle must be > 0");
    if (pattern.theta.empty()) throw domain_error("echo_to_photocurrent: empty pattern");
    if (!(aperture_center >= pattern.theta.front() && aperture_center <= pattern.theta.back()))
        throw domain_error("echo_to_photocurrent: aperture center outside the pattern grid");

    // linear interpolation of the intensity at the aperture center
    const auto& th = pattern.theta;
    const auto it = std::lower_bound(th.begin(), th.end(), aperture_center);
    double intensity;
    if (it == th.begin()) {
        intensity = pattern.intensity.front();
    } else if (it == th.end()) {
        intensity = pattern.intensity.back();
    } else {
        const size_t j = static_cast<size_t>(it - th.begin());
        const double t = (aperture_center - th[j - 1]) / (th[j] - th[j - 1]);
        intensity = pattern.intensity[j - 1] + t * (pattern.intensity[j] - pattern.intensity[j - 1]);
    }

    const double incident_power = intensity * collection_solid_angle;
    return pd::photocurrent_series(t_grid, incident_power, params);
}

} // namespace nanoradar::radar
