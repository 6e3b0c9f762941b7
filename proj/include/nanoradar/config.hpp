#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <string>
#include <vector>

#include <json.hpp>

#include "nanoradar/antenna.hpp"
#include "nanoradar/constants.hpp"
#include "nanoradar/errors.hpp"
#include "nanoradar/photodetector.hpp"
#include "nanoradar/radar.hpp"
#include "nanoradar/spp.hpp"

namespace nanoradar::io {

using json = nlohmann::json;

namespace detail {

inline void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw validation_error("config: expected an object at " + path);
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* k) { return it.key() == k; }) == allowed.end())
            throw validation_error("config: unknown key " + path + "/" + it.key());
    }
}

inline const json& require(const json& obj, const std::string& path, const char* key) {
    if (!obj.is_object() || !obj.contains(key))
        throw validation_error("config: missing required key " + path + "/" + key);
    return obj.at(key);
}

inline double number(const json& v, const std::string& path) {
    if (!v.is_number()) throw validation_error("config: expected a number at " + path);
    return v.get<double>();
}

inline double number(const json& obj, const std::string& path, const char* key) {
    return number(require(obj, path, key), path + "/" + key);
}

inline double number_or(const json& obj, const std::string& path, const char* key, double fallback) {
    if (!obj.is_object() || !obj.contains(key)) return fallback;
    return number(obj.at(key), path + "/" + key);
}

inline int integer(const json& obj, const std::string& path, const char* key) {
    const json& v = require(obj, path, key);
    if (!v.is_number_integer()) throw validation_error("config: expected an integer at " + path + "/" + key);
    return v.get<int>();
}

inline std::string text(const json& obj, const std::string& path, const char* key) {
    const json& v = require(obj, path, key);
    if (!v.is_string()) throw validation_error("config: expected a string at " + path + "/" + key);
    return v.get<std::string>();
}

inline std::string text_or(const json& obj, const std::string& path, const char* key, const std::string& fallback) {
    if (!obj.is_object() || !obj.contains(key)) return fallback;
    if (!obj.at(key).is_string()) throw validation_error("config: expected a string at " + path + "/" + key);
    return obj.at(key).get<std::string>();
}

inline std::complex<double> complex_value(const json& obj, const std::string& path, const char* key) {
    const json& v = require(obj, path, key);
    const std::string p = path + "/" + key;
    check_keys(v, p, {"re", "im"});
    return {number(v, p, "re"), number_or(v, p, "im", 0.0)};
}

inline std::array<double, 3> triple(const json& obj, const std::string& path, const char* key) {
    const json& v = require(obj, path, key);
    const std::string p = path + "/" + key;
    if (!v.is_array() || v.size() != 3) throw validation_error("config: expected [x, y, z] at " + p);
    return {number(v.at(0), p + "[0]"), number(v.at(1), p + "[1]"), number(v.at(2), p + "[2]")};
}

} // namespace detail

inline Polarization parse_polarization(const std::string& s, const std::string& path) {
    if (s == "unpolarized") return Polarization::unpolarized;
    if (s == "parallel") return Polarization::parallel;
    if (s == "perpendicular") return Polarization::perpendicular;
    throw validation_error("config: unknown polarization '" + s + "' at " + path);
}

struct GridSpec {
    double start_deg = 0.0;
    double stop_deg = 180.0;
    int count = 721;

    void validate() const {
        if (count < 2) throw validation_error("config: grid count must be >= 2");
        if (!(start_deg < stop_deg)) throw validation_error("config: grid start must be below stop");
    }

    std::vector<double> radians() const {
        validate();
        std::vector<double> v(static_cast<size_t>(count));
        for (int i = 0; i < count; ++i)
            v[static_cast<size_t>(i)] =
                (start_deg + (stop_deg - start_deg) * i / (count - 1.0)) * constants::pi / 180.0;
        return v;
    }
};

struct ThresholdSpec {
    enum class Kind { absolute, relative };
    Kind kind = Kind::relative;
    double value = 0.5;

    void validate() const {
        if (kind == Kind::relative && !(value > 0.0 && value <= 1.0))
            throw validation_error("config: relative threshold must lie in (0, 1]");
        if (kind == Kind::absolute && !(value >= 0.0))
            throw validation_error("config: absolute threshold must be >= 0");
    }

    double resolve(const ScatteringPattern& pattern) const {
        validate();
        if (kind == Kind::absolute) return value;
        const double top = *std::max_element(pattern.intensity.begin(), pattern.intensity.end());
        return value * top;
    }
};

struct OutputSpec {
    std::string path;
    std::string format; // "csv" | "structured"
};

/// One simulation run: scenario label, scene, angle grid, noise, threshold
/// rule and output sinks.  Angles cross the boundary in degrees, lengths in
/// the units named by each key.
struct RunConfig {
    std::string scenario;
    radar::RadarScene scene;
    GridSpec grid;
    radar::NoiseModel noise;
    ThresholdSpec threshold;
    double look_direction_deg = 180.0;
    std::vector<OutputSpec> outputs;
};

namespace detail {

inline radar::Source parse_source(const json& v, const std::string& path) {
    const std::string kind = text(v, path, "kind");
    if (kind == "plane_wave") {
        check_keys(v, path, {"kind", "wavelength_m", "polarization"});
        radar::PlaneWaveSource src;
        src.wavelength = number(v, path, "wavelength_m");
        src.polarization = parse_polarization(text_or(v, path, "polarization", "unpolarized"), path);
        return src;
    }
    if (kind == "dipole") {
        check_keys(v, path, {"kind", "moment_cm", "position_m", "omega_rad_s"});
        mie::DipoleSource src;
        const json& m = require(v, path, "moment_cm");
        if (!m.is_array() || m.size() != 3)
            throw validation_error("config: expected three complex entries at " + path + "/moment_cm");
        for (int c = 0; c < 3; ++c) {
            const json& e = m.at(static_cast<size_t>(c));
            const std::string p = path + "/moment_cm[" + std::to_string(c) + "]";
            check_keys(e, p, {"re", "im"});
            src.moment[static_cast<size_t>(c)] = {number(e, p, "re"), number_or(e, p, "im", 0.0)};
        }
        src.position = triple(v, path, "position_m");
        src.angular_frequency = number(v, path, "omega_rad_s");
        return src;
    }
    throw validation_error("config: unknown source kind '" + kind + "' at " + path);
}

inline radar::Particle parse_particle(const json& v, const std::string& path) {
    const std::string kind = text(v, path, "kind");
    if (kind == "sphere") {
        check_keys(v, path, {"kind", "radius_m", "rri", "offset_m"});
        const double radius = number(v, path, "radius_m");
        const auto rri = complex_value(v, path, "rri");
        std::array<double, 3> offset{0, 0, 0};
        if (v.contains("offset_m")) offset = triple(v, path, "offset_m");
        return mie::Sphere{radius, rri, offset};
    }
    if (kind == "box") {
        check_keys(v, path, {"kind", "extents_m", "rri", "offset_m"});
        auto extents = triple(v, path, "extents_m");
        std::array<double, 3> offset{0, 0, 0};
        if (v.contains("offset_m")) offset = triple(v, path, "offset_m");
        return rgd::make_box_region(extents, complex_value(v, path, "rri"), offset);
    }
    throw validation_error("config: unknown particle kind '" + kind + "' at " + path);
}

inline Medium parse_medium(const json& v, const std::string& path) {
    check_keys(v, path, {"refractive_index", "relative_permittivity"});
    const double n = number(v, path, "refractive_index");
    if (v.contains("relative_permittivity"))
        return Medium::from_values(n, number(v, path, "relative_permittivity"));
    return Medium::from_index(n);
}

inline radar::NoiseModel parse_noise(const json& v, const std::string& path) {
    const std::string kind = text(v, path, "kind");
    radar::NoiseModel noise;
    if (kind == "none") {
        check_keys(v, path, {"kind"});
        noise.kind = radar::NoiseModel::Kind::none;
    } else if (kind == "constant_floor") {
        check_keys(v, path, {"kind", "level"});
        noise.kind = radar::NoiseModel::Kind::constant_floor;
        noise.level = number(v, path, "level");
    } else if (kind == "gaussian") {
        check_keys(v, path, {"kind", "sigma", "seed"});
        noise.kind = radar::NoiseModel::Kind::gaussian;
        noise.sigma = number(v, path, "sigma");
        noise.seed = static_cast<std::uint64_t>(integer(v, path, "seed"));
    } else {
        throw validation_error("config: unknown noise kind '" + kind + "' at " + path);
    }
    noise.validate();
    return noise;
}

inline ThresholdSpec parse_threshold(const json& v, const std::string& path) {
    check_keys(v, path, {"absolute", "relative"});
    ThresholdSpec t;
    const bool has_abs = v.contains("absolute"), has_rel = v.contains("relative");
    if (has_abs == has_rel)
        throw validation_error("config: threshold needs exactly one of absolute/relative at " + path);
    if (has_abs) {
        t.kind = ThresholdSpec::Kind::absolute;
        t.value = number(v, path, "absolute");
    } else {
        t.kind = ThresholdSpec::Kind::relative;
        t.value = number(v, path, "relative");
    }
    t.validate();
    return t;
}

} // namespace detail

inline RunConfig parse_config(const json& doc) {
    detail::check_keys(doc, "", {"scenario", "scene", "grid", "noise", "threshold", "look_direction_deg", "outputs"});
    std::string missing;
    for (const char* key : {"scenario", "scene"})
        if (!doc.contains(key)) missing += missing.empty() ? key : std::string(", ") + key;
    if (!missing.empty()) throw validation_error("config: missing required keys: " + missing);

    RunConfig cfg;
    cfg.scenario = detail::text(doc, "", "scenario");

    const json& scene = doc.at("scene");
    detail::check_keys(scene, "/scene", {"source", "particle", "medium", "range_m"});
    cfg.scene.source = detail::parse_source(detail::require(scene, "/scene", "source"), "/scene/source");
    cfg.scene.particle = detail::parse_particle(detail::require(scene, "/scene", "particle"), "/scene/particle");
    cfg.scene.medium = detail::parse_medium(detail::require(scene, "/scene", "medium"), "/scene/medium");
    cfg.scene.range = detail::number(scene, "/scene", "range_m");
    cfg.scene.validate();

    if (doc.contains("grid")) {
        const json& g = doc.at("grid");
        detail::check_keys(g, "/grid", {"start_deg", "stop_deg", "count"});
        cfg.grid.start_deg = detail::number(g, "/grid", "start_deg");
        cfg.grid.stop_deg = detail::number(g, "/grid", "stop_deg");
        cfg.grid.count = detail::integer(g, "/grid", "count");
    }
    cfg.grid.validate();

    if (doc.contains("noise")) cfg.noise = detail::parse_noise(doc.at("noise"), "/noise");
    if (doc.contains("threshold")) cfg.threshold = detail::parse_threshold(doc.at("threshold"), "/threshold");
    if (doc.contains("look_direction_deg"))
        cfg.look_direction_deg = detail::number(doc.at("look_direction_deg"), "/look_direction_deg");

    if (doc.contains("outputs")) {
        const json& outs = doc.at("outputs");
        if (!outs.is_array()) throw validation_error("config: /outputs must be an array");
        for (size_t i = 0; i < outs.size(); ++i) {
            const std::string p = "/outputs[" + std::to_string(i) + "]";
            detail::check_keys(outs.at(i), p, {"path", "format"});
            OutputSpec o;
            o.path = detail::text(outs.at(i), p, "path");
            o.format = detail::text(outs.at(i), p, "format");
            if (o.format != "csv" && o.format != "structured")
                throw validation_error("config: unknown output format '" + o.format + "' at " + p);
            cfg.outputs.push_back(std::move(o));
        }
    }
    return cfg;
}

inline RunConfig parse_config(const std::string& document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw validation_error(std::string("config: malformed document: ") + e.what());
    }
    return parse_config(doc);
}

inline json to_json(const RunConfig& cfg) {
    json doc;
    doc["scenario"] = cfg.scenario;

    json source;
    if (std::holds_alternative<radar::PlaneWaveSource>(cfg.scene.source)) {
        const auto& s = std::get<radar::PlaneWaveSource>(cfg.scene.source);
        source["kind"] = "plane_wave";
        source["wavelength_m"] = s.wavelength;
        source["polarization"] = to_string(s.polarization);
    } else {
        const auto& s = std::get<mie::DipoleSource>(cfg.scene.source);
        source["kind"] = "dipole";
        json moment = json::array();
        for (const auto& m : s.moment) moment.push_back({{"re", m.real()}, {"im", m.imag()}});
        source["moment_cm"] = moment;
        source["position_m"] = {s.position[0], s.position[1], s.position[2]};
        source["omega_rad_s"] = s.angular_frequency;
    }
    doc["scene"]["source"] = source;

    json particle;
    if (std::holds_alternative<mie::Sphere>(cfg.scene.particle)) {
        const auto& p = std::get<mie::Sphere>(cfg.scene.particle);
        particle["kind"] = "sphere";
        particle["radius_m"] = p.radius;
        particle["rri"] = {{"re", p.rri.real()}, {"im", p.rri.imag()}};
        particle["offset_m"] = {p.center[0], p.center[1], p.center[2]};
    } else {
        const auto& p = std::get<rgd::HomogeneousRegion>(cfg.scene.particle);
        if (p.shape == rgd::HomogeneousRegion::Shape::sphere) {
            particle["kind"] = "sphere";
            particle["radius_m"] = p.radius;
        } else if (p.shape == rgd::HomogeneousRegion::Shape::box) {
            particle["kind"] = "box";
            particle["extents_m"] = {p.extents[0], p.extents[1], p.extents[2]};
        } else {
            throw validation_error("config: cloud particles have no config representation");
        }
        particle["rri"] = {{"re", p.rri.real()}, {"im", p.rri.imag()}};
        particle["offset_m"] = {p.offset[0], p.offset[1], p.offset[2]};
    }
    doc["scene"]["particle"] = particle;

    doc["scene"]["medium"] = {{"refractive_index", cfg.scene.medium.refractive_index},
                              {"relative_permittivity", cfg.scene.medium.relative_permittivity}};
    doc["scene"]["range_m"] = cfg.scene.range;

    doc["grid"] = {{"start_deg", cfg.grid.start_deg}, {"stop_deg", cfg.grid.stop_deg}, {"count", cfg.grid.count}};

    json noise;
    switch (cfg.noise.kind) {
        case radar::NoiseModel::Kind::none: noise = {{"kind", "none"}}; break;
        case radar::NoiseModel::Kind::constant_floor:
            noise = {{"kind", "constant_floor"}, {"level", cfg.noise.level}};
            break;
        case radar::NoiseModel::Kind::gaussian:
            noise = {{"kind", "gaussian"}, {"sigma", cfg.noise.sigma}, {"seed", cfg.noise.seed}};
            break;
    }
    doc["noise"] = noise;

    doc["threshold"] = (cfg.threshold.kind == ThresholdSpec::Kind::absolute)
                           ? json{{"absolute", cfg.threshold.value}}
                           : json{{"relative", cfg.threshold.value}};
    doc["look_direction_deg"] = cfg.look_direction_deg;

    json outs = json::array();
    for (const auto& o : cfg.outputs) outs.push_back({{"path", o.path}, {"format", o.format}});
    doc["outputs"] = outs;
    return doc;
}

inline bool operator==(const RunConfig& a, const RunConfig& b) { return to_json(a) == to_json(b); }

/// Detection report as the structured document of the external interface.
inline json report_to_json(const radar::DetectionReport& report, const radar::ModelSelection& selection) {
    json intervals = json::array();
    for (const auto& [lo, hi] : report.intervals)
        intervals.push_back({{"start_deg", lo * 180.0 / constants::pi}, {"stop_deg", hi * 180.0 / constants::pi}});
    return json{{"threshold", report.threshold},
                {"intervals_deg", intervals},
                {"delta_degrees", report.delta * 180.0 / constants::pi},
                {"detected", report.detected},
                {"look_direction_deg", report.look_direction * 180.0 / constants::pi},
                {"model", selection.model == radar::ModelChoice::mie ? "mie" : "rgd"},
                {"validity", {{"contrast", selection.validity.contrast},
                              {"phase_shift", selection.validity.phase_shift},
                              {"valid", selection.validity.valid},
                              {"margin", selection.validity.margin}}},
                {"rationale", selection.rationale}};
}

/// SPP sweep configuration (spp subcommand document).
struct SppConfig {
    spp::Interface interface;
    double omega_start = 0.0, omega_stop = 0.0;
    int count = 0;
    spp::DispersionMode mode = spp::DispersionMode::standard;
};

inline SppConfig parse_spp_config(const json& doc) {
    detail::check_keys(doc, "", {"metal", "dielectric_eps", "omega_grid", "dispersion"});
    SppConfig cfg;
    const json& metal = detail::require(doc, "", "metal");
    detail::check_keys(metal, "/metal", {"plasma_frequency_rad_s", "damping_rad_s", "eps_inf"});
    cfg.interface.metal.plasma_frequency = detail::number(metal, "/metal", "plasma_frequency_rad_s");
    cfg.interface.metal.damping = detail::number_or(metal, "/metal", "damping_rad_s", 0.0);
    cfg.interface.metal.eps_inf = detail::number_or(metal, "/metal", "eps_inf", 1.0);
    cfg.interface.eps_dielectric = detail::number(doc, "", "dielectric_eps");
    const json& grid = detail::require(doc, "", "omega_grid");
    detail::check_keys(grid, "/omega_grid", {"start_rad_s", "stop_rad_s", "count"});
    cfg.omega_start = detail::number(grid, "/omega_grid", "start_rad_s");
    cfg.omega_stop = detail::number(grid, "/omega_grid", "stop_rad_s");
    cfg.count = detail::integer(grid, "/omega_grid", "count");
    if (cfg.count < 2 || !(cfg.omega_start < cfg.omega_stop) || !(cfg.omega_start > 0.0))
        throw validation_error("config: /omega_grid must satisfy 0 < start < stop, count >= 2");
    const std::string mode = detail::text_or(doc, "", "dispersion", "standard");
    if (mode == "standard")
        cfg.mode = spp::DispersionMode::standard;
    else if (mode == "as_printed")
        cfg.mode = spp::DispersionMode::as_printed;
    else
        throw validation_error("config: unknown dispersion mode '" + mode + "'");
    cfg.interface.validate();
    return cfg;
}

/// Antenna pattern configuration (antenna subcommand document).
struct AntennaConfig {
    std::string element = "dipole"; // "dipole" | "isotropic"
    bool has_array = false;
    antenna::ArraySpec array;
    GridSpec grid;
};

inline AntennaConfig parse_antenna_config(const json& doc) {
    detail::check_keys(doc, "", {"element", "array", "grid"});
    AntennaConfig cfg;
    cfg.element = detail::text_or(doc, "", "element", "dipole");
    if (cfg.element != "dipole" && cfg.element != "isotropic")
        throw validation_error("config: unknown element '" + cfg.element + "'");
    if (doc.contains("array")) {
        const json& a = doc.at("array");
        detail::check_keys(a, "/array",
                           {"count", "wavelength_m", "spacing_m", "hansen_woodyard", "progressive_phase_rad",
                            "end_fire"});
        cfg.has_array = true;
        cfg.array.count = detail::integer(a, "/array", "count");
        cfg.array.wavelength = detail::number(a, "/array", "wavelength_m");
        const bool hw = a.contains("hansen_woodyard") && a.at("hansen_woodyard").is_boolean() &&
                        a.at("hansen_woodyard").get<bool>();
        if (hw == a.contains("spacing_m"))
            throw validation_error("config: /array needs exactly one of spacing_m or hansen_woodyard");
        cfg.array.spacing = hw ? antenna::hansen_woodyard_spacing(cfg.array.count, cfg.array.wavelength)
                               : detail::number(a, "/array", "spacing_m");
        const bool end_fire =
            a.contains("end_fire") && a.at("end_fire").is_boolean() && a.at("end_fire").get<bool>();
        if (end_fire == a.contains("progressive_phase_rad"))
            throw validation_error("config: /array needs exactly one of progressive_phase_rad or end_fire");
        cfg.array.progressive_phase = end_fire
                                          ? -2.0 * constants::pi / cfg.array.wavelength * cfg.array.spacing
                                          : detail::number(a, "/array", "progressive_phase_rad");
        cfg.array.validate();
    }
    if (doc.contains("grid")) {
        const json& g = doc.at("grid");
        detail::check_keys(g, "/grid", {"start_deg", "stop_deg", "count"});
        cfg.grid.start_deg = detail::number(g, "/grid", "start_deg");
        cfg.grid.stop_deg = detail::number(g, "/grid", "stop_deg");
        cfg.grid.count = detail::integer(g, "/grid", "count");
    }
    cfg.grid.validate();
    return cfg;
}

/// Photodetector transient configuration (pd subcommand document).
struct PdConfig {
    pd::RcePdParams params;
    double incident_power = 0.0;
    double t_start = 0.0, t_stop = 0.0;
    int count = 0;
    pd::ExponentGrouping grouping = pd::ExponentGrouping::drift_inside;
    double rc_time_constant = 0.0; // 0 disables the optional filter
};

inline PdConfig parse_pd_config(const json& doc) {
    detail::check_keys(doc, "", {"params", "incident_power_w", "time_grid", "grouping", "rc_time_constant_s"});
    PdConfig cfg;
    const json& p = detail::require(doc, "", "params");
    detail::check_keys(p, "/params",
                       {"x_a_m", "w_n_m", "w_p_m", "v_n_m_s", "v_p_m_s", "alpha_eff_per_m", "mu_f", "mu_b",
                        "frequency_hz"});
    cfg.params.x_a = detail::number(p, "/params", "x_a_m");
    cfg.params.w_n = detail::number(p, "/params", "w_n_m");
    cfg.params.w_p = detail::number(p, "/params", "w_p_m");
    cfg.params.v_n = detail::number(p, "/params", "v_n_m_s");
    cfg.params.v_p = detail::number(p, "/params", "v_p_m_s");
    cfg.params.alpha_eff = detail::number(p, "/params", "alpha_eff_per_m");
    cfg.params.mu_f = detail::number(p, "/params", "mu_f");
    cfg.params.mu_b = detail::number(p, "/params", "mu_b");
    cfg.params.nu = detail::number(p, "/params", "frequency_hz");
    cfg.params.validate();

    cfg.incident_power = detail::number(doc, "", "incident_power_w");
    if (!(cfg.incident_power >= 0.0)) throw validation_error("config: incident power must be >= 0");

    const json& grid = detail::require(doc, "", "time_grid");
    detail::check_keys(grid, "/time_grid", {"start_s", "stop_s", "count"});
    cfg.t_start = detail::number(grid, "/time_grid", "start_s");
    cfg.t_stop = detail::number(grid, "/time_grid", "stop_s");
    cfg.count = detail::integer(grid, "/time_grid", "count");
    if (cfg.count < 2 || !(cfg.t_start < cfg.t_stop))
        throw validation_error("config: /time_grid must satisfy start < stop, count >= 2");

    const std::string grouping = detail::text_or(doc, "", "grouping", "standard");
    if (grouping == "standard")
        cfg.grouping = pd::ExponentGrouping::drift_inside;
    else if (grouping == "alternate")
        cfg.grouping = pd::ExponentGrouping::drift_outside;
    else
        throw validation_error("config: unknown grouping '" + grouping + "'");

    cfg.rc_time_constant = detail::number_or(doc, "", "rc_time_constant_s", 0.0);
    if (cfg.rc_time_constant < 0.0) throw validation_error("config: rc_time_constant_s must be >= 0");
    return cfg;
}

} // namespace nanoradar::io
