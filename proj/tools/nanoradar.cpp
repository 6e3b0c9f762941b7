// Command-line front end: config-driven scattering, dispersion, antenna and
// photodetector runs with CSV / JSON emission.
#include <chrono>
#include <complex>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nanoradar/antenna.hpp"
#include "nanoradar/config.hpp"
#include "nanoradar/csv.hpp"
#include "nanoradar/mie.hpp"
#include "nanoradar/quadrature.hpp"
#include "nanoradar/radar.hpp"
#include "nanoradar/rgd.hpp"
#include "nanoradar/spp.hpp"

namespace {

using namespace nanoradar;
using json = nlohmann::json;

constexpr int exit_ok = 0;
constexpr int exit_validation = 2;
constexpr int exit_numerical = 3;

struct CommonOptions {
    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    std::string grid_override;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonOptions& opt, const char* default_format) {
    opt.format = default_format;
    cmd->add_option("--config", opt.config_path, "Path to the JSON run configuration");
    cmd->add_option("--out", opt.out_path, "Output path (stdout when omitted)");
    cmd->add_option("--format", opt.format, "Output format: csv or structured")
        ->check(CLI::IsMember({"csv", "structured"}));
    cmd->add_option("--grid", opt.grid_override, "Angle grid override start:stop:count (degrees)");
    cmd->add_option("--seed", opt.seed, "Noise seed override")->each([&opt](const std::string&) {
        opt.seed_set = true;
    });
}

json load_config(const std::string& path) {
    if (path.empty()) throw validation_error("config: --config is required for this subcommand");
    std::ifstream in(path);
    if (!in) throw validation_error("config: cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    json doc;
    try {
        doc = json::parse(buffer.str());
    } catch (const json::parse_error& e) {
        throw validation_error(std::string("config: malformed document: ") + e.what());
    }
    return doc;
}

io::GridSpec parse_grid_override(const std::string& text) {
    io::GridSpec grid;
    const auto first = text.find(':');
    const auto second = text.find(':', first + 1);
    if (first == std::string::npos || second == std::string::npos)
        throw validation_error("grid: expected start:stop:count");
    try {
        grid.start_deg = std::stod(text.substr(0, first));
        grid.stop_deg = std::stod(text.substr(first + 1, second - first - 1));
        grid.count = std::stoi(text.substr(second + 1));
    } catch (const std::exception&) {
        throw validation_error("grid: expected numeric start:stop:count");
    }
    grid.validate();
    return grid;
}

void write_text(const std::string& path, const std::string& body) {
    if (path.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw validation_error("output: cannot open '" + path + "'");
    out << body;
}

std::string pattern_csv(const ScatteringPattern& pattern) {
    std::vector<double> deg(pattern.theta.size());
    for (size_t i = 0; i < deg.size(); ++i) deg[i] = pattern.theta[i] * 180.0 / constants::pi;
    std::ostringstream os;
    const std::vector<std::string> header{"angle_deg", "intensity"};
    const std::vector<std::vector<double>> cols{deg, pattern.intensity};
    io::write_csv(os, header, cols);
    return os.str();
}

json pattern_json(const ScatteringPattern& pattern) {
    std::vector<double> deg(pattern.theta.size());
    for (size_t i = 0; i < deg.size(); ++i) deg[i] = pattern.theta[i] * 180.0 / constants::pi;
    return json{{"model", to_string(pattern.model)},
                {"wavelength_nm", pattern.wavelength_vacuum * 1e9},
                {"medium_index", pattern.medium_index},
                {"polarization", to_string(pattern.polarization)},
                {"rgd_validity_warning", pattern.rgd_validity_warning},
                {"angles_deg", deg},
                {"intensity", pattern.intensity}};
}

void emit_pattern(const ScatteringPattern& pattern, const CommonOptions& opt) {
    if (opt.format == "csv")
        write_text(opt.out_path, pattern_csv(pattern));
    else
        write_text(opt.out_path, pattern_json(pattern).dump(2) + "\n");
}

io::RunConfig load_run_config(const CommonOptions& opt) {
    auto cfg = io::parse_config(load_config(opt.config_path));
    if (!opt.grid_override.empty()) cfg.grid = parse_grid_override(opt.grid_override);
    if (opt.seed_set) cfg.noise.seed = opt.seed;
    return cfg;
}

int run_mie(const CommonOptions& opt) {
    const auto cfg = load_run_config(opt);
    const auto sphere = cfg.scene.as_sphere();
    const auto pattern = mie::mie_intensity_pattern(sphere, cfg.scene.medium.refractive_index,
                                                    cfg.scene.wavelength_vacuum(), cfg.grid.radians(),
                                                    cfg.scene.source_polarization());
    emit_pattern(pattern, opt);
    return exit_ok;
}

int run_rgd(const CommonOptions& opt) {
    const auto cfg = load_run_config(opt);
    const auto region = cfg.scene.as_region();
    const auto pattern = rgd::rgd_intensity_pattern(region, cfg.scene.medium.refractive_index,
                                                    cfg.scene.wavelength_vacuum(), cfg.grid.radians(),
                                                    cfg.scene.source_polarization());
    emit_pattern(pattern, opt);
    return exit_ok;
}

int run_radar(const CommonOptions& opt) {
    const auto cfg = load_run_config(opt);
    const auto grid = cfg.grid.radians();

    const auto selection = radar::select_model(cfg.scene);
    const auto echo = radar::echo_pattern(cfg.scene, grid, cfg.scene.source_polarization(), selection.model);
    const auto noisy = radar::apply_noise(echo, cfg.noise);
    const double threshold = cfg.threshold.resolve(noisy);
    const auto report = radar::threshold_detect(noisy, threshold, cfg.look_direction_deg * constants::pi / 180.0);

    json report_doc = io::report_to_json(report, selection);
    report_doc["scenario"] = cfg.scenario;

    auto outputs = cfg.outputs;
    outputs.push_back({opt.out_path, opt.format});
    for (const auto& sink : outputs) {
        if (sink.format == "csv")
            write_text(sink.path, pattern_csv(noisy));
        else
            write_text(sink.path, report_doc.dump(2) + "\n");
    }
    std::cerr << "radar: model=" << (selection.model == radar::ModelChoice::mie ? "mie" : "rgd")
              << " detected=" << (report.detected ? "true" : "false")
              << " delta_deg=" << io::format_double(report.delta * 180.0 / constants::pi)
              << " intervals=" << report.intervals.size() << '\n';
    return exit_ok;
}

int run_spp(const CommonOptions& opt) {
    const auto cfg = io::parse_spp_config(load_config(opt.config_path));
    std::vector<double> omega(static_cast<size_t>(cfg.count)), re_k(omega.size()), im_k(omega.size());
    for (int i = 0; i < cfg.count; ++i) {
        const double w = cfg.omega_start + (cfg.omega_stop - cfg.omega_start) * i / (cfg.count - 1.0);
        const auto k = spp::spp_wavevector(cfg.interface, w, cfg.mode);
        omega[static_cast<size_t>(i)] = w;
        re_k[static_cast<size_t>(i)] = k.real();
        im_k[static_cast<size_t>(i)] = k.imag();
    }
    if (opt.format == "csv") {
        std::ostringstream os;
        const std::vector<std::string> header{"omega", "re_k", "im_k"};
        const std::vector<std::vector<double>> cols{omega, re_k, im_k};
        io::write_csv(os, header, cols);
        write_text(opt.out_path, os.str());
    } else {
        write_text(opt.out_path, json{{"omega", omega}, {"re_k", re_k}, {"im_k", im_k}}.dump(2) + "\n");
    }
    return exit_ok;
}

int run_antenna(const CommonOptions& opt) {
    const auto cfg = io::parse_antenna_config(load_config(opt.config_path));
    antenna::RadiationPattern element =
        (cfg.element == "dipole") ? antenna::dipole_normalized_pattern() : antenna::isotropic_pattern();
    antenna::RadiationPattern pattern =
        cfg.has_array ? antenna::uniform_array_pattern(cfg.array, element) : element;

    const auto angles = cfg.grid.radians();
    std::vector<double> deg(angles.size()), density(angles.size());
    for (size_t i = 0; i < angles.size(); ++i) {
        deg[i] = angles[i] * 180.0 / constants::pi;
        density[i] = pattern(angles[i], 0.0); // phi = 0 cut
    }
    if (opt.format == "csv") {
        std::ostringstream os;
        const std::vector<std::string> header{"angle_deg", "power_density"};
        const std::vector<std::vector<double>> cols{deg, density};
        io::write_csv(os, header, cols);
        write_text(opt.out_path, os.str());
    } else {
        const double p_rad = antenna::integrate_radiated_power(pattern);
        write_text(opt.out_path,
                   json{{"angles_deg", deg},
                        {"power_density", density},
                        {"radiated_power", p_rad},
                        {"peak_directivity",
                         4.0 * constants::pi * *std::max_element(density.begin(), density.end()) / p_rad}}
                           .dump(2) +
                       "\n");
    }
    return exit_ok;
}

int run_pd(const CommonOptions& opt) {
    const auto cfg = io::parse_pd_config(load_config(opt.config_path));
    std::vector<double> t_grid(static_cast<size_t>(cfg.count));
    for (int i = 0; i < cfg.count; ++i)
        t_grid[static_cast<size_t>(i)] = cfg.t_start + (cfg.t_stop - cfg.t_start) * i / (cfg.count - 1.0);
    auto trace = pd::photocurrent_series(t_grid, cfg.incident_power, cfg.params, cfg.grouping);
    if (cfg.rc_time_constant > 0.0) trace = pd::apply_rc_lowpass(trace, cfg.rc_time_constant);

    if (opt.format == "csv") {
        std::ostringstream os;
        const std::vector<std::string> header{"t_s", "i_a"};
        const std::vector<std::vector<double>> cols{trace.times, trace.currents};
        io::write_csv(os, header, cols);
        write_text(opt.out_path, os.str());
    } else {
        write_text(opt.out_path, json{{"t_s", trace.times},
                                      {"i_a", trace.currents},
                                      {"window_boundaries_s", trace.window_boundaries}}
                                     .dump(2) +
                                     "\n");
    }
    return exit_ok;
}

int run_compare(const CommonOptions& opt, bool with_timing) {
    // Cross-model accuracy (and optionally runtime) over a size-parameter
    // sweep; timings are off by default so outputs stay bit-reproducible.
    std::vector<double> x_values{0.1, 0.5, 1.0};
    std::complex<double> m(1.05, 0.0);
    double wavelength = 428e-9;
    if (!opt.config_path.empty()) {
        const json doc = load_config(opt.config_path);
        io::detail::check_keys(doc, "", {"x_values", "rri", "wavelength_m"});
        if (doc.contains("x_values")) {
            x_values.clear();
            for (const auto& v : doc.at("x_values")) x_values.push_back(io::detail::number(v, "/x_values"));
        }
        if (doc.contains("rri")) m = io::detail::complex_value(doc, "", "rri");
        if (doc.contains("wavelength_m")) wavelength = io::detail::number(doc, "", "wavelength_m");
    }

    const int grid_count = 721;
    std::vector<double> grid(grid_count);
    for (int i = 0; i < grid_count; ++i) grid[static_cast<size_t>(i)] = constants::pi * i / (grid_count - 1.0);
    const auto& [mu, w] = quadrature::gauss_legendre(512);

    std::vector<double> col_x, col_err, col_power, col_mie_us, col_rgd_us;
    for (double x : x_values) {
        const double radius = x * wavelength / (2.0 * constants::pi);
        const auto region = rgd::make_sphere_region(radius, m);
        const mie::Sphere sphere{radius, m, {0, 0, 0}};

        const auto t0 = std::chrono::steady_clock::now();
        const auto mie_pattern = mie::mie_intensity_pattern(sphere, 1.0, wavelength, grid, Polarization::unpolarized);
        const auto t1 = std::chrono::steady_clock::now();
        const auto rgd_pattern = rgd::rgd_intensity_pattern(region, 1.0, wavelength, grid, Polarization::unpolarized);
        const auto t2 = std::chrono::steady_clock::now();

        double max_rel = 0.0;
        for (size_t i = 0; i < grid.size(); ++i)
            if (mie_pattern.intensity[i] > 0.0)
                max_rel = std::max(max_rel, std::abs(mie_pattern.intensity[i] - rgd_pattern.intensity[i]) /
                                                mie_pattern.intensity[i]);

        const auto coeffs = mie::lorenz_mie_coefficients(x, m, mie::truncation_order(x));
        double p_mie = 0.0, p_rgd = 0.0;
        for (size_t i = 0; i < mu.size(); ++i) {
            const double theta = std::acos(mu[i]);
            const auto [s1m, s2m] = mie::scattering_amplitudes(coeffs, theta);
            const auto [s1r, s2r] = rgd::rgd_amplitudes(region, 1.0, wavelength, theta);
            p_mie += w[i] * 0.5 * (std::norm(s1m) + std::norm(s2m));
            p_rgd += w[i] * 0.5 * (std::norm(s1r) + std::norm(s2r));
        }

        col_x.push_back(x);
        col_err.push_back(max_rel);
        col_power.push_back(std::abs(p_mie - p_rgd) / p_mie);
        col_mie_us.push_back(std::chrono::duration<double, std::micro>(t1 - t0).count());
        col_rgd_us.push_back(std::chrono::duration<double, std::micro>(t2 - t1).count());
    }

    std::ostringstream os;
    std::vector<std::string> header{"x", "max_rel_intensity_error", "integrated_power_rel_error"};
    std::vector<std::vector<double>> cols{col_x, col_err, col_power};
    if (with_timing) {
        header.insert(header.end(), {"mie_us", "rgd_us"});
        cols.insert(cols.end(), {col_mie_us, col_rgd_us});
    }
    io::write_csv(os, header, cols);
    write_text(opt.out_path, os.str());
    return exit_ok;
}

int run_reproduce_fig4(const CommonOptions& opt) {
    // Both panels over the documented contrast set 1.05 .. 1.20.
    const std::vector<double> rris{1.05, 1.10, 1.15, 1.20};
    io::GridSpec grid;
    if (!opt.grid_override.empty()) grid = parse_grid_override(opt.grid_override);
    const auto angles = grid.radians();
    std::vector<double> deg(angles.size());
    for (size_t i = 0; i < angles.size(); ++i) deg[i] = angles[i] * 180.0 / constants::pi;

    const std::vector<std::string> header{"angle_deg", "rri_1_05", "rri_1_10", "rri_1_15", "rri_1_20"};
    const std::string dir = opt.out_path.empty() ? "." : opt.out_path;

    std::vector<std::vector<double>> mie_cols{deg}, rgd_cols{deg};
    for (double rri : rris) {
        const mie::Sphere big{500e-9, {rri, 0.0}, {0, 0, 0}};
        mie_cols.push_back(mie::mie_intensity_pattern(big, 1.0, 428e-9, angles, Polarization::unpolarized).intensity);
        const auto small = rgd::make_sphere_region(50e-9, {rri, 0.0});
        rgd_cols.push_back(
            rgd::rgd_intensity_pattern(small, 1.0, 428e-9, angles, Polarization::unpolarized).intensity);
    }
    {
        std::ostringstream os;
        io::write_csv(os, header, mie_cols);
        write_text(dir + "/fig4_mie.csv", os.str());
    }
    {
        std::ostringstream os;
        io::write_csv(os, header, rgd_cols);
        write_text(dir + "/fig4_rgd.csv", os.str());
    }
    std::cerr << "reproduce-fig4: wrote " << dir << "/fig4_mie.csv and " << dir << "/fig4_rgd.csv\n";
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nanoscale-radar scattering and detection toolkit"};
    app.require_subcommand(1);

    CommonOptions mie_opt, rgd_opt, radar_opt, spp_opt, antenna_opt, pd_opt, compare_opt, fig4_opt;
    bool with_timing = false;

    add_common(app.add_subcommand("mie", "Single-sphere Lorenz-Mie intensity pattern"), mie_opt, "csv");
    add_common(app.add_subcommand("rgd", "Rayleigh-Gans-Debye intensity pattern"), rgd_opt, "csv");
    add_common(app.add_subcommand("radar", "Full detection pipeline with report emission"), radar_opt, "structured");
    add_common(app.add_subcommand("spp", "Surface-plasmon dispersion sweep"), spp_opt, "csv");
    add_common(app.add_subcommand("antenna", "Radiation pattern of a dipole or array"), antenna_opt, "csv");
    add_common(app.add_subcommand("pd", "Photodetector transient trace"), pd_opt, "csv");
    auto* compare_cmd = app.add_subcommand("compare", "Cross-model accuracy sweep (RGD vs Mie)");
    add_common(compare_cmd, compare_opt, "csv");
    compare_cmd->add_flag("--with-timing", with_timing, "Append per-model runtime columns");
    add_common(app.add_subcommand("reproduce-fig4", "Emit both scattering panels for the documented contrast set"),
               fig4_opt, "csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_validation;
    }

    try {
        if (app.got_subcommand("mie")) return run_mie(mie_opt);
        if (app.got_subcommand("rgd")) return run_rgd(rgd_opt);
        if (app.got_subcommand("radar")) return run_radar(radar_opt);
        if (app.got_subcommand("spp")) return run_spp(spp_opt);
        if (app.got_subcommand("antenna")) return run_antenna(antenna_opt);
        if (app.got_subcommand("pd")) return run_pd(pd_opt);
        if (app.got_subcommand("compare")) return run_compare(compare_opt, with_timing);
        if (app.got_subcommand("reproduce-fig4")) return run_reproduce_fig4(fig4_opt);
    } catch (const domain_error& e) {
        std::cerr << "error (validation): " << e.what() << '\n';
        return exit_validation;
    } catch (const numerical_error& e) {
        std::cerr << "error (numerical): " << e.what() << '\n';
        return exit_numerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_numerical;
    }
    return exit_ok;
}
