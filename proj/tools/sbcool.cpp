// sbcool: rate-equation simulation and fitting for resolved-sideband cavity
// cooling of a single trapped ion.
//
//   sbcool steady-state --params <file> [--format text|csv|json]
//   sbcool simulate     --params <file> --out <dir> [--seed N] [--noise k:s] ...
//   sbcool spectrum     --params <file> --out <dir> [--phi ...] ...
//   sbcool fit          saturation|spectrum|dynamics ...
//   sbcool validate     [--params <file>]
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 validation failure.

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>

#include "sbcool/constants.hpp"
#include "sbcool/csv.hpp"
#include "sbcool/dataset.hpp"
#include "sbcool/errors.hpp"
#include "sbcool/fitkit.hpp"
#include "sbcool/fock_oracle.hpp"
#include "sbcool/manifest.hpp"
#include "sbcool/params_io.hpp"
#include "sbcool/rng.hpp"
#include "sbcool/spectrum.hpp"
#include "sbcool/svg.hpp"
#include "sbcool/synth.hpp"
#include "sbcool/validate.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace sbcool;

namespace {

constexpr int exit_ok = 0, exit_usage = 1, exit_data = 2, exit_validation = 3;

struct SteadyStateReport {
    double n_inf, w, r_minus, r_plus, n_plus, ld_product;
    bool ld_valid;
};

SteadyStateReport steady_state_report(const PhysicalParams& p) {
    SteadyStateReport r{};
    const Rates rates = transition_rates(p);
    r.n_inf = steady_state_n(p);
    r.w = cooling_rate_constant(p);
    r.r_minus = rates.r_minus;
    r.r_plus = rates.r_plus;
    r.n_plus = rates.n_plus;
    r.ld_product = p.eta_ld_sq * r.n_inf;
    r.ld_valid = r.ld_product < 0.1;  // <n> well below the 1/eta_ld_sq bound
    return r;
}

void print_steady_state(const SteadyStateReport& r, const std::string& format) {
    const std::string status = r.ld_valid ? "ok" : "marginal";
    if (format == "json") {
        ordered_json j;
        j["n_inf"] = r.n_inf;
        j["w"] = r.w;
        j["r_minus"] = r.r_minus;
        j["r_plus"] = r.r_plus;
        j["n_plus"] = r.n_plus;
        j["lamb_dicke_product"] = r.ld_product;
        j["lamb_dicke_status"] = status;
        std::cout << j.dump(2) << "\n";
    } else if (format == "csv") {
        std::cout << "key,value\n"
                  << "n_inf," << format_double(r.n_inf) << "\n"
                  << "w," << format_double(r.w) << "\n"
                  << "r_minus," << format_double(r.r_minus) << "\n"
                  << "r_plus," << format_double(r.r_plus) << "\n"
                  << "n_plus," << format_double(r.n_plus) << "\n"
                  << "lamb_dicke_product," << format_double(r.ld_product) << "\n"
                  << "lamb_dicke_status," << status << "\n";
    } else {
        std::cout << "steady-state occupation n_inf : " << format_double(r.n_inf) << "\n"
                  << "cooling rate constant W [1/s] : " << format_double(r.w) << "\n"
                  << "r_minus [1/s]                 : " << format_double(r.r_minus) << "\n"
                  << "r_plus [1/s]                  : " << format_double(r.r_plus) << "\n"
                  << "n_plus [quanta/s]             : " << format_double(r.n_plus) << "\n"
                  << "eta_ld_sq * n_inf             : " << format_double(r.ld_product)
                  << " (" << status << ")\n";
    }
}

void print_fit_result(const FitResult& res) {
    std::cout << "  parameter        value            1-sigma\n";
    for (std::size_t i = 0; i < res.parameters.size(); ++i) {
        std::cout << "  " << res.parameter_names[i];
        for (std::size_t k = res.parameter_names[i].size(); k < 17; ++k) std::cout << ' ';
        std::cout << format_double(res.parameters[i]) << "  +-  "
                  << format_double(res.uncertainty(i)) << "\n";
    }
    for (std::size_t i = 0; i < res.derived_names.size(); ++i)
        std::cout << "  " << res.derived_names[i] << " (derived)" << "  "
                  << format_double(res.derived_values[i]) << "  +-  "
                  << format_double(res.derived_sigmas[i]) << "\n";
    std::cout << "  reduced chi^2    " << format_double(res.reduced_chi_sq) << "\n"
              << "  iterations       " << res.n_iterations << "\n"
              << "  converged        " << (res.converged ? "yes" : "no") << "\n";
    for (int idx : res.active_bounds)
        std::cout << "  note: " << res.parameter_names[idx] << " pinned at a bound\n";
    for (const auto& w : res.warnings) std::cout << "  warning: " << w << "\n";
}

void write_fit_result(const FitResult& res, const fs::path& file) {
    ordered_json j;
    j["parameter_names"] = res.parameter_names;
    j["values"] = res.parameters;
    ordered_json unc = ordered_json::array();
    for (std::size_t i = 0; i < res.parameters.size(); ++i) unc.push_back(res.uncertainty(i));
    j["uncertainties"] = unc;
    j["covariance_row_major"] = res.covariance;
    j["reduced_chi_sq"] = res.reduced_chi_sq;
    j["n_iterations"] = res.n_iterations;
    j["converged"] = res.converged;
    j["derived_names"] = res.derived_names;
    j["derived_values"] = res.derived_values;
    j["derived_uncertainties"] = res.derived_sigmas;
    j["warnings"] = res.warnings;
    std::ofstream out(file, std::ios::binary);
    if (!out) throw DataError("cannot write fit result: " + file.string());
    out << j.dump(2) << "\n";
    if (!out) throw DataError("write failed: " + file.string());
}

double parse_phi(const std::string& text) {
    if (text == "antinode") return 0.0;
    if (text == "node") return constants::pi / 2.0;
    if (text == "mid") return constants::pi / 4.0;
    try {
        return std::stod(text);
    } catch (const std::exception&) {
        throw UsageError("--phi: expected a number in radians or node|antinode|mid");
    }
}

int cmd_steady_state(const std::string& params_file, const std::string& format) {
    const ParameterFile pf = load_parameter_file(params_file);
    try {
        print_steady_state(steady_state_report(pf.params), format);
    } catch (const DivergenceError&) {
        std::cerr << "error: eta = 0 -- the occupation diverges; no steady state exists\n";
        return exit_data;
    }
    return exit_ok;
}

int cmd_simulate(const std::string& params_file, const std::string& out_dir,
                 std::uint64_t seed, const std::string& noise_text, double n0, int points,
                 double t_max, bool with_oracle, bool svg) {
    const ParameterFile pf = load_parameter_file(params_file);
    const PhysicalParams& p = pf.params;
    const NoiseSpec noise = parse_noise_spec(noise_text);
    fs::create_directories(out_dir);

    const double w = cooling_rate_constant(p);
    const double n_inf = steady_state_n(p);
    const Rates carrier_rates = transition_rates(at_branch(p, Branch::carrier));
    const double carrier_slope = carrier_rates.r_plus + carrier_rates.n_plus;

    // branch spans: red shows the full approach to n_inf, heating branches
    // stop where the model leaves the Lamb-Dicke window
    auto span_for = [&](Branch b) {
        if (t_max > 0.0) return t_max;
        switch (b) {
            case Branch::red: return 5.0 / w;
            case Branch::carrier: return (50.0 - n0) / carrier_slope;
            case Branch::blue:
                return std::log((51.0 + n_inf) / (n0 + n_inf + 1.0)) / w;
        }
        return 5.0 / w;
    };

    CsvTable plot;
    plot.columns = {"branch", "t_s", "model_mean_n", "oracle_mean_n"};
    std::vector<SvgSeries> svg_series;
    const char* colors[3] = {"#d62728", "#2ca02c", "#1f77b4"};

    int stream = 1;
    for (Branch b : {Branch::red, Branch::carrier, Branch::blue}) {
        const std::vector<double> grid = linspace(0.0, span_for(b), points);
        const CoolingCurve model = mean_n_trajectory(p, b, n0, grid);

        std::vector<double> oracle(grid.size(), std::nan(""));
        if (with_oracle) {
            const PhysicalParams pb = at_branch(p, b);
            const int n_max = default_truncation(p);
            const RateMatrix m = build_rate_matrix(pb, n_max);
            const int start = static_cast<int>(std::lround(n0));
            FockDistribution d = delta_distribution(std::min(start, n_max), n_max);
            double t_prev = 0.0;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                d = evolve_distribution(m, d, grid[i] - t_prev, 1.0);
                t_prev = grid[i];
                oracle[i] = mean_n(d);
            }
        }
        for (std::size_t i = 0; i < grid.size(); ++i)
            plot.add_row({to_string(b), grid[i], model.mean_n[i], oracle[i]});

        const std::uint64_t branch_seed = rng::splitmix64(seed) ^ static_cast<std::uint64_t>(stream);
        Dataset d = synth_dynamics_branch(p, b, n0, grid, noise, branch_seed);
        write_dataset_csv(d, fs::path(out_dir) / (to_string(b) + ".csv"));

        SvgSeries s;
        s.label = to_string(b);
        s.color = colors[stream - 1];
        s.x = grid;
        s.y = model.mean_n;
        svg_series.push_back(s);
        ++stream;
    }
    write_csv(plot, fs::path(out_dir) / "dynamics_plot.csv");
    if (svg)
        write_svg_plot(fs::path(out_dir) / "dynamics.svg", "cavity cooling dynamics",
                       "t [s]", "<n>", svg_series);

    ordered_json cfg;
    cfg["scenario"] = "dynamics";
    cfg["params_file"] = fs::path(params_file).filename().string();
    cfg["noise"] = to_string(noise);
    cfg["n0"] = n0;
    cfg["points"] = points;
    cfg["t_max"] = t_max;
    cfg["oracle"] = with_oracle;
    RunManifest manifest =
        make_manifest("simulate", cfg.dump(), seed, {fs::path(params_file)});
    manifest.write(fs::path(out_dir) / "manifest.json");

    std::cout << "simulate: wrote dynamics_plot.csv, red/carrier/blue datasets and manifest to "
              << out_dir << "\n";
    return exit_ok;
}

int cmd_spectrum(const std::string& params_file, const std::string& out_dir,
                 std::uint64_t seed, const std::string& noise_text,
                 const std::string& phi_text, double span_hz, int points, int max_order,
                 bool svg) {
    const ParameterFile pf = load_parameter_file(params_file);
    if (!pf.spectrum)
        throw DataError(params_file + ": no spectrum block; cannot synthesize a spectrum");
    SpectrumConfig cfg = *pf.spectrum;
    if (!phi_text.empty()) cfg.geometry.standing_wave_phase = parse_phi(phi_text);
    const NoiseSpec noise = parse_noise_spec(noise_text);
    fs::create_directories(out_dir);

    const std::vector<SpectrumLine> lines = line_weights(cfg.geometry, max_order);
    double span = constants::angular(span_hz);
    if (span_hz <= 0.0) {
        for (const auto& line : lines) span = std::max(span, std::abs(line.offset));
        span = 1.15 * span + 2.0 * cfg.total_linewidth;
    }
    const std::vector<double> grid = linspace(-span, +span, points);
    const SpectrumProfile prof =
        spectrum_profile(lines, cfg.total_linewidth, cfg.amplitude_scale, grid);

    CsvTable line_table;
    line_table.columns = {"offset_hz", "weight", "dnx", "dny", "dnz"};
    for (const auto& line : lines) {
        if (line.weight == 0.0) continue;  // parity-forbidden at this phase
        line_table.add_row({constants::ordinary(line.offset), line.weight,
                            static_cast<long>(line.order[0]), static_cast<long>(line.order[1]),
                            static_cast<long>(line.order[2])});
    }
    write_csv(line_table, fs::path(out_dir) / "lines.csv");

    CsvTable prof_table;
    prof_table.columns = {"delta_lc_hz", "rate"};
    for (std::size_t i = 0; i < prof.detuning.size(); ++i)
        prof_table.add_row({constants::ordinary(prof.detuning[i]), prof.rate[i]});
    write_csv(prof_table, fs::path(out_dir) / "profile.csv");

    if (noise.kind != NoiseSpec::Kind::none) {
        Dataset d = synth_spectrum(cfg, max_order, grid, noise, seed);
        // on disk the detuning axis is ordinary Hz, like every user-facing file
        for (auto& pt : d.points) pt.x = constants::ordinary(pt.x);
        write_dataset_csv(d, fs::path(out_dir) / "dataset.csv");
    }
    if (svg) {
        SvgSeries s;
        s.label = "model";
        for (std::size_t i = 0; i < prof.detuning.size(); ++i) {
            s.x.push_back(constants::ordinary(prof.detuning[i]));
            s.y.push_back(prof.rate[i]);
        }
        write_svg_plot(fs::path(out_dir) / "spectrum.svg", "cavity emission spectrum",
                       "delta_lc [Hz]", "rate [photons/s]", {s});
    }

    ordered_json jcfg;
    jcfg["scenario"] = "spectrum";
    jcfg["params_file"] = fs::path(params_file).filename().string();
    jcfg["noise"] = to_string(noise);
    jcfg["phi"] = cfg.geometry.standing_wave_phase;
    jcfg["span_hz"] = span_hz;
    jcfg["points"] = points;
    jcfg["max_order"] = max_order;
    RunManifest manifest =
        make_manifest("spectrum", jcfg.dump(), seed, {fs::path(params_file)});
    manifest.write(fs::path(out_dir) / "manifest.json");

    std::cout << "spectrum: wrote lines.csv, profile.csv and manifest to " << out_dir << "\n";
    return exit_ok;
}

int cmd_validate(const std::string& params_file) {
    std::optional<PhysicalParams> params;
    if (!params_file.empty()) params = load_parameter_file(params_file).params;
    const auto checks = run_validation(params);
    for (const auto& c : checks) {
        const char* tag = c.skipped ? "SKIP" : (c.passed ? "PASS" : "FAIL");
        std::cout << "[" << tag << "] " << c.name << ": " << c.detail << "\n";
    }
    if (!all_passed(checks)) {
        std::cout << "validation FAILED\n";
        return exit_validation;
    }
    std::cout << "validation passed\n";
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"resolved-sideband cavity cooling: simulation and fitting"};
    app.require_subcommand(1);

    // steady-state
    auto* ss = app.add_subcommand("steady-state", "report n_inf, W and transition rates");
    std::string ss_params, ss_format = "text";
    ss->add_option("--params", ss_params, "parameter file")->required();
    ss->add_option("--format", ss_format, "text|csv|json")
        ->check(CLI::IsMember({"text", "csv", "json"}));

    // simulate
    auto* sim = app.add_subcommand("simulate", "closed-form + oracle cooling curves");
    std::string sim_params, sim_out = "out", sim_noise = "none";
    std::uint64_t sim_seed = 1;
    double sim_n0 = 0.0, sim_tmax = 0.0;
    int sim_points = 25;
    bool sim_no_oracle = false, sim_svg = false;
    sim->add_option("--params", sim_params, "parameter file")->required();
    sim->add_option("--out", sim_out, "output directory");
    sim->add_option("--seed", sim_seed, "RNG seed");
    sim->add_option("--noise", sim_noise, "none|gaussian:<scale>");
    sim->add_option("--n0", sim_n0, "initial occupation");
    sim->add_option("--points", sim_points, "grid points per branch")->check(CLI::Range(2, 100000));
    sim->add_option("--t-max", sim_tmax, "common span in s (default: per-branch auto)");
    sim->add_flag("--no-oracle", sim_no_oracle, "skip the distribution-evolution curves");
    sim->add_flag("--svg", sim_svg, "also write an SVG plot");

    // spectrum
    auto* spec = app.add_subcommand("spectrum", "emission line list and profile");
    std::string spec_params, spec_out = "out", spec_noise = "none", spec_phi;
    std::uint64_t spec_seed = 1;
    double spec_span_hz = 0.0;
    int spec_points = 801, spec_order = 2;
    bool spec_svg = false;
    spec->add_option("--params", spec_params, "parameter file with spectrum block")->required();
    spec->add_option("--out", spec_out, "output directory");
    spec->add_option("--seed", spec_seed, "RNG seed");
    spec->add_option("--noise", spec_noise, "none|gaussian:<frac>|poisson:<t_int_s>");
    spec->add_option("--phi", spec_phi, "standing-wave phase: radians or node|antinode|mid");
    spec->add_option("--span-hz", spec_span_hz, "half-span of the detuning grid in Hz");
    spec->add_option("--points", spec_points, "grid points")->check(CLI::Range(3, 1000000));
    spec->add_option("--max-order", spec_order, "sideband order cutoff")->check(CLI::Range(1, 2));
    spec->add_flag("--svg", spec_svg, "also write an SVG plot");

    // fit
    auto* fit = app.add_subcommand("fit", "weighted least-squares fits");
    fit->require_subcommand(1);
    auto* fsat = fit->add_subcommand("saturation", "eta / gamma_sat saturation curve");
    std::string fsat_data, fsat_out;
    bool fsat_dry = false;
    fsat->add_option("--data", fsat_data, "dataset csv")->required();
    fsat->add_option("--out", fsat_out, "output directory for fitresult.json");
    fsat->add_flag("--dry-run", fsat_dry, "validate inputs and report residual count only");

    auto* fspec = fit->add_subcommand("spectrum", "multi-Lorentzian line fit");
    std::string fspec_data, fspec_out, fspec_centers;
    double fspec_width_hz = 0.0;
    bool fspec_float_centers = false, fspec_dry = false;
    fspec->add_option("--data", fspec_data, "dataset csv (x in Hz)")->required();
    fspec->add_option("--out", fspec_out, "output directory for fitresult.json");
    fspec->add_option("--centers-hz", fspec_centers,
                      "comma-separated line centers (default: from metadata trap frequencies)");
    fspec->add_option("--width-hz", fspec_width_hz, "initial FWHM guess");
    fspec->add_flag("--float-centers", fspec_float_centers, "let all centers float");
    fspec->add_flag("--dry-run", fspec_dry, "validate inputs and report residual count only");

    auto* fdyn = fit->add_subcommand("dynamics", "simultaneous three-branch cooling fit");
    std::string fdyn_red, fdyn_carrier, fdyn_blue, fdyn_params, fdyn_out;
    bool fdyn_float_c = false, fdyn_float_next = false, fdyn_dry = false;
    fdyn->add_option("--red", fdyn_red, "red-branch dataset csv")->required();
    fdyn->add_option("--carrier", fdyn_carrier, "carrier dataset csv")->required();
    fdyn->add_option("--blue", fdyn_blue, "blue-branch dataset csv")->required();
    fdyn->add_option("--params", fdyn_params, "parameter file supplying fixed constants")
        ->required();
    fdyn->add_option("--out", fdyn_out, "output directory for fitresult.json");
    fdyn->add_flag("--float-c-factor", fdyn_float_c, "fit the recoil geometry factor too");
    fdyn->add_flag("--float-n-dot-ext", fdyn_float_next, "fit the external heating rate too");
    fdyn->add_flag("--dry-run", fdyn_dry, "validate inputs and report residual count only");

    // validate
    auto* val = app.add_subcommand("validate", "run the cross-module invariant battery");
    std::string val_params;
    val->add_option("--params", val_params, "anchor parameter file (optional)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return exit_usage;
    }

    try {
        if (*ss) return cmd_steady_state(ss_params, ss_format);
        if (*sim)
            return cmd_simulate(sim_params, sim_out, sim_seed, sim_noise, sim_n0, sim_points,
                                sim_tmax, !sim_no_oracle, sim_svg);
        if (*spec)
            return cmd_spectrum(spec_params, spec_out, spec_seed, spec_noise, spec_phi,
                                spec_span_hz, spec_points, spec_order, spec_svg);
        if (*val) return cmd_validate(val_params);

        if (*fit) {
            if (*fsat) {
                const Dataset d = read_dataset_csv(fsat_data);
                if (fsat_dry) {
                    std::cout << "dry-run: " << d.size() << " residuals, 2 parameters\n";
                    return exit_ok;
                }
                const FitResult res = fit_saturation(d);
                std::cout << "saturation fit (" << d.size() << " points)\n";
                print_fit_result(res);
                if (!fsat_out.empty()) {
                    fs::create_directories(fsat_out);
                    write_fit_result(res, fs::path(fsat_out) / "fitresult.json");
                }
                return exit_ok;
            }
            if (*fspec) {
                const Dataset d = read_dataset_csv(fspec_data);
                std::vector<double> centers;
                if (!fspec_centers.empty()) {
                    std::stringstream ss_centers(fspec_centers);
                    std::string tok;
                    while (std::getline(ss_centers, tok, ','))
                        centers.push_back(constants::angular(std::stod(tok)));
                } else {
                    double x_min = 0, x_max = 0;  // Hz, data span around the carrier
                    for (const auto& pt : d.points) {
                        x_min = std::min(x_min, pt.x);
                        x_max = std::max(x_max, pt.x);
                    }
                    centers.push_back(0.0);
                    for (const char* key : {"omega_x_hz", "omega_y_hz", "omega_z_hz"}) {
                        if (!d.has_meta(key)) continue;
                        const double c_hz = d.meta_number(key);
                        if (-c_hz >= x_min) centers.push_back(constants::angular(-c_hz));
                        if (c_hz <= x_max) centers.push_back(constants::angular(c_hz));
                    }
                }
                // datasets store Hz on disk; the fit runs in angular units
                Dataset scaled = d;
                for (auto& pt : scaled.points) pt.x = constants::angular(pt.x);
                if (fspec_dry) {
                    std::cout << "dry-run: " << scaled.size() << " residuals, "
                              << 1 + centers.size() << " parameters (width + amplitudes)\n";
                    return exit_ok;
                }
                SpectrumFitOptions opts;
                opts.width_guess = constants::angular(fspec_width_hz);
                if (fspec_float_centers) opts.float_center.assign(centers.size(), true);
                const FitResult res = fit_spectrum(scaled, centers, opts);
                std::cout << "spectrum fit (" << d.size() << " points, " << centers.size()
                          << " lines)\n";
                print_fit_result(res);
                if (!fspec_out.empty()) {
                    fs::create_directories(fspec_out);
                    write_fit_result(res, fs::path(fspec_out) / "fitresult.json");
                }
                return exit_ok;
            }
            if (*fdyn) {
                const Dataset red = read_dataset_csv(fdyn_red);
                const Dataset carrier = read_dataset_csv(fdyn_carrier);
                const Dataset blue = read_dataset_csv(fdyn_blue);
                const ParameterFile pf = load_parameter_file(fdyn_params);
                DynamicsFixed fixed;
                fixed.kappa = pf.params.kappa;
                fixed.omega = pf.params.omega;
                fixed.eta_ld_sq = pf.params.eta_ld_sq;
                fixed.recoil_factor = pf.params.recoil_factor;
                fixed.n_dot_ext = pf.params.n_dot_ext;
                if (fdyn_dry) {
                    std::cout << "dry-run: " << red.size() + carrier.size() + blue.size()
                              << " residuals, " << 3 + fdyn_float_c + fdyn_float_next
                              << " parameters\n";
                    return exit_ok;
                }
                DynamicsFitOptions opts;
                opts.float_recoil_factor = fdyn_float_c;
                opts.float_n_dot_ext = fdyn_float_next;
                const FitResult res = fit_dynamics_simultaneous(red, carrier, blue, fixed, opts);
                std::cout << "dynamics fit (" << red.size() + carrier.size() + blue.size()
                          << " points across three branches)\n";
                print_fit_result(res);
                if (!fdyn_out.empty()) {
                    fs::create_directories(fdyn_out);
                    write_fit_result(res, fs::path(fdyn_out) / "fitresult.json");
                }
                return exit_ok;
            }
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return exit_usage;
    } catch (const DegenerateFitError& e) {
        std::cerr << "degenerate fit: " << e.what() << "\n";
        return exit_data;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_data;
    }
    return exit_usage;
}
