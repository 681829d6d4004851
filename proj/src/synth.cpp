#include "sbcool/synth.hpp"

#include <algorithm>
#include <cmath>

#include "sbcool/constants.hpp"
#include "sbcool/errors.hpp"
#include "sbcool/rng.hpp"
#include "sbcool/spectrum.hpp"

namespace sbcool {

NoiseSpec parse_noise_spec(const std::string& text) {
    NoiseSpec n;
    if (text.empty() || text == "none") return n;
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    if (kind == "gaussian")
        n.kind = NoiseSpec::Kind::gaussian;
    else if (kind == "poisson")
        n.kind = NoiseSpec::Kind::poisson;
    else
        throw UsageError("noise spec: unknown kind '" + kind + "' (none|gaussian|poisson)");
    if (colon == std::string::npos)
        throw UsageError("noise spec: expected '" + kind + ":<scale>'");
    try {
        n.scale = std::stod(text.substr(colon + 1));
    } catch (const std::exception&) {
        throw UsageError("noise spec: cannot parse scale in '" + text + "'");
    }
    if (!(n.scale > 0.0)) throw UsageError("noise spec: scale must be > 0");
    return n;
}

std::string to_string(const NoiseSpec& n) {
    switch (n.kind) {
        case NoiseSpec::Kind::none: return "none";
        case NoiseSpec::Kind::gaussian: return "gaussian:" + format_double(n.scale);
        case NoiseSpec::Kind::poisson: return "poisson:" + format_double(n.scale);
    }
    return "none";
}

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 2) throw UsageError("linspace: need at least 2 points");
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
        v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

namespace {

// shared tagging for all generators
void stamp(Dataset& d, const NoiseSpec& noise, std::uint64_t seed) {
    d.metadata["noise"] = to_string(noise);
    d.metadata["seed"] = std::to_string(seed);
    d.metadata["rng"] = rng::algorithm_id;
}

// rate-like scenarios: relative gaussian noise with a floor, or counting
// noise with the integration-time scale
void apply_rate_noise(std::vector<double>& y, std::vector<double>& sigma,
                      const NoiseSpec& noise, std::mt19937_64& gen) {
    const std::size_t n = y.size();
    sigma.assign(n, 1.0);
    if (noise.kind == NoiseSpec::Kind::none) return;
    double peak = 0.0;
    for (double v : y) peak = std::max(peak, std::abs(v));
    if (noise.kind == NoiseSpec::Kind::gaussian) {
        for (std::size_t i = 0; i < n; ++i) {
            sigma[i] = noise.scale * std::max(std::abs(y[i]), 0.05 * peak);
            y[i] += sigma[i] * rng::normal(gen);
        }
    } else {  // poisson with integration time noise.scale
        for (std::size_t i = 0; i < n; ++i) {
            const double expected = std::max(0.0, y[i]) * noise.scale;
            sigma[i] = std::sqrt(std::max(expected, 10.0)) / noise.scale;
            y[i] = static_cast<double>(rng::poisson(gen, expected)) / noise.scale;
        }
    }
}

}  // namespace

Dataset synth_dynamics_branch(const PhysicalParams& p, Branch branch, double n0,
                              const std::vector<double>& times, const NoiseSpec& noise,
                              std::uint64_t seed) {
    if (noise.kind == NoiseSpec::Kind::poisson)
        throw UsageError("synth_dynamics_branch: occupation data take gaussian noise, not poisson");
    const CoolingCurve curve = mean_n_trajectory(p, branch, n0, times);
    std::mt19937_64 gen = rng::substream(seed, 0);

    Dataset d;
    d.label = "dynamics_" + to_string(branch);
    for (std::size_t i = 0; i < times.size(); ++i) {
        Dataset::Point pt;
        pt.x = times[i];
        double sigma = 1.0;
        pt.y = curve.mean_n[i];
        if (noise.kind == NoiseSpec::Kind::gaussian) {
            sigma = noise.scale * std::sqrt(1.0 + curve.mean_n[i]);
            pt.y += sigma * rng::normal(gen);
        }
        pt.sigma_y = sigma;
        d.points.push_back(pt);
    }
    d.metadata["branch"] = to_string(branch);
    d.metadata["delta_lc_hz"] = format_double(constants::ordinary(branch_detuning(branch, p.omega)));
    stamp(d, noise, seed);
    return d;
}

Dataset synth_saturation(double eta, double gamma_sat,
                         const std::vector<double>& gamma_sc_grid, const NoiseSpec& noise,
                         std::uint64_t seed) {
    std::vector<double> y;
    y.reserve(gamma_sc_grid.size());
    for (double gsc : gamma_sc_grid) y.push_back(cavity_scatter_rate(eta, gsc, gamma_sat));
    std::mt19937_64 gen = rng::substream(seed, 0);
    std::vector<double> sigma;
    apply_rate_noise(y, sigma, noise, gen);

    Dataset d;
    d.label = "saturation";
    for (std::size_t i = 0; i < y.size(); ++i)
        d.points.push_back({gamma_sc_grid[i], y[i], sigma[i]});
    d.metadata["scenario"] = "saturation";
    stamp(d, noise, seed);
    return d;
}

Dataset synth_spectrum(const SpectrumConfig& cfg, int max_order,
                       const std::vector<double>& detuning_grid, const NoiseSpec& noise,
                       std::uint64_t seed) {
    const std::vector<SpectrumLine> lines = line_weights(cfg.geometry, max_order);
    const SpectrumProfile prof =
        spectrum_profile(lines, cfg.total_linewidth, cfg.amplitude_scale, detuning_grid);
    std::vector<double> y = prof.rate;
    std::mt19937_64 gen = rng::substream(seed, 0);
    std::vector<double> sigma;
    apply_rate_noise(y, sigma, noise, gen);

    Dataset d;
    d.label = "spectrum";
    for (std::size_t i = 0; i < y.size(); ++i)
        d.points.push_back({detuning_grid[i], y[i], sigma[i]});
    d.metadata["scenario"] = "spectrum";
    d.metadata["phi"] = format_double(cfg.geometry.standing_wave_phase);
    d.metadata["omega_x_hz"] = format_double(constants::ordinary(cfg.geometry.trap_frequency[0]));
    d.metadata["omega_y_hz"] = format_double(constants::ordinary(cfg.geometry.trap_frequency[1]));
    d.metadata["omega_z_hz"] = format_double(constants::ordinary(cfg.geometry.trap_frequency[2]));
    d.metadata["linewidth_hz"] = format_double(constants::ordinary(cfg.total_linewidth));
    stamp(d, noise, seed);
    return d;
}

}  // namespace sbcool
