// Acceptance suite: end-to-end checks of the published values and the
// cross-module identities, one pass/fail line per criterion. Exits nonzero
// if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "sbcool/constants.hpp"
#include "sbcool/core_model.hpp"
#include "sbcool/fitkit.hpp"
#include "sbcool/fock_oracle.hpp"
#include "sbcool/rng.hpp"
#include "sbcool/spectrum.hpp"
#include "sbcool/synth.hpp"

using namespace sbcool;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int index, const std::string& name, bool passed, const std::string& detail,
            double elapsed_s, double limit_s) {
    const bool in_time = elapsed_s < limit_s;
    if (!passed || !in_time) ++failures;
    std::printf("[%s] criterion %d: %s -- %s (%.3f s, limit %.0f s)\n",
                (passed && in_time) ? "PASS" : "FAIL", index, name.c_str(), detail.c_str(),
                elapsed_s, limit_s);
}

IonSpecies sr88() {
    IonSpecies s;
    s.mass = 88.0 * constants::atomic_mass_unit;
    s.wavelength = 422e-9;
    s.name = "88Sr+";
    return s;
}

PhysicalParams published_params() {
    PhysicalParams p;
    p.kappa = constants::angular(117e3);
    p.omega = constants::angular(0.87e6);
    p.gamma_sc = 2.87e6;
    p.eta = 0.0148;
    p.eta_ld_sq = lamb_dicke_sq(sr88(), p.omega);
    p.recoil_factor = 1.0 / 3.0;
    p.n_dot_ext = 17.0;
    p.delta_lc = -p.omega;
    return p;
}

PhysicalParams random_cooling_params(std::mt19937_64& gen, double n_inf_cap) {
    for (;;) {
        PhysicalParams p;
        p.omega = constants::angular(0.5e6 + 1.5e6 * rng::uniform(gen));
        p.kappa = constants::angular(50e3 + 250e3 * rng::uniform(gen));
        p.gamma_sc = 1e6 + 4e6 * rng::uniform(gen);
        p.eta = 0.014 + 0.04 * rng::uniform(gen);
        p.eta_ld_sq = 0.005 + 0.02 * rng::uniform(gen);
        p.recoil_factor = 1.0 / 3.0;
        p.n_dot_ext = 50.0 * rng::uniform(gen);
        p.delta_lc = -p.omega;
        if (steady_state_n(p) <= n_inf_cap) return p;
    }
}

char buffer[512];

void criterion_1_steady_state() {
    const auto t0 = Clock::now();
    const PhysicalParams p = published_params();
    const double n_inf = steady_state_n(p);
    const double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool pass = std::abs(n_inf - 22.5) <= 0.3;
    std::snprintf(buffer, sizeof buffer, "n_inf = %.4f, published 22.5(3)", n_inf);
    report(1, "steady-state reproduction", pass, buffer, elapsed, 1e-3);
}

void criterion_2_cooperativity() {
    const auto t0 = Clock::now();
    CavityParams cavity;
    cavity.finesse = 2.56e4;
    cavity.waist = 57.9e-6;
    cavity.linewidth = constants::angular(117e3);
    const double eta0 = bare_cooperativity(cavity, 422e-9);
    const std::vector<double> factors = {0.31, 0.89, 0.82, 0.32};
    const double eta = effective_cooperativity(eta0, factors);
    const double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool pass = std::abs(eta0 - 0.26) <= 0.01 && std::abs(eta - 0.019) <= 0.001;
    std::snprintf(buffer, sizeof buffer, "eta0 = %.4f (0.26(1)), eta = %.5f (0.019(1))", eta0,
                  eta);
    report(2, "cooperativity formulas", pass, buffer, elapsed, 1e-3);
}

void criterion_3_oracle_equivalence() {
    const auto t0 = Clock::now();
    std::mt19937_64 gen = rng::substream(30303, 0);
    double worst_dynamic = 0.0, worst_stationary = 0.0;
    bool pass = true;
    for (int draw = 0; draw < 20; ++draw) {
        const PhysicalParams base = random_cooling_params(gen, 30.0);
        const double w = cooling_rate_constant(base);
        const double n0 = 2.0;
        for (Branch branch : {Branch::red, Branch::carrier, Branch::blue}) {
            const PhysicalParams p = at_branch(base, branch);
            const RateMatrix m = build_rate_matrix(p, 600);
            FockDistribution d = delta_distribution(2, 600);
            double t_prev = 0.0;
            for (double frac : {0.3, 1.0, 3.0}) {
                const double t = frac / w;
                const CoolingCurve closed = mean_n_trajectory(p, branch, n0, {t});
                // compare within the Lamb-Dicke window (<n> <= 50)
                if (closed.mean_n[0] > 50.0) break;
                d = evolve_distribution(m, d, t - t_prev, 1.0);
                t_prev = t;
                const double rel = std::abs(mean_n(d) - closed.mean_n[0]) /
                                   (1.0 + closed.mean_n[0]);
                worst_dynamic = std::max(worst_dynamic, rel);
                if (rel >= 1e-2) pass = false;
            }
        }
        // stationary mean against the closed form on the cooling branch
        const PhysicalParams red = at_branch(base, Branch::red);
        const RateMatrix m = build_rate_matrix(red, 600);
        const double rel_st =
            std::abs(mean_n(stationary_distribution(m)) - steady_state_n(red)) /
            steady_state_n(red);
        worst_stationary = std::max(worst_stationary, rel_st);
        if (rel_st >= 1e-3) pass = false;
    }
    const double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    std::snprintf(buffer, sizeof buffer,
                  "worst |closed-oracle|/(1+n) = %.2e (tol 1e-2), worst stationary rel = %.2e "
                  "(tol 1e-3), 20 draws",
                  worst_dynamic, worst_stationary);
    report(3, "oracle equivalence", pass, buffer, elapsed, 60.0);
}

void criterion_4_balance_identity() {
    const auto t0 = Clock::now();
    std::mt19937_64 gen = rng::substream(40404, 0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const PhysicalParams p = at_branch(random_cooling_params(gen, 1e9), Branch::red);
        const Rates r = transition_rates(p);
        const double rel = std::abs(steady_state_n(p) * cooling_rate_constant(p) -
                                    (r.r_plus + r.n_plus)) /
                           (r.r_plus + r.n_plus);
        worst = std::max(worst, rel);
    }
    const double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    std::snprintf(buffer, sizeof buffer, "worst relative defect %.2e over 1000 draws (tol 1e-12)",
                  worst);
    report(4, "balance identity n_inf*W = r_plus + n_plus", worst < 1e-12, buffer, elapsed, 1.0);
}

void criterion_5_fit_round_trips() {
    const auto t0 = Clock::now();
    bool pass = true;
    std::string note;

    const PhysicalParams truth = published_params();
    const std::vector<double> red_grid = linspace(0.0, 8e-3, 24);
    const std::vector<double> carrier_grid = linspace(0.0, 3.5e-3, 20);
    const std::vector<double> blue_grid = linspace(0.0, 1.8e-3, 16);
    DynamicsFixed fixed;
    fixed.kappa = truth.kappa;
    fixed.omega = truth.omega;
    fixed.eta_ld_sq = truth.eta_ld_sq;
    fixed.recoil_factor = truth.recoil_factor;
    fixed.n_dot_ext = truth.n_dot_ext;

    // (a) noiseless round trips at 1e-6 relative, all three drivers
    {
        NoiseSpec none;
        const Dataset red = synth_dynamics_branch(truth, Branch::red, 0.30, red_grid, none, 1);
        const Dataset car =
            synth_dynamics_branch(truth, Branch::carrier, 0.30, carrier_grid, none, 2);
        const Dataset blue =
            synth_dynamics_branch(truth, Branch::blue, 0.30, blue_grid, none, 3);
        const FitResult dyn = fit_dynamics_simultaneous(red, car, blue, fixed);
        if (std::abs(dyn.value("n0") - 0.30) > 0.30 * 1e-6 ||
            std::abs(dyn.value("gamma_sc") - 2.87e6) > 2.87e6 * 1e-6 ||
            std::abs(dyn.value("eta") - 0.0148) > 0.0148 * 1e-6)
            pass = false;

        const Dataset sat = synth_saturation(0.018, 8e6, linspace(1e6, 2.4e7, 12), none, 4);
        const FitResult satfit = fit_saturation(sat);
        if (std::abs(satfit.value("eta") - 0.018) > 0.018 * 1e-6 ||
            std::abs(satfit.value("gamma_sat") - 8e6) > 8e6 * 1e-6)
            pass = false;

        std::vector<SpectrumLine> lines(3);
        lines[0].offset = -constants::angular(0.87e6);
        lines[0].weight = 40.0;
        lines[1].offset = 0.0;
        lines[1].weight = 100.0;
        lines[2].offset = +constants::angular(0.87e6);
        lines[2].weight = 55.0;
        const double width = constants::angular(150e3);
        const auto grid = linspace(-constants::angular(1.5e6), constants::angular(1.5e6), 301);
        const SpectrumProfile prof = spectrum_profile(lines, width, 1.0, grid);
        Dataset spec;
        for (std::size_t i = 0; i < grid.size(); ++i)
            spec.points.push_back({grid[i], prof.rate[i], 1.0});
        const FitResult sfit = fit_spectrum(
            spec, {-constants::angular(0.87e6), 0.0, constants::angular(0.87e6)});
        if (std::abs(sfit.value("width") - width) > width * 1e-6 ||
            std::abs(sfit.value("amp_1") - 100.0) > 100.0 * 1e-6)
            pass = false;
        note += pass ? "noiseless ok" : "noiseless FAILED";
    }

    // (b) noisy dynamics: coverage of the published uncertainty bands
    {
        NoiseSpec g;
        g.kind = NoiseSpec::Kind::gaussian;
        g.scale = 0.1;
        int hit_n0 = 0, hit_gsc = 0, hit_eta = 0;
        const int n_seeds = 100;
        for (int seed = 0; seed < n_seeds; ++seed) {
            const Dataset red = synth_dynamics_branch(truth, Branch::red, 0.30, red_grid, g,
                                                      1000 + seed * 3);
            const Dataset car = synth_dynamics_branch(truth, Branch::carrier, 0.30,
                                                      carrier_grid, g, 1001 + seed * 3);
            const Dataset blue = synth_dynamics_branch(truth, Branch::blue, 0.30, blue_grid, g,
                                                       1002 + seed * 3);
            const FitResult res = fit_dynamics_simultaneous(red, car, blue, fixed);
            if (std::abs(res.value("n0") - 0.30) <= 0.06) ++hit_n0;
            if (std::abs(res.value("gamma_sc") - 2.87e6) <= 0.02e6) ++hit_gsc;
            if (std::abs(res.value("eta") - 0.0148) <= 0.0002) ++hit_eta;
        }
        const bool ok = hit_n0 >= 68 && hit_gsc >= 68 && hit_eta >= 68;
        if (!ok) pass = false;
        std::snprintf(buffer, sizeof buffer, "; dynamics coverage n0 %d%%, gamma_sc %d%%, eta %d%%",
                      hit_n0, hit_gsc, hit_eta);
        note += buffer;
    }

    // (c) noisy saturation: same protocol at the published values
    {
        NoiseSpec g;
        g.kind = NoiseSpec::Kind::gaussian;
        g.scale = 0.10;
        int hit_eta = 0, hit_gsat = 0;
        const int n_seeds = 100;
        for (int seed = 0; seed < n_seeds; ++seed) {
            const Dataset d =
                synth_saturation(0.018, 8e6, linspace(1e6, 2.4e7, 12), g, 5000 + seed);
            const FitResult res = fit_saturation(d);
            if (std::abs(res.value("eta") - 0.018) <= 0.004) ++hit_eta;
            if (std::abs(res.value("gamma_sat") - 8e6) <= 2e6) ++hit_gsat;
        }
        const bool ok = hit_eta >= 68 && hit_gsat >= 68;
        if (!ok) pass = false;
        std::snprintf(buffer, sizeof buffer, "; saturation coverage eta %d%%, gamma_sat %d%%",
                      hit_eta, hit_gsat);
        note += buffer;
    }

    const double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    report(5, "fit round trips and coverage", pass, note, elapsed, 300.0);
}

void criterion_6_parity_rules() {
    const auto t0 = Clock::now();
    SpectrumGeometry g;
    g.trap_frequency = {constants::angular(1.45e6), constants::angular(1.20e6),
                        constants::angular(0.87e6)};
    g.transverse_projection = {0.7071067811865476, 0.7071067811865476};
    g.lamb_dicke_sq = {0.0088, 0.0106, 0.0146};
    g.thermal_occupation = {8.0, 9.0, 12.0};

    bool pass = true;
    g.standing_wave_phase = 0.0;
    for (const auto& line : line_weights(g, 2))
        if (std::abs(line.order[2]) == 1 && line.weight != 0.0) pass = false;

    g.standing_wave_phase = constants::pi / 2.0;
    for (const auto& line : line_weights(g, 2)) {
        const bool carrier = line.order == std::array<int, 3>{0, 0, 0};
        const bool second_axial =
            line.order[0] == 0 && line.order[1] == 0 && std::abs(line.order[2]) == 2;
        if ((carrier || second_axial) && line.weight != 0.0) pass = false;
    }

    g.standing_wave_phase = 0.6;
    const auto lines = line_weights(g, 1);
    double worst_ratio = 0.0;
    for (int mode = 0; mode < 3; ++mode) {
        double up = 0.0, down = 0.0;
        for (const auto& line : lines) {
            std::array<int, 3> plus{}, minus{};
            plus[mode] = 1;
            minus[mode] = -1;
            if (line.order == plus) up = line.weight;
            if (line.order == minus) down = line.weight;
        }
        const double nbar = g.thermal_occupation[mode];
        const double defect = std::abs(down / up - nbar / (nbar + 1.0));
        worst_ratio = std::max(worst_ratio, defect);
        if (defect > 1e-14) pass = false;
    }
    const double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    std::snprintf(buffer, sizeof buffer,
                  "exact zeros at node/antinode; thermal-ratio defect %.1e", worst_ratio);
    report(6, "parity selection rules", pass, buffer, elapsed, 1.0);
}

void criterion_7_monte_carlo() {
    const auto t0 = Clock::now();
    const PhysicalParams p = at_branch(published_params(), Branch::red);
    const double w = cooling_rate_constant(p);
    const std::vector<double> times = {0.3 / w, 1.0 / w, 2.0 / w, 3.0 / w, 5.0 / w};
    const TrajectoryEnsemble ens = monte_carlo_ensemble(p, 0, times, 10000, 70707);

    const int nmax = default_truncation(p);
    const RateMatrix m = build_rate_matrix(p, nmax);
    FockDistribution d = delta_distribution(0, nmax);
    double t_prev = 0.0, worst_z = 0.0;
    bool pass = true;
    for (std::size_t i = 0; i < times.size(); ++i) {
        d = evolve_distribution(m, d, times[i] - t_prev, 1.0);
        t_prev = times[i];
        const double z = std::abs(ens.sample_mean_n[i] - mean_n(d)) / ens.standard_error[i];
        worst_z = std::max(worst_z, z);
        if (z >= 3.0) pass = false;
    }
    const double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    std::snprintf(buffer, sizeof buffer,
                  "worst |mc - oracle| = %.2f standard errors over %zu checkpoints, 1e4 "
                  "trajectories",
                  worst_z, times.size());
    report(7, "monte carlo consistency", pass, buffer, elapsed, 120.0);
}

}  // namespace

int main() {
    std::printf("acceptance suite (%s)\n", "sbcool");
    criterion_1_steady_state();
    criterion_2_cooperativity();
    criterion_3_oracle_equivalence();
    criterion_4_balance_identity();
    criterion_5_fit_round_trips();
    criterion_6_parity_rules();
    criterion_7_monte_carlo();
    if (failures) {
        std::printf("%d criterion(s) FAILED\n", failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
