#pragma once

// Brute-force ground truth for the closed forms in core_model: the full
// occupation-number distribution evolved under the birth-death transition
// rates, the detailed-balance stationary state, and Gillespie jump
// trajectories. Everything here is valid in the Lamb-Dicke regime
// eta_ld^2 * <n> << 1; build_rate_matrix reports when a truncation leaves
// that regime.

#include <cstdint>
#include <vector>

#include "sbcool/core_model.hpp"

namespace sbcool {

struct FockDistribution {
    std::vector<double> probs;  // index n = 0 .. n_max

    int n_max() const { return static_cast<int>(probs.size()) - 1; }
    void validate() const;  // entries in [0,1], sum within 1e-9 of 1
};

// Tridiagonal birth-death generator. up[n] is the total |n> -> |n+1> rate
// r_plus*(n+1) + n_plus, down[n] is the |n> -> |n-1> rate r_minus*n. The
// truncation is reflecting: up[n_max] = 0, so probability is conserved.
struct RateMatrix {
    std::vector<double> up;    // size n_max + 1, up[n_max] == 0
    std::vector<double> down;  // size n_max + 1, down[0] == 0
    bool lamb_dicke_warning = false;  // eta_ld_sq * n_max > 0.5
    double lamb_dicke_product = 0.0;  // eta_ld_sq * n_max

    int n_max() const { return static_cast<int>(up.size()) - 1; }
    double max_total_rate() const;
};

struct TrajectoryEnsemble {
    std::vector<double> times;
    std::vector<double> sample_mean_n;
    std::vector<double> standard_error;
    int n_trajectories = 0;
    std::uint64_t seed = 0;
    std::string rng_algorithm;
};

RateMatrix build_rate_matrix(const PhysicalParams& p, int n_max);

// Fixed-step RK4 master-equation integration to time t. The step is
// min(dt_max, 0.1 / max_total_rate); the result is renormalized and the
// accumulated drift checked against 1e-9 per unit step.
FockDistribution evolve_distribution(const RateMatrix& m, const FockDistribution& p0,
                                     double t, double dt_max);

double mean_n(const FockDistribution& d);
double variance_n(const FockDistribution& d);

// Exact-event-time jump sampling of the chain; trajectory i uses substream
// (seed, i), so the ensemble is reproducible regardless of execution order.
TrajectoryEnsemble monte_carlo_ensemble(const PhysicalParams& p, int n0,
                                        const std::vector<double>& times, int n_traj,
                                        std::uint64_t seed);

// Normalized solution of pi(n+1) down[n+1] = pi(n) up[n]. Throws
// NoStationaryStateError on heating-dominated chains (r_plus >= r_minus).
FockDistribution stationary_distribution(const RateMatrix& m);

FockDistribution delta_distribution(int n, int n_max);
FockDistribution thermal_distribution(double nbar, int n_max);

// Truncation policy: max(200, 20 * predicted steady-state occupation).
int default_truncation(const PhysicalParams& p);

}  // namespace sbcool
