#include "sbcool/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sbcool/errors.hpp"
#include "sbcool/rng.hpp"

namespace sbcool {

void FockDistribution::validate() const {
    if (probs.empty()) throw std::domain_error("FockDistribution: empty");
    double sum = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0 && p <= 1.0))
            throw std::domain_error("FockDistribution: probability outside [0, 1]");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::domain_error("FockDistribution: probabilities do not sum to 1");
}

double RateMatrix::max_total_rate() const {
    double m = 0.0;
    for (std::size_t n = 0; n < up.size(); ++n) m = std::max(m, up[n] + down[n]);
    return m;
}

RateMatrix build_rate_matrix(const PhysicalParams& p, int n_max) {
    if (n_max < 1) throw UsageError("build_rate_matrix: n_max must be >= 1");
    const Rates r = transition_rates(p);
    RateMatrix m;
    m.up.resize(n_max + 1);
    m.down.resize(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        m.up[n] = r.r_plus * (n + 1) + r.n_plus;
        m.down[n] = r.r_minus * n;
    }
    m.up[n_max] = 0.0;  // reflecting top
    m.lamb_dicke_product = p.eta_ld_sq * n_max;
    m.lamb_dicke_warning = m.lamb_dicke_product > 0.5;
    return m;
}

namespace {

// dp/dt for the tridiagonal generator.
void apply_generator(const RateMatrix& m, const std::vector<double>& p,
                     std::vector<double>& dpdt) {
    const int nmax = m.n_max();
    for (int n = 0; n <= nmax; ++n) {
        double d = -(m.up[n] + m.down[n]) * p[n];
        if (n > 0) d += m.up[n - 1] * p[n - 1];
        if (n < nmax) d += m.down[n + 1] * p[n + 1];
        dpdt[n] = d;
    }
}

}  // namespace

FockDistribution evolve_distribution(const RateMatrix& m, const FockDistribution& p0,
                                     double t, double dt_max) {
    p0.validate();
    if (p0.n_max() != m.n_max())
        throw UsageError("evolve_distribution: distribution/matrix size mismatch");
    if (t < 0.0) throw std::domain_error("evolve_distribution: t must be >= 0");
    if (!(dt_max > 0.0)) throw std::domain_error("evolve_distribution: dt_max must be > 0");

    FockDistribution out = p0;
    if (t == 0.0) return out;

    const double rate = m.max_total_rate();
    double dt = dt_max;
    if (rate > 0.0) dt = std::min(dt, 0.1 / rate);
    const long steps = std::max(1L, static_cast<long>(std::ceil(t / dt)));
    dt = t / static_cast<double>(steps);

    const int size = m.n_max() + 1;
    std::vector<double> k1(size), k2(size), k3(size), k4(size), tmp(size);
    std::vector<double>& p = out.probs;

    double drift = 0.0;
    for (long s = 0; s < steps; ++s) {
        apply_generator(m, p, k1);
        for (int i = 0; i < size; ++i) tmp[i] = p[i] + 0.5 * dt * k1[i];
        apply_generator(m, tmp, k2);
        for (int i = 0; i < size; ++i) tmp[i] = p[i] + 0.5 * dt * k2[i];
        apply_generator(m, tmp, k3);
        for (int i = 0; i < size; ++i) tmp[i] = p[i] + dt * k3[i];
        apply_generator(m, tmp, k4);
        double sum = 0.0;
        for (int i = 0; i < size; ++i) {
            p[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            if (p[i] < 0.0) {
                if (p[i] < -1e-12)
                    throw IntegratorInstabilityError(
                        "evolve_distribution: probability went negative; reduce dt_max");
                p[i] = 0.0;
            }
            sum += p[i];
        }
        drift += std::abs(sum - 1.0);
        for (int i = 0; i < size; ++i) p[i] /= sum;
    }
    if (drift > 1e-9 * static_cast<double>(steps))
        throw IntegratorInstabilityError(
            "evolve_distribution: normalization drift exceeded 1e-9 per step; reduce dt_max");
    return out;
}

double mean_n(const FockDistribution& d) {
    d.validate();
    double m = 0.0;
    for (std::size_t n = 0; n < d.probs.size(); ++n) m += static_cast<double>(n) * d.probs[n];
    return m;
}

double variance_n(const FockDistribution& d) {
    const double m = mean_n(d);
    double v = 0.0;
    for (std::size_t n = 0; n < d.probs.size(); ++n) {
        const double x = static_cast<double>(n) - m;
        v += x * x * d.probs[n];
    }
    return v;
}

TrajectoryEnsemble monte_carlo_ensemble(const PhysicalParams& p, int n0,
                                        const std::vector<double>& times, int n_traj,
                                        std::uint64_t seed) {
    if (n_traj < 1) throw UsageError("monte_carlo_ensemble: n_traj must be >= 1");
    if (n0 < 0) throw std::domain_error("monte_carlo_ensemble: n0 must be >= 0");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < 0.0) throw std::domain_error("monte_carlo_ensemble: times must be >= 0");
        if (i > 0 && times[i] <= times[i - 1])
            throw std::domain_error("monte_carlo_ensemble: times must be strictly increasing");
    }

    const Rates r = transition_rates(p);
    const std::size_t npts = times.size();
    std::vector<double> sum(npts, 0.0), sumsq(npts, 0.0);

    for (int traj = 0; traj < n_traj; ++traj) {
        std::mt19937_64 gen = rng::substream(seed, static_cast<std::uint64_t>(traj));
        double t = 0.0;
        long n = n0;
        std::size_t next_out = 0;
        while (next_out < npts) {
            const double up = r.r_plus * static_cast<double>(n + 1) + r.n_plus;
            const double down = r.r_minus * static_cast<double>(n);
            const double total = up + down;
            double t_jump;
            if (total > 0.0) {
                t_jump = t + rng::exponential(gen, total);
            } else {
                t_jump = std::numeric_limits<double>::infinity();
            }
            // emit all sample points the trajectory passes before the jump
            while (next_out < npts && times[next_out] <= t_jump) {
                const double v = static_cast<double>(n);
                sum[next_out] += v;
                sumsq[next_out] += v * v;
                ++next_out;
            }
            if (next_out >= npts) break;
            t = t_jump;
            n += (rng::uniform(gen) * total < up) ? +1 : -1;
        }
    }

    TrajectoryEnsemble e;
    e.times = times;
    e.n_trajectories = n_traj;
    e.seed = seed;
    e.rng_algorithm = rng::algorithm_id;
    e.sample_mean_n.resize(npts);
    e.standard_error.resize(npts);
    const double nt = static_cast<double>(n_traj);
    for (std::size_t i = 0; i < npts; ++i) {
        const double mean = sum[i] / nt;
        e.sample_mean_n[i] = mean;
        double var = 0.0;
        if (n_traj > 1) var = std::max(0.0, (sumsq[i] - nt * mean * mean) / (nt - 1.0));
        e.standard_error[i] = std::sqrt(var / nt);
    }
    return e;
}

FockDistribution stationary_distribution(const RateMatrix& m) {
    const int nmax = m.n_max();
    for (int n = 1; n <= nmax; ++n)
        if (!(m.down[n] > 0.0))
            throw std::domain_error("stationary_distribution: down rates must be positive for n >= 1");

    // Tail ratio up[n]/down[n+1] -> r_plus/r_minus; a heating-dominated chain
    // has no normalizable stationary state on the untruncated lattice.
    if (nmax >= 1 && m.up[nmax - 1] >= m.down[nmax])
        throw NoStationaryStateError(
            "stationary_distribution: up rate does not fall below down rate; "
            "heating branch has no stationary state");

    // log-space detailed-balance recursion, normalized at the end
    std::vector<double> logpi(nmax + 1, 0.0);
    double logmax = 0.0;
    for (int n = 1; n <= nmax; ++n) {
        if (m.up[n - 1] == 0.0) {
            // absorbing below n: all further states unreachable
            for (int j = n; j <= nmax; ++j) logpi[j] = -std::numeric_limits<double>::infinity();
            break;
        }
        logpi[n] = logpi[n - 1] + std::log(m.up[n - 1] / m.down[n]);
        logmax = std::max(logmax, logpi[n]);
    }
    FockDistribution d;
    d.probs.resize(nmax + 1);
    double sum = 0.0;
    for (int n = 0; n <= nmax; ++n) {
        d.probs[n] = std::exp(logpi[n] - logmax);
        sum += d.probs[n];
    }
    for (double& p : d.probs) p /= sum;
    return d;
}

FockDistribution delta_distribution(int n, int n_max) {
    if (n_max < 0 || n < 0 || n > n_max)
        throw UsageError("delta_distribution: need 0 <= n <= n_max");
    FockDistribution d;
    d.probs.assign(n_max + 1, 0.0);
    d.probs[n] = 1.0;
    return d;
}

FockDistribution thermal_distribution(double nbar, int n_max) {
    if (nbar < 0.0) throw std::domain_error("thermal_distribution: nbar must be >= 0");
    if (n_max < 0) throw UsageError("thermal_distribution: n_max must be >= 0");
    FockDistribution d;
    d.probs.resize(n_max + 1);
    if (nbar == 0.0) return delta_distribution(0, n_max);
    const double ratio = nbar / (nbar + 1.0);
    double sum = 0.0;
    double p = 1.0;
    for (int n = 0; n <= n_max; ++n, p *= ratio) {
        d.probs[n] = p;
        sum += p;
    }
    for (double& q : d.probs) q /= sum;
    return d;
}

int default_truncation(const PhysicalParams& p) {
    double predicted = 0.0;
    if (p.eta > 0.0) predicted = steady_state_n(p);
    return std::max(200, static_cast<int>(std::ceil(20.0 * predicted)));
}

}  // namespace sbcool
