#pragma once

// Rate-equation model for resolved-sideband cavity cooling of a single
// trapped ion. Closed-form transition rates, cooling rate constant,
// steady-state occupation, mean-occupation trajectories, and the
// cooperativity / saturation expressions.
//
// Conventions: every frequency and rate is angular (rad/s) or events per
// second. All functions are pure; parameter records are plain immutable
// values.

#include <span>
#include <string>
#include <vector>

namespace sbcool {

struct IonSpecies {
    double mass = 0.0;              // kg
    double wavelength = 0.0;        // m, cooling transition
    double atomic_linewidth = 0.0;  // rad/s, population decay rate (metadata)
    std::string name;

    double wavenumber() const;  // k = 2 pi / lambda
    void validate() const;      // throws std::domain_error
};

struct CavityParams {
    double finesse = 0.0;    // dimensionless
    double waist = 0.0;      // m, TEM00 mode radius
    double linewidth = 0.0;  // rad/s, energy decay rate kappa
    double length = 0.0;     // m (metadata)

    void validate() const;
};

// Complete parameter set for the one-dimensional cooling model along z.
struct PhysicalParams {
    double kappa = 0.0;          // rad/s cavity linewidth
    double omega = 0.0;          // rad/s frequency of the cooled motional mode
    double gamma_sc = 0.0;       // photons/s free-space scattering rate
    double eta = 0.0;            // effective cooperativity
    double eta_ld_sq = 0.0;      // Lamb-Dicke parameter squared
    double recoil_factor = 0.0;  // C: recoil heating is C*eta_ld_sq*hbar*omega per scatter
    double n_dot_ext = 0.0;      // quanta/s environmental heating rate
    double delta_lc = 0.0;       // rad/s laser-cavity detuning
    double delta_ci = 0.0;       // rad/s cavity-ion detuning (labeling only)

    void validate() const;  // throws std::domain_error
};

// Per-detuning birth-death coefficients: |n> -> |n-1> at r_minus*n,
// |n> -> |n+1> at r_plus*(n+1) + n_plus.
struct Rates {
    double r_minus = 0.0;  // 1/s
    double r_plus = 0.0;   // 1/s
    double n_plus = 0.0;   // quanta/s
};

enum class Branch { red, carrier, blue };  // delta_lc = -omega, 0, +omega

Branch branch_from_string(const std::string& s);  // throws UsageError
std::string to_string(Branch b);
double branch_detuning(Branch b, double omega);

struct CoolingCurve {
    std::vector<double> times;   // s, strictly increasing
    std::vector<double> mean_n;  // expected occupation at each time
    Branch branch = Branch::red;
};

// eta_ld^2 = E_rec/(hbar*omega) with E_rec = hbar^2 k^2 / (2 m).
double lamb_dicke_sq(const IonSpecies& species, double omega);

// Antinode cooperativity of a two-level emitter: 24 F / (pi k^2 w0^2).
double bare_cooperativity(const CavityParams& cavity, double wavelength);

// eta0 times a chain of independent reduction factors, each in (0, 1].
double effective_cooperativity(double eta0, std::span<const double> factors);

// Scattering rate into the resonant cavity with repump-limited saturation:
// Gamma_c = eta * Gamma_sc / (1 + Gamma_sc / Gamma_sat).
double cavity_scatter_rate(double eta, double gamma_sc, double gamma_sat);

Rates transition_rates(const PhysicalParams& p);

// W = r_minus - r_plus evaluated at delta_lc = -omega, which reduces to
// gamma_sc*eta*eta_ld_sq / (1 + (kappa/(4 omega))^2). This is the canonical
// form: it is the only one consistent with the balance identity
// n_inf * W = r_plus + n_plus.
double cooling_rate_constant(const PhysicalParams& p);

// Alternative closed form with denominator 1 + (kappa/(2 omega))^2, kept
// for comparison. It does NOT satisfy the balance identity; do not use it
// in the dynamics. See cooling_rate_constant.
double cooling_rate_constant_alt(const PhysicalParams& p);

// n_inf = (kappa/4w)^2 + [C/eta + n_dot_ext/(gamma_sc eta eta_ld^2)]*(1 + (kappa/4w)^2)
double steady_state_n(const PhysicalParams& p);  // throws DivergenceError if eta == 0

// Closed-form <n>(t) for the branch-matching detuning (p.delta_lc is
// overridden by the branch choice):
//   red:     n0 e^{-Wt} + n_inf (1 - e^{-Wt})
//   carrier: n0 + (r_plus + n_plus) t
//   blue:    (n0 + n_inf + 1) e^{Wt} - (n_inf + 1)
CoolingCurve mean_n_trajectory(const PhysicalParams& p, Branch branch, double n0,
                               std::vector<double> times);

// Convenience: copy of p with delta_lc set to the branch detuning.
PhysicalParams at_branch(const PhysicalParams& p, Branch branch);

}  // namespace sbcool
