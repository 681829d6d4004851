#include "sbcool/core_model.hpp"

#include <cmath>
#include <stdexcept>

#include "sbcool/constants.hpp"
#include "sbcool/errors.hpp"

namespace sbcool {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::domain_error(what);
}

}  // namespace

double IonSpecies::wavenumber() const { return constants::two_pi / wavelength; }

void IonSpecies::validate() const {
    require(mass > 0.0, "IonSpecies: mass must be > 0");
    require(wavelength > 0.0, "IonSpecies: wavelength must be > 0");
}

void CavityParams::validate() const {
    require(finesse > 0.0, "CavityParams: finesse must be > 0");
    require(waist > 0.0, "CavityParams: waist must be > 0");
    require(linewidth > 0.0, "CavityParams: linewidth must be > 0");
}

void PhysicalParams::validate() const {
    require(kappa > 0.0, "PhysicalParams: kappa must be > 0");
    require(omega > 0.0, "PhysicalParams: omega must be > 0");
    require(gamma_sc > 0.0, "PhysicalParams: gamma_sc must be > 0");
    require(eta >= 0.0, "PhysicalParams: eta must be >= 0");
    require(eta_ld_sq > 0.0, "PhysicalParams: eta_ld_sq must be > 0");
    require(recoil_factor >= 0.0, "PhysicalParams: recoil_factor must be >= 0");
    require(n_dot_ext >= 0.0, "PhysicalParams: n_dot_ext must be >= 0");
    require(std::isfinite(delta_lc), "PhysicalParams: delta_lc must be finite");
}

Branch branch_from_string(const std::string& s) {
    if (s == "red") return Branch::red;
    if (s == "carrier") return Branch::carrier;
    if (s == "blue") return Branch::blue;
    throw UsageError("unknown branch '" + s + "' (expected red|carrier|blue)");
}

std::string to_string(Branch b) {
    switch (b) {
        case Branch::red: return "red";
        case Branch::carrier: return "carrier";
        case Branch::blue: return "blue";
    }
    throw UsageError("invalid branch tag");
}

double branch_detuning(Branch b, double omega) {
    switch (b) {
        case Branch::red: return -omega;
        case Branch::carrier: return 0.0;
        case Branch::blue: return +omega;
    }
    throw UsageError("invalid branch tag");
}

PhysicalParams at_branch(const PhysicalParams& p, Branch branch) {
    PhysicalParams q = p;
    q.delta_lc = branch_detuning(branch, p.omega);
    return q;
}

double lamb_dicke_sq(const IonSpecies& species, double omega) {
    species.validate();
    require(omega > 0.0, "lamb_dicke_sq: omega must be > 0");
    const double k = species.wavenumber();
    // E_rec/(hbar w) = hbar k^2 / (2 m w)
    return constants::hbar * k * k / (2.0 * species.mass * omega);
}

double bare_cooperativity(const CavityParams& cavity, double wavelength) {
    cavity.validate();
    require(wavelength > 0.0, "bare_cooperativity: wavelength must be > 0");
    const double k = constants::two_pi / wavelength;
    return 24.0 * cavity.finesse / (constants::pi * k * k * cavity.waist * cavity.waist);
}

double effective_cooperativity(double eta0, std::span<const double> factors) {
    require(eta0 > 0.0, "effective_cooperativity: eta0 must be > 0");
    double eta = eta0;
    for (double f : factors) {
        require(f > 0.0 && f <= 1.0, "effective_cooperativity: factors must be in (0, 1]");
        eta *= f;
    }
    return eta;
}

double cavity_scatter_rate(double eta, double gamma_sc, double gamma_sat) {
    require(gamma_sat > 0.0, "cavity_scatter_rate: gamma_sat must be > 0");
    require(gamma_sc >= 0.0, "cavity_scatter_rate: gamma_sc must be >= 0");
    return eta * gamma_sc / (1.0 + gamma_sc / gamma_sat);
}

Rates transition_rates(const PhysicalParams& p) {
    p.validate();
    const double coupling = p.gamma_sc * p.eta * p.eta_ld_sq;
    const double d_red = 2.0 * (p.delta_lc + p.omega) / p.kappa;
    const double d_blue = 2.0 * (p.delta_lc - p.omega) / p.kappa;
    Rates r;
    r.r_minus = coupling / (1.0 + d_red * d_red);
    r.r_plus = coupling / (1.0 + d_blue * d_blue);
    r.n_plus = p.gamma_sc * p.recoil_factor * p.eta_ld_sq + p.n_dot_ext;
    return r;
}

double cooling_rate_constant(const PhysicalParams& p) {
    const Rates r = transition_rates(at_branch(p, Branch::red));
    const double w = r.r_minus - r.r_plus;
    // r_minus > r_plus whenever omega > 0, so w > 0 for valid params
    if (!(w > 0.0) && p.eta > 0.0)
        throw std::logic_error("cooling_rate_constant: W <= 0 for valid parameters");
    return w;
}

double cooling_rate_constant_alt(const PhysicalParams& p) {
    p.validate();
    const double half = p.kappa / (2.0 * p.omega);
    return p.gamma_sc * p.eta * p.eta_ld_sq / (1.0 + half * half);
}

double steady_state_n(const PhysicalParams& p) {
    p.validate();
    if (p.eta == 0.0)
        throw DivergenceError("steady_state_n: eta = 0, occupation diverges (no steady state)");
    const double q = p.kappa / (4.0 * p.omega);
    const double qsq = q * q;
    const double heat = p.recoil_factor / p.eta +
                        p.n_dot_ext / (p.gamma_sc * p.eta * p.eta_ld_sq);
    return qsq + heat * (1.0 + qsq);
}

CoolingCurve mean_n_trajectory(const PhysicalParams& p, Branch branch, double n0,
                               std::vector<double> times) {
    require(n0 >= 0.0, "mean_n_trajectory: n0 must be >= 0");
    for (std::size_t i = 0; i < times.size(); ++i) {
        require(times[i] >= 0.0, "mean_n_trajectory: times must be >= 0");
        if (i > 0) require(times[i] > times[i - 1], "mean_n_trajectory: times must be strictly increasing");
    }

    CoolingCurve curve;
    curve.branch = branch;
    curve.mean_n.reserve(times.size());

    switch (branch) {
        case Branch::red: {
            const double w = cooling_rate_constant(p);
            const double n_inf = steady_state_n(p);
            for (double t : times) {
                const double decay = std::exp(-w * t);
                curve.mean_n.push_back(n0 * decay + n_inf * (1.0 - decay));
            }
            break;
        }
        case Branch::carrier: {
            // r_minus == r_plus at delta_lc = 0, so <n> grows linearly
            const Rates r = transition_rates(at_branch(p, Branch::carrier));
            const double slope = r.r_plus + r.n_plus;
            for (double t : times) curve.mean_n.push_back(n0 + slope * t);
            break;
        }
        case Branch::blue: {
            const double w = cooling_rate_constant(p);
            const double n_inf = steady_state_n(p);
            for (double t : times)
                curve.mean_n.push_back((n0 + n_inf + 1.0) * std::exp(w * t) - (n_inf + 1.0));
            break;
        }
    }
    curve.times = std::move(times);
    return curve;
}

}  // namespace sbcool
