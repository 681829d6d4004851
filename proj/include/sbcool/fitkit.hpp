#pragma once

// Weighted nonlinear least squares: a damped (Levenberg-Marquardt style)
// engine plus the three concrete fit drivers used by the analysis
// (saturation curve, multi-Lorentzian spectrum, simultaneous three-branch
// cooling dynamics).
//
// Engine conventions:
//   * residual_k = (y_k - f_k(p)) / sigma_k, cost = sum residual^2
//   * Jacobian by central finite differences, relative step 1e-6 with
//     absolute floor 1e-12
//   * damping: lambda scales diag(J^T J); x10 on a rejected step,
//     /10 on an accepted one
//   * covariance = (J^T J)^{-1} * reduced_chi_sq at the optimum, so quoted
//     1-sigma uncertainties absorb the observed scatter
//   * bounds enforced by projection; clamped parameters are flagged

#include <functional>
#include <string>
#include <vector>

#include "sbcool/core_model.hpp"
#include "sbcool/dataset.hpp"

namespace sbcool {

struct FitProblem {
    using ResidualFn = std::function<std::vector<double>(const std::vector<double>&)>;

    ResidualFn residual;                   // params -> weighted residual vector
    std::vector<double> initial;
    std::vector<double> lower;             // empty = unbounded
    std::vector<double> upper;             // empty = unbounded
    std::vector<std::string> names;        // empty = p0, p1, ...

    double xtol = 1e-12;                   // relative parameter step
    double ftol = 1e-12;                   // relative cost change
    int max_iterations = 400;
};

struct FitResult {
    std::vector<std::string> parameter_names;
    std::vector<double> parameters;
    std::vector<double> covariance;        // row-major n x n
    double reduced_chi_sq = 0.0;
    int n_iterations = 0;
    bool converged = false;
    std::vector<int> active_bounds;        // parameter indices pinned at a bound
    std::vector<std::string> warnings;

    // derived quantities with propagated 1-sigma uncertainties
    std::vector<std::string> derived_names;
    std::vector<double> derived_values;
    std::vector<double> derived_sigmas;

    std::size_t n_parameters() const { return parameters.size(); }
    double value(const std::string& name) const;        // throws UsageError if unknown
    double uncertainty(std::size_t i) const;
    double uncertainty(const std::string& name) const;
    double covariance_at(std::size_t i, std::size_t j) const;
};

FitResult solve_least_squares(const FitProblem& prob);

// --- drivers -------------------------------------------------------------

// Gamma_c = eta * x / (1 + x / gamma_sat) against a dataset of
// (x = free-space scattering rate, y = cavity scattering rate).
// Throws DegenerateFitError when the data cannot pin gamma_sat
// (all points in the linear regime).
FitResult fit_saturation(const Dataset& d);

struct SpectrumFitOptions {
    std::vector<bool> float_center;  // per line; default all fixed
    double width_guess = 0.0;        // 0 = derive from data span
    double min_width = 0.0;          // optional lower bound
};

// Sum of peak-normalized Lorentzians with one shared FWHM and per-line
// amplitudes. Parameters: width, then amp_0..amp_{K-1}, then any floating
// centers. Centers closer than one grid step are tied to one amplitude
// (warning recorded).
FitResult fit_spectrum(const Dataset& d, const std::vector<double>& line_centers,
                       const SpectrumFitOptions& opts = {});

struct DynamicsFixed {
    double kappa = 0.0;
    double omega = 0.0;
    double eta_ld_sq = 0.0;
    double recoil_factor = 1.0 / 3.0;
    double n_dot_ext = 0.0;
};

struct DynamicsFitOptions {
    bool float_recoil_factor = false;  // add C to the fit parameters
    bool float_n_dot_ext = false;      // add n_dot_ext to the fit parameters
    std::vector<double> initial;       // optional {n0, gamma_sc, eta} guess
};

// Simultaneous fit of the three closed-form branches with shared
// (n0, gamma_sc, eta). Datasets carry x = time in s, y = <n>; each must be
// tagged branch=red|carrier|blue in metadata. Reports the implied
// steady-state occupation as a derived quantity, and attaches a validity
// warning if the best-fit model leaves the Lamb-Dicke window (<n> > 70)
// inside the data span.
FitResult fit_dynamics_simultaneous(const Dataset& red, const Dataset& carrier,
                                    const Dataset& blue, const DynamicsFixed& fixed,
                                    const DynamicsFitOptions& opts = {});

}  // namespace sbcool
