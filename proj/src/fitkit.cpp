#include "sbcool/fitkit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sbcool/errors.hpp"

namespace sbcool {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> from_eigen(const VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

bool all_finite(const VectorXd& v) { return v.size() > 0 && v.allFinite(); }

// Evaluation used while probing steps: a residual that throws (finite
// difference or trial step left the model domain) is treated as infeasible.
VectorXd probe_eval(const FitProblem::ResidualFn& fn, const std::vector<double>& p) {
    try {
        return to_eigen(fn(p));
    } catch (const std::exception&) {
        return VectorXd();
    }
}

std::string format_params(const std::vector<std::string>& names, const VectorXd& p) {
    std::ostringstream os;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (i) os << ", ";
        os << names[static_cast<std::size_t>(i)] << "=" << p[i];
    }
    return os.str();
}

VectorXd clamp_to_bounds(VectorXd p, const VectorXd& lo, const VectorXd& hi) {
    for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = std::clamp(p[i], lo[i], hi[i]);
    return p;
}

// Central-difference Jacobian of the weighted residual, per-parameter step
// max(1e-6 |p|, 1e-12). Falls back to a one-sided difference if one side of
// the stencil leaves the model domain.
MatrixXd jacobian(const FitProblem::ResidualFn& fn, const VectorXd& p,
                  Eigen::Index n_res) {
    const Eigen::Index n_par = p.size();
    MatrixXd J(n_res, n_par);
    std::vector<double> work = from_eigen(p);
    for (Eigen::Index j = 0; j < n_par; ++j) {
        const double h = std::max(1e-6 * std::abs(p[j]), 1e-12);
        work[static_cast<std::size_t>(j)] = p[j] + h;
        VectorXd rp = probe_eval(fn, work);
        work[static_cast<std::size_t>(j)] = p[j] - h;
        VectorXd rm = probe_eval(fn, work);
        work[static_cast<std::size_t>(j)] = p[j];
        if (all_finite(rp) && all_finite(rm)) {
            J.col(j) = (rp - rm) / (2.0 * h);
        } else {
            VectorXd r0 = to_eigen(fn(work));
            if (all_finite(rp))
                J.col(j) = (rp - r0) / h;
            else if (all_finite(rm))
                J.col(j) = (r0 - rm) / h;
            else
                throw ModelDomainError("fit: residual not finite near parameters");
        }
    }
    return J;
}

// Identify the flattest direction of the correlation-normalized normal
// matrix and render it as a parameter combination.
std::string null_combination(const MatrixXd& normal, const std::vector<std::string>& names) {
    const Eigen::Index n = normal.rows();
    for (Eigen::Index i = 0; i < n; ++i)
        if (!(normal(i, i) > 0.0)) return names[static_cast<std::size_t>(i)];

    MatrixXd corr(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            corr(i, j) = normal(i, j) / std::sqrt(normal(i, i) * normal(j, j));
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(corr);
    VectorXd v = es.eigenvectors().col(0);  // smallest eigenvalue
    std::ostringstream os;
    bool first = true;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(v[i]) < 0.25) continue;
        if (!first) os << (v[i] >= 0 ? " + " : " - ");
        else if (v[i] < 0) os << "-";
        os << std::abs(v[i]) << "*" << names[static_cast<std::size_t>(i)];
        first = false;
    }
    return os.str();
}

double correlation_min_eigenvalue(const MatrixXd& normal) {
    const Eigen::Index n = normal.rows();
    for (Eigen::Index i = 0; i < n; ++i)
        if (!(normal(i, i) > 0.0)) return 0.0;
    MatrixXd corr(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            corr(i, j) = normal(i, j) / std::sqrt(normal(i, i) * normal(j, j));
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(corr);
    return es.eigenvalues().minCoeff();
}

}  // namespace

double FitResult::value(const std::string& name) const {
    for (std::size_t i = 0; i < parameter_names.size(); ++i)
        if (parameter_names[i] == name) return parameters[i];
    throw UsageError("FitResult: unknown parameter '" + name + "'");
}

double FitResult::uncertainty(std::size_t i) const {
    return std::sqrt(std::max(0.0, covariance_at(i, i)));
}

double FitResult::uncertainty(const std::string& name) const {
    for (std::size_t i = 0; i < parameter_names.size(); ++i)
        if (parameter_names[i] == name) return uncertainty(i);
    throw UsageError("FitResult: unknown parameter '" + name + "'");
}

double FitResult::covariance_at(std::size_t i, std::size_t j) const {
    return covariance[i * parameters.size() + j];
}

FitResult solve_least_squares(const FitProblem& prob) {
    const std::size_t n_par = prob.initial.size();
    if (n_par == 0) throw UsageError("solve_least_squares: no parameters");
    if (!prob.residual) throw UsageError("solve_least_squares: no residual function");
    if (!prob.lower.empty() && prob.lower.size() != n_par)
        throw UsageError("solve_least_squares: lower bound size mismatch");
    if (!prob.upper.empty() && prob.upper.size() != n_par)
        throw UsageError("solve_least_squares: upper bound size mismatch");

    std::vector<std::string> names = prob.names;
    if (names.empty())
        for (std::size_t i = 0; i < n_par; ++i) names.push_back("p" + std::to_string(i));

    const double inf = std::numeric_limits<double>::infinity();
    VectorXd lo = prob.lower.empty() ? VectorXd::Constant(n_par, -inf) : to_eigen(prob.lower);
    VectorXd hi = prob.upper.empty() ? VectorXd::Constant(n_par, inf) : to_eigen(prob.upper);
    VectorXd p = to_eigen(prob.initial);
    for (Eigen::Index i = 0; i < p.size(); ++i)
        if (p[i] < lo[i] || p[i] > hi[i])
            throw UsageError("solve_least_squares: initial value of " +
                             names[static_cast<std::size_t>(i)] + " outside bounds");

    VectorXd r = to_eigen(prob.residual(from_eigen(p)));
    if (static_cast<std::size_t>(r.size()) < n_par)
        throw UsageError("solve_least_squares: fewer residuals than parameters");
    if (!all_finite(r))
        throw ModelDomainError("solve_least_squares: residual not finite at start (" +
                               format_params(names, p) + ")");
    double cost = r.squaredNorm();

    double lambda = 0.0;  // pure Gauss-Newton until a step is rejected
    bool converged = false;
    int iter = 0;
    MatrixXd J = jacobian(prob.residual, p, r.size());

    for (iter = 1; iter <= prob.max_iterations; ++iter) {
        const MatrixXd normal = J.transpose() * J;
        const VectorXd grad = J.transpose() * r;

        bool accepted = false;
        while (!accepted) {
            MatrixXd damped = normal;
            const double diag_floor = 1e-30 * std::max(1.0, normal.diagonal().maxCoeff());
            for (Eigen::Index i = 0; i < damped.rows(); ++i)
                damped(i, i) += lambda * std::max(normal(i, i), diag_floor);

            VectorXd step = damped.ldlt().solve(-grad);
            if (!all_finite(step)) {
                if (lambda >= 1e14)
                    throw DegenerateFitError(
                        "solve_least_squares: normal matrix singular; unidentifiable "
                        "combination: " + null_combination(normal, names),
                        null_combination(normal, names));
                lambda = (lambda == 0.0) ? 1e-10 : lambda * 10.0;
                continue;
            }

            const VectorXd candidate = clamp_to_bounds(p + step, lo, hi);
            const VectorXd delta = candidate - p;
            VectorXd r_new = probe_eval(prob.residual, from_eigen(candidate));
            const double cost_new = all_finite(r_new) ? r_new.squaredNorm() : inf;

            if (cost_new <= cost) {
                // relative step / relative cost-change convergence test
                double rel_step = 0.0;
                for (Eigen::Index i = 0; i < p.size(); ++i)
                    rel_step = std::max(rel_step,
                                        std::abs(delta[i]) / std::max(std::abs(p[i]), 1e-300));
                const double rel_cost = (cost - cost_new) / std::max(cost, 1e-300);
                p = candidate;
                r = r_new;
                cost = cost_new;
                lambda = (lambda == 0.0) ? 0.0 : lambda / 10.0;
                accepted = true;
                if (rel_step < prob.xtol && rel_cost < prob.ftol) converged = true;
            } else {
                lambda = (lambda == 0.0) ? 1e-10 : lambda * 10.0;
                if (lambda > 1e14) {
                    accepted = true;  // stuck: report unconverged at current point
                    iter = prob.max_iterations;
                }
            }
        }
        if (converged || iter >= prob.max_iterations) break;
        J = jacobian(prob.residual, p, r.size());
    }

    // covariance from the Gauss-Newton normal matrix at the optimum
    J = jacobian(prob.residual, p, r.size());
    const MatrixXd normal = J.transpose() * J;
    const double min_eig = correlation_min_eigenvalue(normal);
    if (min_eig < 1e-10) {
        const std::string combo = null_combination(normal, names);
        throw DegenerateFitError(
            "fit is degenerate: unidentifiable parameter combination: " + combo, combo);
    }

    const std::size_t n_res = static_cast<std::size_t>(r.size());
    const std::size_t dof = n_res > n_par ? n_res - n_par : 1;
    const double reduced = cost / static_cast<double>(dof);
    MatrixXd cov = normal.inverse() * reduced;

    FitResult out;
    out.parameter_names = names;
    out.parameters = from_eigen(p);
    out.covariance.assign(cov.data(), cov.data() + cov.size());
    // Eigen is column-major; covariance is symmetric so the row-major view
    // is identical, but keep the contract explicit:
    for (std::size_t i = 0; i < n_par; ++i)
        for (std::size_t j = 0; j < n_par; ++j)
            out.covariance[i * n_par + j] = cov(static_cast<Eigen::Index>(i),
                                                static_cast<Eigen::Index>(j));
    out.reduced_chi_sq = reduced;
    out.n_iterations = iter;
    out.converged = converged;
    for (std::size_t i = 0; i < n_par; ++i)
        if (p[static_cast<Eigen::Index>(i)] <= lo[static_cast<Eigen::Index>(i)] ||
            p[static_cast<Eigen::Index>(i)] >= hi[static_cast<Eigen::Index>(i)])
            out.active_bounds.push_back(static_cast<int>(i));
    return out;
}

}  // namespace sbcool
