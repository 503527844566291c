#include "fracdd/krylov.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "fracdd/errors.hpp"

namespace fracdd {

namespace {

constexpr double kExactTermination = 1e-12;

LinearMap wrap(const FractionalOperator& op) {
    return [&op](const Vector& x, Vector& y) { op.apply(x, y); };
}

LinearMap wrap(const SchwarzPreconditioner& pre) {
    return [&pre](const Vector& x, Vector& y) { y = pre.apply(x); };
}

LinearMap identity_map() {
    return [](const Vector& x, Vector& y) { y = x; };
}

} // namespace

void SolveConfig::validate() const {
    if (!(tol_infty > 0.0)) {
        throw ConfigError("tol_infty must be positive");
    }
    if (max_iter < 1) {
        throw ConfigError("max_iter must be at least 1");
    }
    if (rule == StoppingRule::RelativeResidual && !(residual_tol > 0.0)) {
        throw ConfigError("residual_tol must be positive");
    }
}

PcgReport pcg(const LinearMap& a, const LinearMap& b, const Vector& f, const SolveConfig& cfg) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    const Eigen::Index n = f.size();

    PcgReport report;
    Vector u = Vector::Zero(n);
    Vector r = f;
    Vector z(n), q(n), scratch(n);
    b(r, z);
    Vector p = z;
    double rz = r.dot(z);
    const double rz0 = rz;
    const double f_norm = f.norm();
    if (!std::isfinite(rz) || rz < 0.0) {
        throw NumericalError("preconditioner produced a non-positive or NaN residual product");
    }

    auto energy_error = [&]() {
        const Vector e = u - *cfg.reference;
        a(e, scratch);
        return std::sqrt(std::max(0.0, e.dot(scratch)));
    };

    for (int k = 1; k <= cfg.max_iter; ++k) {
        report.iterations = k;
        if (rz == 0.0) {
            // Zero residual: this step leaves u unchanged.
            if (cfg.record_history) {
                report.increment_norms.push_back(0.0);
                report.residual_norms.push_back(r.norm());
                if (cfg.reference) report.energy_errors.push_back(energy_error());
            }
            report.converged = true;
            break;
        }
        if (cfg.record_directions) {
            report.directions.push_back(p);
        }
        a(p, q);
        const double curvature = p.dot(q);
        if (!std::isfinite(curvature) || curvature <= 0.0) {
            throw NumericalError("CG curvature p.Ap = " + std::to_string(curvature) + " at iteration " +
                                 std::to_string(k));
        }
        const double step = rz / curvature;
        u.noalias() += step * p;
        r.noalias() -= step * q;
        const double increment = std::abs(step) * p.lpNorm<Eigen::Infinity>();
        const double residual = r.norm();
        if (!std::isfinite(increment) || !std::isfinite(residual)) {
            throw NumericalError("NaN encountered in CG at iteration " + std::to_string(k));
        }
        report.cg_alpha.push_back(step);
        if (cfg.record_history) {
            report.increment_norms.push_back(increment);
            report.residual_norms.push_back(residual);
            if (cfg.reference) report.energy_errors.push_back(energy_error());
        }

        b(r, z);
        const double rz_next = r.dot(z);
        if (!std::isfinite(rz_next) || rz_next < 0.0) {
            throw NumericalError("preconditioner produced a non-positive or NaN residual product");
        }
        const bool rule_met = cfg.rule == StoppingRule::Increment ? increment <= cfg.tol_infty
                                                                   : residual <= cfg.residual_tol * f_norm;
        const bool exact = rz_next <= kExactTermination * kExactTermination * rz0;
        if (rule_met || exact) {
            report.converged = true;
            break;
        }
        const double beta = rz_next / rz;
        report.cg_beta.push_back(beta);
        p = z + beta * p;
        rz = rz_next;
    }
    report.max_iter_reached = !report.converged;
    report.solution = std::move(u);
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

PcgReport pcg(const FractionalOperator& op, const SchwarzPreconditioner& pre, const Vector& f,
              const SolveConfig& cfg) {
    if (static_cast<std::size_t>(f.size()) != op.dim() || pre.dim() != op.dim()) {
        throw ConfigError("operator, preconditioner and load vector dimensions differ");
    }
    return pcg(wrap(op), wrap(pre), f, cfg);
}

PcgReport cg_unpreconditioned(const FractionalOperator& op, const Vector& f, const SolveConfig& cfg) {
    if (static_cast<std::size_t>(f.size()) != op.dim()) {
        throw ConfigError("operator and load vector dimensions differ");
    }
    return pcg(wrap(op), identity_map(), f, cfg);
}

PcgReport cg_unpreconditioned(const LinearMap& a, const Vector& f, const SolveConfig& cfg) {
    return pcg(a, identity_map(), f, cfg);
}

Tridiagonal lanczos_tridiagonal(const PcgReport& report) {
    Tridiagonal t;
    const auto& alpha = report.cg_alpha;
    const auto& beta = report.cg_beta;
    for (std::size_t j = 0; j < alpha.size(); ++j) {
        double d = 1.0 / alpha[j];
        if (j > 0) d += beta[j - 1] / alpha[j - 1];
        t.diagonal.push_back(d);
        if (j + 1 < alpha.size()) {
            t.off_diagonal.push_back(std::sqrt(beta[j]) / alpha[j]);
        }
    }
    return t;
}

std::vector<double> ritz_values(const Tridiagonal& t) {
    const auto size = static_cast<Eigen::Index>(t.diagonal.size());
    if (size == 0) return {};
    if (size == 1) return {t.diagonal.front()};
    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(t.diagonal.data(), size);
    Eigen::VectorXd sub = Eigen::Map<const Eigen::VectorXd>(t.off_diagonal.data(), size - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("Lanczos tridiagonal eigensolve failed");
    }
    const auto& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

ConditionEstimate estimate_condition(const LinearMap& a, const LinearMap& b, std::size_t dim, int probes,
                                     std::uint64_t seed) {
    if (probes < 1) {
        throw ConfigError("condition estimation needs at least one probe");
    }
    SolveConfig cfg;
    cfg.rule = StoppingRule::RelativeResidual;
    cfg.residual_tol = 1e-10;
    cfg.max_iter = static_cast<int>(std::min<std::size_t>(dim, 500));
    cfg.record_history = false;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    ConditionEstimate est;
    est.lambda_min = std::numeric_limits<double>::infinity();
    est.lambda_max = 0.0;
    int attempts = 0;
    while (est.probes_used < probes && attempts < 3 * probes) {
        ++attempts;
        Vector f(static_cast<Eigen::Index>(dim));
        for (auto& v : f) v = gauss(rng);
        const auto report = pcg(a, b, f, cfg);
        const auto ritz = ritz_values(lanczos_tridiagonal(report));
        if (ritz.empty()) {
            continue;  // breakdown before the first Lanczos step
        }
        est.lambda_min = std::min(est.lambda_min, ritz.front());
        est.lambda_max = std::max(est.lambda_max, ritz.back());
        ++est.probes_used;
    }
    if (est.probes_used == 0 || !(est.lambda_min > 0.0)) {
        throw NumericalError("condition estimation failed to produce positive Ritz values");
    }
    est.cond = est.lambda_max / est.lambda_min;
    return est;
}

ConditionEstimate estimate_condition(const FractionalOperator& op, const SchwarzPreconditioner& pre, int probes,
                                     std::uint64_t seed) {
    return estimate_condition(wrap(op), wrap(pre), op.dim(), probes, seed);
}

} // namespace fracdd
