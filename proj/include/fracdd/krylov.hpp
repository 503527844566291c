#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "fracdd/operators.hpp"
#include "fracdd/schwarz.hpp"

namespace fracdd {

/// y = M x for an SPD map M.
using LinearMap = std::function<void(const Vector& x, Vector& y)>;

enum class StoppingRule {
    Increment,         // ||u^k - u^{k-1}||_inf <= tol_infty
    RelativeResidual,  // ||r^k||_2 <= residual_tol * ||f||_2
};

struct SolveConfig {
    double tol_infty = 1e-6;
    int max_iter = 1000;
    bool record_history = true;
    StoppingRule rule = StoppingRule::Increment;
    double residual_tol = 1e-8;
    bool record_directions = false;
    /// When set, the A-norm of the error is recorded after every step.
    std::optional<Vector> reference;

    void validate() const;
};

struct PcgReport {
    int iterations = 0;
    Vector solution;
    std::vector<double> increment_norms;  // ||u^k - u^{k-1}||_inf
    std::vector<double> residual_norms;   // ||f - A u^k||_2 (recursive residual)
    std::vector<double> energy_errors;    // ||u^k - reference||_A
    std::vector<double> cg_alpha;         // step lengths
    std::vector<double> cg_beta;          // direction updates
    std::vector<Vector> directions;       // search directions, if requested
    bool converged = false;
    bool max_iter_reached = false;
    double seconds = 0.0;
};

/// Preconditioned CG from u^0 = 0.
///
/// Besides the configured rule, the iteration also stops once the
/// preconditioned residual has vanished to round-off (sqrt(r.Br / r0.Br0) <=
/// 1e-12): the next increment would be zero in exact arithmetic.
/// Throws NumericalError on NaN or a non-positive curvature p.Ap.
PcgReport pcg(const LinearMap& a, const LinearMap& b, const Vector& f, const SolveConfig& cfg);
PcgReport pcg(const FractionalOperator& op, const SchwarzPreconditioner& pre, const Vector& f,
              const SolveConfig& cfg);
PcgReport cg_unpreconditioned(const FractionalOperator& op, const Vector& f, const SolveConfig& cfg);
PcgReport cg_unpreconditioned(const LinearMap& a, const Vector& f, const SolveConfig& cfg);

/// Lanczos matrix of the preconditioned operator B A assembled from the CG
/// coefficients of a run.
struct Tridiagonal {
    std::vector<double> diagonal;
    std::vector<double> off_diagonal;
};

Tridiagonal lanczos_tridiagonal(const PcgReport& report);
std::vector<double> ritz_values(const Tridiagonal& t);

struct ConditionEstimate {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double cond = 0.0;
    int probes_used = 0;
};

/// Extreme eigenvalues of B A from the Ritz values of CG runs on `probes`
/// seeded Gaussian right-hand sides. A probe that breaks down before
/// producing a Lanczos step is replaced by a fresh one.
ConditionEstimate estimate_condition(const LinearMap& a, const LinearMap& b, std::size_t dim, int probes = 5,
                                     std::uint64_t seed = 20240917);
ConditionEstimate estimate_condition(const FractionalOperator& op, const SchwarzPreconditioner& pre, int probes = 5,
                                     std::uint64_t seed = 20240917);

} // namespace fracdd
