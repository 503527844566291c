#pragma once

#include <span>
#include <vector>

namespace fracdd {

/// Continuous piecewise-linear function of one variable, zero outside
/// [breakpoints.front(), breakpoints.back()].
struct PiecewiseLinearTrace {
    std::vector<double> breakpoints;  // strictly increasing
    std::vector<double> values;       // first and last must be zero

    /// Throws ConfigError when the invariants do not hold.
    void validate() const;
};

struct SlopeJump {
    double location = 0.0;
    double coefficient = 0.0;
};

/// v(x) = sum_j c_j (x - s_j)_+ ; the coefficients sum to zero and so do
/// their first moments, which keeps v compactly supported.
struct SlopeJumpForm {
    std::vector<SlopeJump> jumps;
};

SlopeJumpForm to_slope_jumps(const PiecewiseLinearTrace& trace);

/// Mirror image x -> -x.
SlopeJumpForm reflect(const SlopeJumpForm& form);

/// (x)_+^p, with an explicit zero branch for x <= 0.
double positive_power(double x, double p) noexcept;

/// 1 / Gamma(z); zero at the poles z = 0, -1, -2, ...
double reciprocal_gamma(double z) noexcept;

/// Left Riemann-Liouville derivative from -infinity of order alpha in (1/2, 1):
///   (1 / Gamma(2 - alpha)) sum_j c_j (x - s_j)_+^(1 - alpha).
double rl_left_deriv(const SlopeJumpForm& form, double alpha, double x);

/// Right Riemann-Liouville derivative to +infinity; the mirror of rl_left_deriv.
double rl_right_deriv(const SlopeJumpForm& form, double alpha, double x);

/// 0_D_x^mu x^p = Gamma(p + 1) / Gamma(p + 1 - mu) x^(p - mu), for mu in [0, 2).
/// p = 0 is rejected for mu in (1, 2) where the result is not integrable.
double rl_power_rule(int p, double mu, double x);

/// Left derivative from 0 of sum_p coeffs[p] x^p.
double frac_deriv_polynomial(std::span<const double> coeffs, double mu, double x);

} // namespace fracdd
