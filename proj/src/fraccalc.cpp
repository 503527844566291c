#include "fracdd/fraccalc.hpp"

#include <cmath>
#include <string>

#include "fracdd/errors.hpp"

namespace fracdd {

namespace {

void check_order(double alpha) {
    if (!(alpha > 0.5 && alpha < 1.0)) {
        throw ConfigError("fractional order alpha must lie in (1/2, 1), got " + std::to_string(alpha));
    }
}

} // namespace

void PiecewiseLinearTrace::validate() const {
    if (breakpoints.size() < 2 || breakpoints.size() != values.size()) {
        throw ConfigError("trace needs at least two breakpoints and one value per breakpoint");
    }
    for (std::size_t j = 1; j < breakpoints.size(); ++j) {
        if (!(breakpoints[j] > breakpoints[j - 1])) {
            throw ConfigError("trace breakpoints must be strictly increasing");
        }
    }
    if (values.front() != 0.0 || values.back() != 0.0) {
        throw ConfigError("trace must vanish at both ends of its support");
    }
}

SlopeJumpForm to_slope_jumps(const PiecewiseLinearTrace& trace) {
    trace.validate();
    const std::size_t count = trace.breakpoints.size();
    SlopeJumpForm form;
    double previous_slope = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
        const double next_slope = j + 1 < count ? (trace.values[j + 1] - trace.values[j]) /
                                                      (trace.breakpoints[j + 1] - trace.breakpoints[j])
                                                : 0.0;
        const double c = next_slope - previous_slope;
        if (c != 0.0) {
            form.jumps.push_back({trace.breakpoints[j], c});
        }
        previous_slope = next_slope;
    }
    return form;
}

SlopeJumpForm reflect(const SlopeJumpForm& form) {
    SlopeJumpForm out;
    out.jumps.reserve(form.jumps.size());
    for (auto it = form.jumps.rbegin(); it != form.jumps.rend(); ++it) {
        out.jumps.push_back({-it->location, it->coefficient});
    }
    return out;
}

double positive_power(double x, double p) noexcept {
    return x > 0.0 ? std::exp(p * std::log(x)) : 0.0;
}

double reciprocal_gamma(double z) noexcept {
    if (z <= 0.0 && z == std::floor(z)) {
        return 0.0;
    }
    return 1.0 / std::tgamma(z);
}

double rl_left_deriv(const SlopeJumpForm& form, double alpha, double x) {
    check_order(alpha);
    const double beta = 1.0 - alpha;
    double sum = 0.0;
    for (const auto& jump : form.jumps) {
        sum += jump.coefficient * positive_power(x - jump.location, beta);
    }
    return sum * reciprocal_gamma(2.0 - alpha);
}

double rl_right_deriv(const SlopeJumpForm& form, double alpha, double x) {
    check_order(alpha);
    const double beta = 1.0 - alpha;
    double sum = 0.0;
    for (const auto& jump : form.jumps) {
        sum += jump.coefficient * positive_power(jump.location - x, beta);
    }
    return sum * reciprocal_gamma(2.0 - alpha);
}

double rl_power_rule(int p, double mu, double x) {
    if (p < 0) {
        throw ConfigError("power rule needs a nonnegative exponent");
    }
    if (!(mu >= 0.0 && mu < 2.0)) {
        throw ConfigError("power rule order must lie in [0, 2), got " + std::to_string(mu));
    }
    if (p == 0 && mu > 1.0) {
        throw ConfigError("derivative of order in (1, 2) of a constant is not integrable");
    }
    if (x < 0.0) {
        throw ConfigError("power rule is defined for x >= 0");
    }
    const double scale = reciprocal_gamma(p + 1.0 - mu);
    if (scale == 0.0) {
        return 0.0;
    }
    return std::tgamma(p + 1.0) * scale * std::pow(x, p - mu);
}

double frac_deriv_polynomial(std::span<const double> coeffs, double mu, double x) {
    if (mu > 1.0 && !coeffs.empty() && coeffs[0] != 0.0) {
        throw ConfigError("polynomial must vanish at 0 for orders in (1, 2)");
    }
    double sum = 0.0;
    for (std::size_t p = 0; p < coeffs.size(); ++p) {
        if (coeffs[p] != 0.0) {
            sum += coeffs[p] * rl_power_rule(static_cast<int>(p), mu, x);
        }
    }
    return sum;
}

} // namespace fracdd
