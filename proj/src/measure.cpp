#include "fracdd/measure.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

#include "fracdd/errors.hpp"

namespace fracdd {

namespace {

double wrap_angle(double theta) {
    const double two_pi = 2.0 * std::numbers::pi;
    double t = std::fmod(theta, two_pi);
    if (t < 0.0) t += two_pi;
    return t;
}

double angular_distance(double a, double b) {
    const double d = std::abs(wrap_angle(a) - wrap_angle(b));
    return std::min(d, 2.0 * std::numbers::pi - d);
}

} // namespace

MeasureSpec MeasureSpec::parse(std::string_view text) {
    if (text == "axes4") {
        return {MeasureKind::Axes4, 4};
    }
    constexpr std::string_view prefix = "uniform:";
    if (text.starts_with(prefix)) {
        const auto digits = text.substr(prefix.size());
        int count = 0;
        const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), count);
        if (ec != std::errc() || ptr != digits.data() + digits.size()) {
            throw ConfigError("bad direction count in measure '" + std::string(text) + "'");
        }
        return {MeasureKind::Uniform, count};
    }
    throw ConfigError("unknown measure '" + std::string(text) + "' (expected axes4 or uniform:L)");
}

std::string MeasureSpec::to_string() const {
    return kind == MeasureKind::Axes4 ? std::string("axes4") : "uniform:" + std::to_string(directions);
}

DirectionalMeasure::DirectionalMeasure(std::vector<Direction> directions) : directions_(std::move(directions)) {
    for (const auto& d : directions_) {
        if (!(d.weight > 0.0) || !std::isfinite(d.theta)) {
            throw ConfigError("measure weights must be positive and angles finite");
        }
    }
}

double DirectionalMeasure::total_mass() const noexcept {
    double sum = 0.0;
    for (const auto& d : directions_) sum += d.weight;
    return sum;
}

bool DirectionalMeasure::is_antipodally_symmetric(double tol) const {
    try {
        (void)antipodal_pairs(tol);
        return true;
    } catch (const ConfigError&) {
        return false;
    }
}

std::vector<Direction> DirectionalMeasure::antipodal_pairs(double tol) const {
    std::vector<bool> used(directions_.size(), false);
    std::vector<Direction> pairs;
    for (std::size_t i = 0; i < directions_.size(); ++i) {
        if (used[i]) continue;
        const auto& d = directions_[i];
        bool matched = false;
        for (std::size_t j = 0; j < directions_.size(); ++j) {
            if (j == i || used[j]) continue;
            const auto& e = directions_[j];
            if (angular_distance(d.theta + std::numbers::pi, e.theta) <= tol &&
                std::abs(d.weight - e.weight) <= tol * std::max(1.0, d.weight)) {
                used[i] = used[j] = true;
                const double a = wrap_angle(d.theta);
                const double b = wrap_angle(e.theta);
                pairs.push_back({a < b ? a : b, d.weight});
                matched = true;
                break;
            }
        }
        if (!matched) {
            throw ConfigError("measure is not antipodally symmetric at theta = " + std::to_string(d.theta));
        }
    }
    return pairs;
}

DirectionalMeasure DirectionalMeasure::scaled(double factor) const {
    auto copy = directions_;
    for (auto& d : copy) d.weight *= factor;
    return DirectionalMeasure(std::move(copy));
}

DirectionalMeasure discretize_measure(const MeasureSpec& spec) {
    const double pi = std::numbers::pi;
    if (spec.kind == MeasureKind::Axes4) {
        return DirectionalMeasure({{0.0, 0.25}, {0.5 * pi, 0.25}, {pi, 0.25}, {1.5 * pi, 0.25}});
    }
    if (spec.directions < 2 || spec.directions % 2 != 0) {
        throw ConfigError("uniform measure needs an even direction count >= 2, got " +
                          std::to_string(spec.directions));
    }
    const int count = spec.directions;
    const double step = 2.0 * pi / count;
    std::vector<Direction> dirs;
    dirs.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        dirs.push_back({(k + 0.5) * step, step});
    }
    return DirectionalMeasure(std::move(dirs));
}

DirectionalMeasure discretize_measure(std::string_view spec) {
    return discretize_measure(MeasureSpec::parse(spec));
}

} // namespace fracdd
