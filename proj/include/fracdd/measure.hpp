#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fracdd {

struct Direction {
    double theta = 0.0;   // radians, [0, 2 pi)
    double weight = 0.0;  // > 0
};

enum class MeasureKind { Axes4, Uniform };

/// Named measure: "axes4" or "uniform:L".
struct MeasureSpec {
    MeasureKind kind = MeasureKind::Axes4;
    int directions = 4;

    static MeasureSpec parse(std::string_view text);
    std::string to_string() const;
};

/// Discrete directional measure M(theta) = sum_k p_k delta(theta - theta_k).
class DirectionalMeasure {
public:
    DirectionalMeasure() = default;
    explicit DirectionalMeasure(std::vector<Direction> directions);

    const std::vector<Direction>& directions() const noexcept { return directions_; }
    double total_mass() const noexcept;
    bool is_antipodally_symmetric(double tol = 1e-12) const;

    /// One representative with theta in [0, pi) per antipodal pair, carrying
    /// the common weight. Throws ConfigError for asymmetric measures.
    std::vector<Direction> antipodal_pairs(double tol = 1e-12) const;

    DirectionalMeasure scaled(double factor) const;

private:
    std::vector<Direction> directions_;
};

DirectionalMeasure discretize_measure(const MeasureSpec& spec);
DirectionalMeasure discretize_measure(std::string_view spec);

} // namespace fracdd
