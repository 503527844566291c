#pragma once

#include <cstddef>
#include <vector>

namespace fracdd {

/// Lattice offset (di along x, dj along y) between two interior nodes.
struct Offset {
    int di = 0;
    int dj = 0;
    friend bool operator==(const Offset&, const Offset&) = default;
};

/// Dense table of translation-invariant coefficients over the square window
/// |di|, |dj| <= radius; lookups outside the window return zero.
class OffsetTable {
public:
    OffsetTable() = default;
    explicit OffsetTable(int radius) : radius_(radius), values_(side() * side(), 0.0) {}

    int radius() const noexcept { return radius_; }
    std::size_t side() const noexcept { return static_cast<std::size_t>(2 * radius_ + 1); }

    bool in_window(Offset o) const noexcept {
        return o.di >= -radius_ && o.di <= radius_ && o.dj >= -radius_ && o.dj <= radius_;
    }
    double at(Offset o) const noexcept { return in_window(o) ? values_[slot(o)] : 0.0; }
    double& ref(Offset o) { return values_[slot(o)]; }

    const std::vector<double>& values() const noexcept { return values_; }

    /// Largest |value(o) - value(-o)| relative to the largest magnitude.
    double asymmetry() const noexcept;

private:
    std::size_t slot(Offset o) const noexcept {
        return static_cast<std::size_t>(o.dj + radius_) * side() + static_cast<std::size_t>(o.di + radius_);
    }

    int radius_ = 0;
    std::vector<double> values_;
};

} // namespace fracdd
