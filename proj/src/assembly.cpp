#include "fracdd/assembly.hpp"

#include <array>
#include <cmath>
#include <string>

#include "fracdd/errors.hpp"
#include "fracdd/fraccalc.hpp"

namespace fracdd {

namespace {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

/// Unit direction with exact zeros on the axes.
Vec2 unit_direction(double theta) {
    double c = std::cos(theta), s = std::sin(theta);
    if (std::abs(c) < 1e-15) c = 0.0;
    if (std::abs(s) < 1e-15) s = 0.0;
    return {c, s};
}

/// One mesh edge of a hat's support as seen from lines parallel to z: the
/// edge is crossed for transverse coordinates rho in [rho_lo, rho_hi], at
/// abscissa t = t_ref + slope * (rho - rho_ref), where the trace's slope
/// jumps by `jump`.
struct CrossingEdge {
    double rho_lo = 0.0;
    double rho_hi = 0.0;
    double rho_ref = 0.0;
    double t_ref = 0.0;
    double slope = 0.0;
    double jump = 0.0;

    double abscissa(double rho) const { return t_ref + slope * (rho - rho_ref); }
};

/// Hat of unit mesh size centered at the origin. Neighbors counter-clockwise;
/// triangle k is (origin, N_k, N_{k+1}).
constexpr std::array<Vec2, 6> kNeighbors{{{1, 0}, {1, 1}, {0, 1}, {-1, 0}, {-1, -1}, {0, -1}}};

std::array<Vec2, 6> triangle_gradients() {
    std::array<Vec2, 6> g{};
    for (std::size_t k = 0; k < 6; ++k) {
        // g . N_k = -1 and g . N_{k+1} = -1
        const Vec2 a = kNeighbors[k], b = kNeighbors[(k + 1) % 6];
        const double det = a.x * b.y - a.y * b.x;
        g[k] = {(-b.y + a.y) / det, (-a.x + b.x) / det};
    }
    return g;
}

/// Left normal of the segment p -> q, unit length.
Vec2 left_normal(Vec2 p, Vec2 q) {
    const double dx = q.x - p.x, dy = q.y - p.y;
    const double len = std::hypot(dx, dy);
    return {-dy / len, dx / len};
}

std::vector<CrossingEdge> hat_crossings(Vec2 z) {
    static const std::array<Vec2, 6> grads = triangle_gradients();
    const Vec2 normal{-z.y, z.x};
    std::vector<CrossingEdge> edges;
    edges.reserve(12);

    auto add_edge = [&](Vec2 p, Vec2 q, double kink) {
        const double r0 = dot(p, normal), r1 = dot(q, normal);
        const double w = r1 - r0;
        if (std::abs(w) < 1e-14) {
            return;  // parallel to the slicing lines
        }
        const Vec2 nu = left_normal(p, q);
        CrossingEdge e;
        e.rho_lo = std::min(r0, r1);
        e.rho_hi = std::max(r0, r1);
        e.rho_ref = r0;
        e.t_ref = dot(p, z);
        e.slope = (dot(q, z) - dot(p, z)) / w;
        e.jump = kink * std::abs(dot(nu, z));
        if (e.jump != 0.0) {
            edges.push_back(e);
        }
    };

    const Vec2 origin{0, 0};
    for (std::size_t k = 0; k < 6; ++k) {
        // Spoke origin -> N_k: triangle k on the left, triangle k-1 on the right.
        const Vec2 nu = left_normal(origin, kNeighbors[k]);
        const Vec2 jump_grad{grads[k].x - grads[(k + 5) % 6].x, grads[k].y - grads[(k + 5) % 6].y};
        add_edge(origin, kNeighbors[k], dot(jump_grad, nu));
    }
    for (std::size_t k = 0; k < 6; ++k) {
        // Rim N_k -> N_{k+1}: triangle k on the left, outside on the right.
        const Vec2 p = kNeighbors[k], q = kNeighbors[(k + 1) % 6];
        add_edge(p, q, dot(grads[k], left_normal(p, q)));
    }
    return edges;
}

/// Mean of d_+^gamma over a linear ramp d from a to b.
double mean_positive_power(double a, double b, double gamma) {
    if (a <= 0.0 && b <= 0.0) {
        return 0.0;
    }
    const double diff = b - a;
    const double scale = std::max(std::abs(a), std::abs(b));
    if (std::abs(diff) > 1e-3 * scale) {
        const double g1 = gamma + 1.0;
        return (positive_power(b, g1) - positive_power(a, g1)) / (g1 * diff);
    }
    // Both positive and nearly equal: expand around the midpoint.
    const double mid = 0.5 * (a + b);
    const double e2 = (0.5 * diff / mid) * (0.5 * diff / mid);
    const double c2 = gamma * (gamma - 1.0) / 6.0;
    const double c4 = gamma * (gamma - 1.0) * (gamma - 2.0) * (gamma - 3.0) / 120.0;
    return std::pow(mid, gamma) * (1.0 + e2 * (c2 + e2 * c4));
}

/// Entry at unit mesh size; scales as h^(2 - 2 alpha).
double unit_entry(const std::vector<CrossingEdge>& base, Vec2 z, double alpha, Offset offset) {
    const Vec2 normal{-z.y, z.x};
    const Vec2 shift{static_cast<double>(offset.di), static_cast<double>(offset.dj)};
    const double rho_shift = dot(shift, normal);
    const double t_shift = dot(shift, z);
    const double gamma = 3.0 - 2.0 * alpha;

    double sum = 0.0;
    for (const auto& left : base) {
        for (const auto& right_base : base) {
            const double lo = std::max(left.rho_lo, right_base.rho_lo + rho_shift);
            const double hi = std::min(left.rho_hi, right_base.rho_hi + rho_shift);
            if (!(hi > lo)) continue;
            auto right_abscissa = [&](double rho) { return right_base.abscissa(rho - rho_shift) + t_shift; };
            const double d_lo = right_abscissa(lo) - left.abscissa(lo);
            const double d_hi = right_abscissa(hi) - left.abscissa(hi);
            sum += left.jump * right_base.jump * (hi - lo) * mean_positive_power(d_lo, d_hi, gamma);
        }
    }
    return sum * reciprocal_gamma(4.0 - 2.0 * alpha);
}

void check_alpha(double alpha) {
    if (!(alpha > 0.5 && alpha < 1.0)) {
        throw ConfigError("fractional order alpha must lie in (1/2, 1), got " + std::to_string(alpha));
    }
}

} // namespace

double directional_entry(const UniformMesh& mesh, double theta, double alpha, Offset offset) {
    check_alpha(alpha);
    const int reach = mesh.cells_per_axis() - 2;
    if (std::abs(offset.di) > reach || std::abs(offset.dj) > reach) {
        throw ConfigError("offset (" + std::to_string(offset.di) + ", " + std::to_string(offset.dj) +
                          ") does not connect two interior DOFs");
    }
    const Vec2 z = unit_direction(theta);
    const auto edges = hat_crossings(z);
    return unit_entry(edges, z, alpha, offset) * std::pow(mesh.h(), 2.0 - 2.0 * alpha);
}

StiffnessEntryTable assemble_directional_stiffness(const UniformMesh& mesh, double theta, double alpha,
                                                   double drop_tol) {
    check_alpha(alpha);
    if (!(drop_tol >= 0.0)) {
        throw ConfigError("drop tolerance must be nonnegative");
    }
    const int reach = mesh.cells_per_axis() - 2;
    const Vec2 z = unit_direction(theta);
    const auto edges = hat_crossings(z);
    const double scale = std::pow(mesh.h(), 2.0 - 2.0 * alpha);

    StiffnessEntryTable table;
    table.theta = theta;
    table.alpha = alpha;
    table.entries = OffsetTable(reach);
    auto& entries = table.entries;

#pragma omp parallel for schedule(dynamic)
    for (int dj = -reach; dj <= reach; ++dj) {
        for (int di = -reach; di <= reach; ++di) {
            entries.ref({di, dj}) = unit_entry(edges, z, alpha, {di, dj}) * scale;
        }
    }

    const double threshold = drop_tol * std::abs(entries.at({0, 0}));
    for (int dj = -reach; dj <= reach; ++dj) {
        for (int di = -reach; di <= reach; ++di) {
            double& v = entries.ref({di, dj});
            if (std::abs(v) < threshold) {
                v = 0.0;
            }
            if (v != 0.0) {
                ++table.retained;
                table.cutoff_radius = std::max({table.cutoff_radius, std::abs(di), std::abs(dj)});
            }
        }
    }
    return table;
}

OffsetTable assemble_mass(const UniformMesh& mesh) {
    // Element mass on a triangle of area |T|: |T| / 12 * (1 + delta_ab).
    const double area = 0.5 * mesh.h() * mesh.h();
    OffsetTable mass(1);
    for (std::size_t k = 0; k < 6; ++k) {
        const Vec2 a = kNeighbors[k], b = kNeighbors[(k + 1) % 6];
        mass.ref({0, 0}) += area / 6.0;
        mass.ref({static_cast<int>(a.x), static_cast<int>(a.y)}) += area / 12.0;
        mass.ref({static_cast<int>(b.x), static_cast<int>(b.y)}) += area / 12.0;
    }
    return mass;
}

FractionalOperator build_operator(const UniformMesh& mesh, double alpha, double c, const DirectionalMeasure& measure,
                                  double drop_tol) {
    check_alpha(alpha);
    if (!(c >= 0.0)) {
        throw ConfigError("reaction coefficient c must be nonnegative");
    }
    if (!(drop_tol >= 0.0)) {
        throw ConfigError("drop tolerance must be nonnegative");
    }
    const auto pairs = measure.antipodal_pairs();
    const int reach = mesh.cells_per_axis() - 2;
    OffsetTable symbol(reach);

    // entry(theta + pi, d) = entry(theta, -d), so one table per pair suffices
    // and the pair sum is symmetric by construction.
    for (const auto& pair : pairs) {
        const auto table = assemble_directional_stiffness(mesh, pair.theta, alpha, 0.0);
        for (int dj = -reach; dj <= reach; ++dj) {
            for (int di = -reach; di <= reach; ++di) {
                const double both = table.entries.at({di, dj}) + table.entries.at({-di, -dj});
                symbol.ref({di, dj}) += -pair.weight * both;
            }
        }
    }
    if (c != 0.0) {
        const auto mass = assemble_mass(mesh);
        for (int dj = -1; dj <= 1; ++dj) {
            for (int di = -1; di <= 1; ++di) {
                if (symbol.in_window({di, dj})) {
                    symbol.ref({di, dj}) += c * mass.at({di, dj});
                }
            }
        }
    }
    const double threshold = drop_tol * std::abs(symbol.at({0, 0}));
    for (int dj = -reach; dj <= reach; ++dj) {
        for (int di = -reach; di <= reach; ++di) {
            if (std::abs(symbol.at({di, dj})) < threshold) {
                symbol.ref({di, dj}) = 0.0;
            }
        }
    }
    return FractionalOperator(mesh.cells_per_axis(), alpha, c, measure, std::move(symbol));
}

} // namespace fracdd
