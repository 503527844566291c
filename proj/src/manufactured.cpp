#include "fracdd/manufactured.hpp"

#include <cmath>

#include "fracdd/errors.hpp"
#include "fracdd/fraccalc.hpp"

namespace fracdd {

namespace {

// Symmetric degree-4 rule with six points (barycentric orbits, weights sum to 1).
struct QuadPoint {
    std::array<double, 3> bary;
    double weight;
};

std::array<QuadPoint, 6> triangle_rule() {
    constexpr double a1 = 0.44594849091596488632, w1 = 0.22338158967801146570;
    constexpr double a2 = 0.09157621350977074346, w2 = 0.10995174365532186764;
    const double b1 = 1.0 - 2.0 * a1, b2 = 1.0 - 2.0 * a2;
    return {{{{b1, a1, a1}, w1},
             {{a1, b1, a1}, w1},
             {{a1, a1, b1}, w1},
             {{b2, a2, a2}, w2},
             {{a2, b2, a2}, w2},
             {{a2, a2, b2}, w2}}};
}

} // namespace

double manufactured_u(double x, double y) {
    const double gx = (2.0 * x - x * x), gy = (2.0 * y - y * y);
    const double p = gx * gy;
    return p * p * p * p;
}

std::array<double, 9> profile_coefficients() {
    return {0.0, 0.0, 0.0, 0.0, 16.0, -32.0, 24.0, -8.0, 1.0};
}

double profile_derivative_sum(double t, double mu) {
    static const auto coeffs = profile_coefficients();
    return frac_deriv_polynomial(coeffs, mu, t) + frac_deriv_polynomial(coeffs, mu, 2.0 - t);
}

double manufactured_f_example1(double x, double y, double alpha) {
    const double mu = 2.0 * alpha;
    auto g = [](double t) {
        const double v = 2.0 * t - t * t;
        return v * v * v * v;
    };
    return -0.25 * (profile_derivative_sum(x, mu) * g(y) + g(x) * profile_derivative_sum(y, mu));
}

Vector load_vector(const UniformMesh& mesh, const ScalarField& f) {
    const auto rule = triangle_rule();
    const double area = 0.5 * mesh.h() * mesh.h();
    Vector b = Vector::Zero(static_cast<Eigen::Index>(mesh.num_dofs()));
    for (const auto& tri : mesh.triangles()) {
        std::array<std::array<double, 2>, 3> xy{};
        for (std::size_t v = 0; v < 3; ++v) xy[v] = mesh.coordinates(tri[v]);
        std::array<double, 3> acc{};
        for (const auto& q : rule) {
            const double x = q.bary[0] * xy[0][0] + q.bary[1] * xy[1][0] + q.bary[2] * xy[2][0];
            const double y = q.bary[0] * xy[0][1] + q.bary[1] * xy[1][1] + q.bary[2] * xy[2][1];
            const double fw = f(x, y) * q.weight * area;
            for (std::size_t v = 0; v < 3; ++v) acc[v] += fw * q.bary[v];
        }
        for (std::size_t v = 0; v < 3; ++v) {
            if (mesh.is_interior(tri[v])) {
                b(static_cast<Eigen::Index>(mesh.dof_index(tri[v]))) += acc[v];
            }
        }
    }
    return b;
}

double l2_error(const UniformMesh& mesh, const Vector& uh, const ScalarField& exact) {
    if (static_cast<std::size_t>(uh.size()) != mesh.num_dofs()) {
        throw ConfigError("solution vector does not match the mesh");
    }
    const auto rule = triangle_rule();
    const double area = 0.5 * mesh.h() * mesh.h();
    double sum = 0.0;
    for (const auto& tri : mesh.triangles()) {
        std::array<std::array<double, 2>, 3> xy{};
        std::array<double, 3> nodal{};
        for (std::size_t v = 0; v < 3; ++v) {
            xy[v] = mesh.coordinates(tri[v]);
            nodal[v] = mesh.is_interior(tri[v]) ? uh(static_cast<Eigen::Index>(mesh.dof_index(tri[v]))) : 0.0;
        }
        for (const auto& q : rule) {
            const double x = q.bary[0] * xy[0][0] + q.bary[1] * xy[1][0] + q.bary[2] * xy[2][0];
            const double y = q.bary[0] * xy[0][1] + q.bary[1] * xy[1][1] + q.bary[2] * xy[2][1];
            const double discrete = q.bary[0] * nodal[0] + q.bary[1] * nodal[1] + q.bary[2] * nodal[2];
            const double e = exact(x, y) - discrete;
            sum += q.weight * area * e * e;
        }
    }
    return std::sqrt(sum);
}

} // namespace fracdd
