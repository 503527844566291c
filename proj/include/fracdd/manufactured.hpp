#pragma once

#include <array>
#include <functional>

#include "fracdd/mesh.hpp"
#include "fracdd/operators.hpp"

namespace fracdd {

using ScalarField = std::function<double(double x, double y)>;

/// u(x, y) = ((2x - x^2)(2y - y^2))^4 on [0, 2]^2.
double manufactured_u(double x, double y);

/// Monomial coefficients of g(t) = (2t - t^2)^4 = 16t^4 - 32t^5 + 24t^6 - 8t^7 + t^8.
std::array<double, 9> profile_coefficients();

/// 0_D_t^mu g(t) + t_D_2^mu g(t); the right derivative is the left one at
/// 2 - t because g is symmetric about t = 1.
double profile_derivative_sum(double t, double mu);

/// Right-hand side reproducing manufactured_u for
///   -1/4 (D_x^{2a} left + right + D_y^{2a} left + right) u = f.
double manufactured_f_example1(double x, double y, double alpha = 0.75);

/// Entries (f, phi_j), degree-4 six-point rule on every triangle.
Vector load_vector(const UniformMesh& mesh, const ScalarField& f);

/// || u_exact - u_h ||_{L^2}, degree-4 rule on every triangle.
double l2_error(const UniformMesh& mesh, const Vector& uh, const ScalarField& exact);

} // namespace fracdd
