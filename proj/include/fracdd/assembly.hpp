#pragma once

#include "fracdd/measure.hpp"
#include "fracdd/mesh.hpp"
#include "fracdd/offset_table.hpp"
#include "fracdd/operators.hpp"

namespace fracdd {

/// (D^alpha_theta phi_0, D^alpha_{theta+pi} phi_offset) for two interior hats.
///
/// Both hats are sliced by lines parallel to (cos theta, sin theta). On each
/// line the traces are piecewise linear with slope jumps where the line
/// crosses a mesh edge; the jump sizes are constant along the transverse
/// coordinate and the crossing abscissae move linearly with it. The line
/// integral of the left derivative of one trace against the right derivative
/// of the other reduces, through the Beta integral, to
///   sum_{j,k} a_j b_k (r_k - s_j)_+^(3 - 2 alpha) / Gamma(4 - 2 alpha),
/// which is integrated in closed form over each transverse range where both
/// edges are crossed.
double directional_entry(const UniformMesh& mesh, double theta, double alpha, Offset offset);

struct StiffnessEntryTable {
    double theta = 0.0;
    double alpha = 0.0;
    OffsetTable entries;       // indexed by index_j - index_i
    int cutoff_radius = 0;     // largest Chebyshev radius of a retained entry
    std::size_t retained = 0;  // number of nonzero entries kept
};

/// Entries for every offset realizable between interior DOFs, dropping those
/// below drop_tol * |entry(0, 0)|.
StiffnessEntryTable assemble_directional_stiffness(const UniformMesh& mesh, double theta, double alpha,
                                                   double drop_tol = 1e-12);

/// P1 mass stencil (radius 1) of the fixed-diagonal triangulation.
OffsetTable assemble_mass(const UniformMesh& mesh);

/// A = -sum_k p_k S_{theta_k} + c M, stored as its translation-invariant symbol.
FractionalOperator build_operator(const UniformMesh& mesh, double alpha, double c, const DirectionalMeasure& measure,
                                  double drop_tol = 1e-12);

} // namespace fracdd
