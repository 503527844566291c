#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/SparseCore>

namespace fracdd {

struct Rectangle {
    double ax = 0.0;
    double bx = 1.0;
    double ay = 0.0;
    double by = 1.0;
};

/// Lattice coordinates of a mesh node, 0..n along each axis.
struct LatticeNode {
    int ix = 0;
    int iy = 0;
    friend bool operator==(const LatticeNode&, const LatticeNode&) = default;
};

using Triangle = std::array<LatticeNode, 3>;

/// Uniform triangulation of a square: n x n square cells, each split along
/// the diagonal from its lower-left to its upper-right corner.
///
/// Interior nodes are numbered row-major: dof = (iy - 1) * (n - 1) + (ix - 1).
class UniformMesh {
public:
    UniformMesh(Rectangle bounds, int n);

    const Rectangle& bounds() const noexcept { return bounds_; }
    int cells_per_axis() const noexcept { return n_; }
    int interior_per_axis() const noexcept { return n_ - 1; }
    double h() const noexcept { return h_; }
    std::size_t num_dofs() const noexcept {
        return static_cast<std::size_t>(n_ - 1) * static_cast<std::size_t>(n_ - 1);
    }

    bool is_interior(LatticeNode node) const noexcept;
    std::size_t dof_index(LatticeNode node) const;
    LatticeNode node_of(std::size_t dof) const;
    std::array<double, 2> coordinates(LatticeNode node) const noexcept;

    /// All 2 n^2 triangles, cell by cell (lower triangle first).
    std::vector<Triangle> triangles() const;
    /// Number of triangles having `node` as a vertex.
    int incident_triangles(LatticeNode node) const noexcept;

private:
    Rectangle bounds_;
    int n_;
    double h_;
};

UniformMesh build_mesh(Rectangle bounds, int n);

/// Closed box of fine cells, [x0, x1] x [y0, y1] in lattice units.
struct LatticeBox {
    int x0 = 0;
    int x1 = 0;
    int y0 = 0;
    int y1 = 0;

    bool contains(LatticeNode p) const noexcept {
        return p.ix >= x0 && p.ix <= x1 && p.iy >= y0 && p.iy <= y1;
    }
    bool strictly_contains(LatticeNode p) const noexcept {
        return p.ix > x0 && p.ix < x1 && p.iy > y0 && p.iy < y1;
    }
    friend bool operator==(const LatticeBox&, const LatticeBox&) = default;
};

struct Subdomain {
    LatticeBox core;      // coarse cell
    LatticeBox extended;  // core grown by the overlap, clipped to the domain
    std::vector<std::size_t> dofs;  // interior fine DOFs strictly inside `extended`, ascending
    int color = 0;
};

/// Coarse cells of size H = n/m fine cells, each extended by `overlap_cells`
/// layers of fine cells. Subdomain i = cy * m + cx.
class TwoLevelDecomposition {
public:
    int coarse_per_axis() const noexcept { return m_; }
    int overlap_cells() const noexcept { return overlap_; }
    int cells_per_coarse() const noexcept { return ratio_; }
    double H() const noexcept { return H_; }
    double delta() const noexcept { return delta_; }
    std::size_t num_subdomains() const noexcept { return subdomains_.size(); }
    const std::vector<Subdomain>& subdomains() const noexcept { return subdomains_; }
    /// Subdomain indices per color class.
    const std::vector<std::vector<std::size_t>>& colors() const noexcept { return colors_; }

private:
    friend TwoLevelDecomposition build_decomposition(const UniformMesh&, int, int);

    int m_ = 0;
    int overlap_ = 0;
    int ratio_ = 0;
    double H_ = 0.0;
    double delta_ = 0.0;
    std::vector<Subdomain> subdomains_;
    std::vector<std::vector<std::size_t>> colors_;
};

/// Requires m | n and 1 <= overlap_cells < n/m.
///
/// Colors come from a periodic tiling of the coarse indices with the smallest
/// period p for which same-colored closed subdomains are separated; p = 2
/// (four colors) whenever 2 * overlap_cells < n/m.
TwoLevelDecomposition build_decomposition(const UniformMesh& mesh, int m, int overlap_cells);

/// Value of the reference hat centered at the origin, in units of the cell
/// size, for the lower-left/upper-right diagonal orientation.
double reference_hat(double xi, double eta) noexcept;

/// Nodal interpolation of the coarse hats onto the fine mesh:
/// (n-1)^2 x (m-1)^2, coarse nodes numbered row-major like fine DOFs.
Eigen::SparseMatrix<double> coarse_prolongation(const UniformMesh& fine, int m);

} // namespace fracdd
