#include "fracdd/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracdd/errors.hpp"

namespace fracdd {

namespace {

bool nearly_equal(double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

} // namespace

UniformMesh::UniformMesh(Rectangle bounds, int n) : bounds_(bounds), n_(n), h_(0.0) {
    if (n < 2) {
        throw ConfigError("mesh needs at least 2 cells per axis, got " + std::to_string(n));
    }
    const double wx = bounds.bx - bounds.ax;
    const double wy = bounds.by - bounds.ay;
    if (!(wx > 0.0) || !(wy > 0.0)) {
        throw ConfigError("mesh bounds must have positive extent");
    }
    if (!nearly_equal(wx, wy)) {
        throw ConfigError("mesh bounds must be a square");
    }
    h_ = wx / n;
}

bool UniformMesh::is_interior(LatticeNode node) const noexcept {
    return node.ix > 0 && node.ix < n_ && node.iy > 0 && node.iy < n_;
}

std::size_t UniformMesh::dof_index(LatticeNode node) const {
    if (!is_interior(node)) {
        throw ConfigError("node (" + std::to_string(node.ix) + ", " + std::to_string(node.iy) +
                          ") is not interior");
    }
    return static_cast<std::size_t>(node.iy - 1) * static_cast<std::size_t>(n_ - 1) +
           static_cast<std::size_t>(node.ix - 1);
}

LatticeNode UniformMesh::node_of(std::size_t dof) const {
    if (dof >= num_dofs()) {
        throw ConfigError("dof index " + std::to_string(dof) + " out of range");
    }
    const auto side = static_cast<std::size_t>(n_ - 1);
    return {static_cast<int>(dof % side) + 1, static_cast<int>(dof / side) + 1};
}

std::array<double, 2> UniformMesh::coordinates(LatticeNode node) const noexcept {
    return {bounds_.ax + node.ix * h_, bounds_.ay + node.iy * h_};
}

std::vector<Triangle> UniformMesh::triangles() const {
    std::vector<Triangle> out;
    out.reserve(static_cast<std::size_t>(2 * n_ * n_));
    for (int j = 0; j < n_; ++j) {
        for (int i = 0; i < n_; ++i) {
            const LatticeNode p00{i, j}, p10{i + 1, j}, p11{i + 1, j + 1}, p01{i, j + 1};
            out.push_back({p00, p10, p11});
            out.push_back({p00, p11, p01});
        }
    }
    return out;
}

int UniformMesh::incident_triangles(LatticeNode node) const noexcept {
    // Cell (i, j) contributes its lower triangle to nodes (i,j), (i+1,j),
    // (i+1,j+1) and its upper triangle to (i,j), (i+1,j+1), (i,j+1).
    int count = 0;
    auto cell_exists = [&](int i, int j) { return i >= 0 && i < n_ && j >= 0 && j < n_; };
    const int x = node.ix, y = node.iy;
    if (cell_exists(x, y)) count += 2;          // corner (i, j)
    if (cell_exists(x - 1, y)) count += 1;      // corner (i+1, j): lower only
    if (cell_exists(x - 1, y - 1)) count += 2;  // corner (i+1, j+1)
    if (cell_exists(x, y - 1)) count += 1;      // corner (i, j+1): upper only
    return count;
}

UniformMesh build_mesh(Rectangle bounds, int n) {
    return UniformMesh(bounds, n);
}

TwoLevelDecomposition build_decomposition(const UniformMesh& mesh, int m, int overlap_cells) {
    const int n = mesh.cells_per_axis();
    if (m < 1 || n % m != 0) {
        throw ConfigError("coarse size m = " + std::to_string(m) + " must divide n = " + std::to_string(n));
    }
    const int ratio = n / m;
    if (overlap_cells < 1 || overlap_cells >= ratio) {
        throw ConfigError("overlap_cells = " + std::to_string(overlap_cells) + " must satisfy 1 <= k < n/m = " +
                          std::to_string(ratio));
    }

    TwoLevelDecomposition d;
    d.m_ = m;
    d.overlap_ = overlap_cells;
    d.ratio_ = ratio;
    d.H_ = mesh.h() * ratio;
    d.delta_ = mesh.h() * overlap_cells;

    // Same-colored boxes are p coarse cells apart; they are separated when
    // (p - 1) * ratio > 2 * overlap.
    const int period = std::min(2 * overlap_cells / ratio + 2, std::max(m, 1));
    const int side = n - 1;

    d.subdomains_.reserve(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
    for (int cy = 0; cy < m; ++cy) {
        for (int cx = 0; cx < m; ++cx) {
            Subdomain s;
            s.core = {cx * ratio, (cx + 1) * ratio, cy * ratio, (cy + 1) * ratio};
            s.extended = {std::max(0, s.core.x0 - overlap_cells), std::min(n, s.core.x1 + overlap_cells),
                          std::max(0, s.core.y0 - overlap_cells), std::min(n, s.core.y1 + overlap_cells)};
            for (int iy = s.extended.y0 + 1; iy < s.extended.y1; ++iy) {
                for (int ix = s.extended.x0 + 1; ix < s.extended.x1; ++ix) {
                    s.dofs.push_back(static_cast<std::size_t>(iy - 1) * static_cast<std::size_t>(side) +
                                     static_cast<std::size_t>(ix - 1));
                }
            }
            s.color = (cx % period) + period * (cy % period);
            d.subdomains_.push_back(std::move(s));
        }
    }

    // Compact color numbering in order of first appearance.
    std::vector<int> remap(static_cast<std::size_t>(period * period), -1);
    for (std::size_t i = 0; i < d.subdomains_.size(); ++i) {
        auto& slot = remap[static_cast<std::size_t>(d.subdomains_[i].color)];
        if (slot < 0) {
            slot = static_cast<int>(d.colors_.size());
            d.colors_.emplace_back();
        }
        d.subdomains_[i].color = slot;
        d.colors_[static_cast<std::size_t>(slot)].push_back(i);
    }
    return d;
}

double reference_hat(double xi, double eta) noexcept {
    return std::max(0.0, 1.0 - std::max({std::abs(xi), std::abs(eta), std::abs(xi - eta)}));
}

Eigen::SparseMatrix<double> coarse_prolongation(const UniformMesh& fine, int m) {
    const int n = fine.cells_per_axis();
    if (m < 1 || n % m != 0) {
        throw ConfigError("coarse size m = " + std::to_string(m) + " must divide n = " + std::to_string(n));
    }
    const int ratio = n / m;
    const auto fine_dim = static_cast<Eigen::Index>(fine.num_dofs());
    const auto coarse_side = m - 1;
    const auto coarse_dim = static_cast<Eigen::Index>(coarse_side) * coarse_side;

    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(static_cast<std::size_t>(coarse_dim) * static_cast<std::size_t>(3 * ratio * ratio + 1));
    for (int cy = 1; cy < m; ++cy) {
        for (int cx = 1; cx < m; ++cx) {
            const Eigen::Index col = static_cast<Eigen::Index>(cy - 1) * coarse_side + (cx - 1);
            const int x0 = cx * ratio, y0 = cy * ratio;
            for (int iy = y0 - ratio + 1; iy < y0 + ratio; ++iy) {
                for (int ix = x0 - ratio + 1; ix < x0 + ratio; ++ix) {
                    const double v =
                        reference_hat(static_cast<double>(ix - x0) / ratio, static_cast<double>(iy - y0) / ratio);
                    if (v > 0.0) {
                        const auto row = static_cast<Eigen::Index>(fine.dof_index({ix, iy}));
                        entries.emplace_back(row, col, v);
                    }
                }
            }
        }
    }
    Eigen::SparseMatrix<double> p(fine_dim, coarse_dim);
    p.setFromTriplets(entries.begin(), entries.end());
    return p;
}

} // namespace fracdd
