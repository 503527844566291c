#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "fracdd/errors.hpp"
#include "fracdd/mesh.hpp"

using namespace fracdd;

namespace {
const Rectangle kDomain{0.0, 2.0, 0.0, 2.0};
}

TEST(Mesh, SizesAndNumbering) {
    const UniformMesh mesh(kDomain, 8);
    EXPECT_DOUBLE_EQ(mesh.h(), 0.25);
    EXPECT_EQ(mesh.num_dofs(), 49u);
    EXPECT_EQ(mesh.dof_index({1, 1}), 0u);
    EXPECT_EQ(mesh.dof_index({7, 1}), 6u);
    EXPECT_EQ(mesh.dof_index({1, 2}), 7u);
    for (std::size_t k = 0; k < mesh.num_dofs(); ++k) {
        EXPECT_EQ(mesh.dof_index(mesh.node_of(k)), k);
    }
    EXPECT_THROW(mesh.dof_index({0, 3}), ConfigError);
    EXPECT_THROW(mesh.node_of(49), ConfigError);
}

TEST(Mesh, Triangulation) {
    const UniformMesh mesh(kDomain, 4);
    const auto tris = mesh.triangles();
    EXPECT_EQ(tris.size(), 32u);
    // every interior node has six incident triangles, corners one or two
    EXPECT_EQ(mesh.incident_triangles({2, 2}), 6);
    EXPECT_EQ(mesh.incident_triangles({0, 0}), 2);
    EXPECT_EQ(mesh.incident_triangles({4, 0}), 1);
    const auto count = std::count_if(tris.begin(), tris.end(), [](const Triangle& t) {
        return std::find(t.begin(), t.end(), LatticeNode{2, 2}) != t.end();
    });
    EXPECT_EQ(count, 6);
}

TEST(Mesh, InvalidInputsRejected) {
    EXPECT_THROW(UniformMesh(kDomain, 1), ConfigError);
    EXPECT_THROW(UniformMesh({0.0, 2.0, 0.0, 1.0}, 4), ConfigError);
    EXPECT_THROW(UniformMesh({1.0, 1.0, 0.0, 0.0}, 4), ConfigError);
}

TEST(ReferenceHat, ValuesAndSupport) {
    EXPECT_DOUBLE_EQ(reference_hat(0.0, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(reference_hat(1.0, 1.0), 0.0);
    EXPECT_DOUBLE_EQ(reference_hat(0.5, 0.5), 0.5);
    EXPECT_DOUBLE_EQ(reference_hat(0.5, -0.5), 0.0);
    EXPECT_DOUBLE_EQ(reference_hat(-0.25, 0.0), 0.75);
}

TEST(Decomposition, CoversAllDofs) {
    const UniformMesh mesh(kDomain, 16);
    const auto d = build_decomposition(mesh, 4, 1);
    EXPECT_EQ(d.num_subdomains(), 16u);
    EXPECT_DOUBLE_EQ(d.H(), 0.5);
    EXPECT_DOUBLE_EQ(d.delta(), 0.125);
    std::set<std::size_t> covered;
    for (const auto& s : d.subdomains()) covered.insert(s.dofs.begin(), s.dofs.end());
    EXPECT_EQ(covered.size(), mesh.num_dofs());
}

TEST(Decomposition, ExtendedBoxesClipped) {
    const UniformMesh mesh(kDomain, 16);
    const auto d = build_decomposition(mesh, 4, 2);
    EXPECT_EQ(d.subdomains()[0].extended, (LatticeBox{0, 6, 0, 6}));
    EXPECT_EQ(d.subdomains()[5].extended, (LatticeBox{2, 10, 2, 10}));
    EXPECT_EQ(d.subdomains()[5].dofs.size(), 49u);
}

TEST(Decomposition, SameColorSubdomainsSeparated) {
    const UniformMesh mesh(kDomain, 32);
    for (int k : {1, 2, 3, 4, 6}) {
        const auto d = build_decomposition(mesh, 4, k);
        if (2 * k < 8) {
            EXPECT_EQ(d.colors().size(), 4u) << "k=" << k;
        }
        for (const auto& cls : d.colors()) {
            for (std::size_t a = 0; a < cls.size(); ++a) {
                for (std::size_t b = a + 1; b < cls.size(); ++b) {
                    const auto& p = d.subdomains()[cls[a]].extended;
                    const auto& q = d.subdomains()[cls[b]].extended;
                    const bool apart = p.x1 < q.x0 || q.x1 < p.x0 || p.y1 < q.y0 || q.y1 < p.y0;
                    EXPECT_TRUE(apart) << "k=" << k;
                }
            }
        }
    }
}

TEST(Decomposition, InvalidInputsRejected) {
    const UniformMesh mesh(kDomain, 16);
    EXPECT_THROW(build_decomposition(mesh, 3, 1), ConfigError);
    EXPECT_THROW(build_decomposition(mesh, 4, 0), ConfigError);
    EXPECT_THROW(build_decomposition(mesh, 4, 4), ConfigError);
}

TEST(Prolongation, InterpolatesCoarseHats) {
    const UniformMesh mesh(kDomain, 8);
    const auto p = coarse_prolongation(mesh, 2);
    ASSERT_EQ(p.rows(), 49);
    ASSERT_EQ(p.cols(), 1);
    EXPECT_DOUBLE_EQ(p.coeff(mesh.dof_index({4, 4}), 0), 1.0);
    EXPECT_DOUBLE_EQ(p.coeff(mesh.dof_index({2, 4}), 0), 0.5);
    EXPECT_DOUBLE_EQ(p.coeff(mesh.dof_index({6, 6}), 0), 0.5);
    EXPECT_DOUBLE_EQ(p.coeff(mesh.dof_index({2, 6}), 0), 0.0);
    EXPECT_EQ(coarse_prolongation(mesh, 1).cols(), 0);
}

TEST(Prolongation, RowSumsBelowOne) {
    const UniformMesh mesh(kDomain, 16);
    const Eigen::MatrixXd p = coarse_prolongation(mesh, 4);
    EXPECT_LE(p.rowwise().sum().maxCoeff(), 1.0 + 1e-15);
    EXPECT_GE(p.minCoeff(), 0.0);
}
