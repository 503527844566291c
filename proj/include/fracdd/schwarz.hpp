#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "fracdd/mesh.hpp"
#include "fracdd/operators.hpp"

namespace fracdd {

/// Two-level additive Schwarz preconditioner in nodal matrix form,
///   z = P0 A0^{-1} P0^T r + sum_i R_i^T A_i^{-1} R_i r,
/// where R_i selects the DOFs of extended subdomain i and A_i = R_i A R_i^T.
///
/// Local blocks depend only on the shape of the extended box, so congruent
/// subdomains share one Cholesky factor. Subdomains of one color have
/// disjoint DOF sets; their solves are scattered in parallel and the colors
/// are accumulated in a fixed order, which keeps apply() bitwise
/// reproducible.
class SchwarzPreconditioner {
public:
    std::size_t dim() const noexcept { return dim_; }
    std::size_t num_blocks() const noexcept { return blocks_.size(); }
    std::size_t num_distinct_factors() const noexcept { return factors_.size(); }

    const std::vector<std::size_t>& block_dofs(std::size_t i) const { return blocks_.at(i).dofs; }
    const Eigen::LLT<Eigen::MatrixXd>& block_factor(std::size_t i) const { return factors_.at(blocks_.at(i).factor); }
    const CoarseOperator& coarse() const noexcept { return coarse_; }

    Vector apply(const Vector& r) const;
    /// Local solves only (no coarse correction).
    Vector apply_one_level(const Vector& r) const;
    Vector apply_coarse(const Vector& r) const;

private:
    friend SchwarzPreconditioner build_preconditioner(const FractionalOperator&, const TwoLevelDecomposition&,
                                                      const Eigen::SparseMatrix<double>&);
    struct Block {
        std::vector<std::size_t> dofs;
        std::size_t factor = 0;
    };

    void check_dim(const Vector& r) const;

    std::size_t dim_ = 0;
    std::vector<Block> blocks_;
    std::vector<Eigen::LLT<Eigen::MatrixXd>> factors_;
    std::vector<std::vector<std::size_t>> colors_;
    CoarseOperator coarse_;
};

/// `prolongation` may have zero columns (m = 1), which drops the coarse level.
SchwarzPreconditioner build_preconditioner(const FractionalOperator& op, const TwoLevelDecomposition& decomposition,
                                           const Eigen::SparseMatrix<double>& prolongation);

} // namespace fracdd
