#pragma once

#include <cstddef>
#include <memory>
#include <span>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "fracdd/measure.hpp"
#include "fracdd/offset_table.hpp"

namespace fracdd {

using Vector = Eigen::VectorXd;

/// Dense materialization is refused above this many DOFs.
inline constexpr std::size_t kMaxDenseDim = 20000;

/// The assembled operator A on the interior DOFs of a uniform mesh, stored
/// as its translation-invariant symbol: A(i, j) = symbol[node_j - node_i].
///
/// Matrix-vector products go through a 2D circulant embedding of the
/// block-Toeplitz-Toeplitz-block matrix and real FFTs. The FFT plans are
/// created once; apply() is safe to call concurrently.
class FractionalOperator {
public:
    FractionalOperator(int cells_per_axis, double alpha, double c, DirectionalMeasure measure, OffsetTable symbol);

    int cells_per_axis() const noexcept { return n_; }
    int grid_side() const noexcept { return n_ - 1; }
    std::size_t dim() const noexcept {
        return static_cast<std::size_t>(n_ - 1) * static_cast<std::size_t>(n_ - 1);
    }
    double alpha() const noexcept { return alpha_; }
    double c() const noexcept { return c_; }
    const DirectionalMeasure& measure() const noexcept { return measure_; }
    const OffsetTable& symbol() const noexcept { return symbol_; }

    Offset offset_between(std::size_t row, std::size_t col) const noexcept;
    double entry(std::size_t row, std::size_t col) const noexcept;

    void apply(const Vector& x, Vector& y) const;
    Vector apply(const Vector& x) const;

    /// Product with the explicit dense matrix (reference path).
    Vector apply_dense(const Vector& x) const;

    Eigen::MatrixXd dense() const;
    Eigen::MatrixXd extract(std::span<const std::size_t> dofs) const;

    /// Dense Cholesky check; throws NumericalError when A is not SPD.
    void verify_spd() const;

private:
    struct Circulant;

    int n_;
    double alpha_;
    double c_;
    DirectionalMeasure measure_;
    OffsetTable symbol_;
    std::shared_ptr<const Circulant> circulant_;
};

Vector matvec(const FractionalOperator& op, const Vector& x);

/// Principal submatrix of A on `dofs`.
Eigen::MatrixXd extract_local(const FractionalOperator& op, std::span<const std::size_t> dofs);

/// Galerkin coarse operator A0 = P0^T A P0 with its Cholesky factor.
class CoarseOperator {
public:
    CoarseOperator() = default;
    CoarseOperator(Eigen::SparseMatrix<double> prolongation, Eigen::MatrixXd galerkin);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
    bool empty() const noexcept { return dim() == 0; }
    const Eigen::SparseMatrix<double>& prolongation() const noexcept { return prolongation_; }
    const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }

    Vector solve(const Vector& coarse_rhs) const;
    /// P0 A0^{-1} P0^T r
    Vector correction(const Vector& r) const;

private:
    Eigen::SparseMatrix<double> prolongation_;
    Eigen::MatrixXd matrix_;
    Eigen::LLT<Eigen::MatrixXd> factor_;
};

CoarseOperator build_coarse(const FractionalOperator& op, const Eigen::SparseMatrix<double>& prolongation);

} // namespace fracdd
