#include "fracdd/operators.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <string>

#include <fftw3.h>

#include "fracdd/errors.hpp"

namespace fracdd {

namespace {

// The FFTW planner is not reentrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const noexcept { fftw_free(p); }
};
using RealBuffer = std::unique_ptr<double[], FftwFree>;
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

RealBuffer alloc_real(std::size_t count) {
    return RealBuffer(fftw_alloc_real(count));
}
ComplexBuffer alloc_complex(std::size_t count) {
    return ComplexBuffer(fftw_alloc_complex(count));
}

} // namespace

double OffsetTable::asymmetry() const noexcept {
    double largest = 0.0, diff = 0.0;
    for (int dj = -radius_; dj <= radius_; ++dj) {
        for (int di = -radius_; di <= radius_; ++di) {
            const double v = at({di, dj});
            largest = std::max(largest, std::abs(v));
            diff = std::max(diff, std::abs(v - at({-di, -dj})));
        }
    }
    return largest > 0.0 ? diff / largest : 0.0;
}

struct FractionalOperator::Circulant {
    int side = 0;     // N = n - 1
    int padded = 0;   // M = 2N
    std::size_t real_size = 0;
    std::size_t spectrum_size = 0;
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
    ComplexBuffer kernel_spectrum;

    Circulant(int n_side, const OffsetTable& symbol) : side(n_side), padded(2 * n_side) {
        const auto m = static_cast<std::size_t>(padded);
        real_size = m * m;
        spectrum_size = m * (m / 2 + 1);
        kernel_spectrum = alloc_complex(spectrum_size);
        auto scratch = alloc_real(real_size);
        auto spectrum = alloc_complex(spectrum_size);
        {
            std::lock_guard lock(planner_mutex());
            forward = fftw_plan_dft_r2c_2d(padded, padded, scratch.get(), spectrum.get(), FFTW_ESTIMATE);
            backward = fftw_plan_dft_c2r_2d(padded, padded, spectrum.get(), scratch.get(), FFTW_ESTIMATE);
        }
        // y[i] = sum_j S(j - i) x[j] = sum_j K(i - j) x[j] with K(d) = S(-d).
        std::fill_n(scratch.get(), real_size, 0.0);
        const int reach = std::min(symbol.radius(), side - 1);
        for (int dy = -reach; dy <= reach; ++dy) {
            for (int dx = -reach; dx <= reach; ++dx) {
                const auto row = static_cast<std::size_t>((dy + padded) % padded);
                const auto col = static_cast<std::size_t>((dx + padded) % padded);
                scratch[row * m + col] = symbol.at({-dx, -dy});
            }
        }
        fftw_execute_dft_r2c(forward, scratch.get(), kernel_spectrum.get());
        const double scale = 1.0 / static_cast<double>(real_size);
        for (std::size_t k = 0; k < spectrum_size; ++k) {
            kernel_spectrum[k][0] *= scale;
            kernel_spectrum[k][1] *= scale;
        }
    }

    ~Circulant() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(forward);
        fftw_destroy_plan(backward);
    }

    Circulant(const Circulant&) = delete;
    Circulant& operator=(const Circulant&) = delete;

    void apply(const Vector& x, Vector& y) const {
        const auto m = static_cast<std::size_t>(padded);
        const auto nside = static_cast<std::size_t>(side);
        auto work = alloc_real(real_size);
        auto spectrum = alloc_complex(spectrum_size);
        std::fill_n(work.get(), real_size, 0.0);
        for (std::size_t r = 0; r < nside; ++r) {
            std::copy_n(x.data() + r * nside, nside, work.get() + r * m);
        }
        fftw_execute_dft_r2c(forward, work.get(), spectrum.get());
        for (std::size_t k = 0; k < spectrum_size; ++k) {
            const std::complex<double> a(spectrum[k][0], spectrum[k][1]);
            const std::complex<double> b(kernel_spectrum[k][0], kernel_spectrum[k][1]);
            const auto prod = a * b;
            spectrum[k][0] = prod.real();
            spectrum[k][1] = prod.imag();
        }
        fftw_execute_dft_c2r(backward, spectrum.get(), work.get());
        for (std::size_t r = 0; r < nside; ++r) {
            std::copy_n(work.get() + r * m, nside, y.data() + r * nside);
        }
    }
};

FractionalOperator::FractionalOperator(int cells_per_axis, double alpha, double c, DirectionalMeasure measure,
                                       OffsetTable symbol)
    : n_(cells_per_axis), alpha_(alpha), c_(c), measure_(std::move(measure)), symbol_(std::move(symbol)) {
    if (n_ < 2) {
        throw ConfigError("operator needs at least 2 cells per axis");
    }
    circulant_ = std::make_shared<const Circulant>(n_ - 1, symbol_);
}

Offset FractionalOperator::offset_between(std::size_t row, std::size_t col) const noexcept {
    const auto side = static_cast<std::size_t>(n_ - 1);
    return {static_cast<int>(col % side) - static_cast<int>(row % side),
            static_cast<int>(col / side) - static_cast<int>(row / side)};
}

double FractionalOperator::entry(std::size_t row, std::size_t col) const noexcept {
    return symbol_.at(offset_between(row, col));
}

void FractionalOperator::apply(const Vector& x, Vector& y) const {
    if (static_cast<std::size_t>(x.size()) != dim()) {
        throw ConfigError("matvec dimension mismatch: expected " + std::to_string(dim()) + ", got " +
                          std::to_string(x.size()));
    }
    y.resize(x.size());
    circulant_->apply(x, y);
}

Vector FractionalOperator::apply(const Vector& x) const {
    Vector y(x.size());
    apply(x, y);
    return y;
}

Vector FractionalOperator::apply_dense(const Vector& x) const {
    if (static_cast<std::size_t>(x.size()) != dim()) {
        throw ConfigError("matvec dimension mismatch");
    }
    return dense() * x;
}

Eigen::MatrixXd FractionalOperator::dense() const {
    if (dim() > kMaxDenseDim) {
        throw ConfigError("refusing dense materialization of " + std::to_string(dim()) + " DOFs");
    }
    const auto d = static_cast<Eigen::Index>(dim());
    Eigen::MatrixXd a(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) {
            a(i, j) = entry(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        }
    }
    return a;
}

Eigen::MatrixXd FractionalOperator::extract(std::span<const std::size_t> dofs) const {
    const auto d = static_cast<Eigen::Index>(dofs.size());
    for (auto k : dofs) {
        if (k >= dim()) {
            throw ConfigError("dof index " + std::to_string(k) + " out of range");
        }
    }
    Eigen::MatrixXd a(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) {
            a(i, j) = entry(dofs[static_cast<std::size_t>(i)], dofs[static_cast<std::size_t>(j)]);
        }
    }
    return a;
}

void FractionalOperator::verify_spd() const {
    if (symbol_.asymmetry() > 1e-13) {
        throw NumericalError("operator symbol is not symmetric");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(dense());
    if (llt.info() != Eigen::Success) {
        throw NumericalError("operator is not positive definite");
    }
}

Vector matvec(const FractionalOperator& op, const Vector& x) {
    return op.apply(x);
}

Eigen::MatrixXd extract_local(const FractionalOperator& op, std::span<const std::size_t> dofs) {
    return op.extract(dofs);
}

CoarseOperator::CoarseOperator(Eigen::SparseMatrix<double> prolongation, Eigen::MatrixXd galerkin)
    : prolongation_(std::move(prolongation)), matrix_(std::move(galerkin)) {
    if (matrix_.rows() > 0) {
        factor_.compute(matrix_);
        if (factor_.info() != Eigen::Success) {
            throw NumericalError("coarse operator is not positive definite");
        }
    }
}

Vector CoarseOperator::solve(const Vector& coarse_rhs) const {
    if (empty()) {
        return Vector();
    }
    return factor_.solve(coarse_rhs);
}

Vector CoarseOperator::correction(const Vector& r) const {
    if (empty()) {
        return Vector::Zero(r.size());
    }
    const Vector rc = prolongation_.transpose() * r;
    return prolongation_ * solve(rc);
}

CoarseOperator build_coarse(const FractionalOperator& op, const Eigen::SparseMatrix<double>& prolongation) {
    if (static_cast<std::size_t>(prolongation.rows()) != op.dim()) {
        throw ConfigError("prolongation rows do not match the operator dimension");
    }
    const Eigen::Index coarse = prolongation.cols();
    Eigen::MatrixXd galerkin(coarse, coarse);
#pragma omp parallel for schedule(dynamic)
    for (Eigen::Index j = 0; j < coarse; ++j) {
        const Vector column = prolongation.col(j);
        const Vector image = op.apply(column);
        galerkin.col(j) = prolongation.transpose() * image;
    }
    const Eigen::MatrixXd symmetric = 0.5 * (galerkin + galerkin.transpose());
    return CoarseOperator(prolongation, symmetric);
}

} // namespace fracdd
