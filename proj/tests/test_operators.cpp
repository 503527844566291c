#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "fracdd/assembly.hpp"
#include "fracdd/errors.hpp"
#include "fracdd/operators.hpp"

using namespace fracdd;

namespace {

FractionalOperator make(int n, double alpha = 0.75, double c = 0.0, const char* measure = "axes4") {
    const UniformMesh mesh({0.0, 2.0, 0.0, 2.0}, n);
    return build_operator(mesh, alpha, c, discretize_measure(measure));
}

Vector random_vector(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Vector v(static_cast<Eigen::Index>(n));
    for (auto& x : v) x = g(rng);
    return v;
}

} // namespace

TEST(Operator, EntryFollowsSymbol) {
    const auto op = make(8);
    const std::size_t row = 9;   // node (3, 2)
    const std::size_t col = 17;  // node (4, 3)
    EXPECT_EQ(op.offset_between(row, col), (Offset{1, 1}));
    EXPECT_DOUBLE_EQ(op.entry(row, col), op.symbol().at({1, 1}));
    EXPECT_DOUBLE_EQ(op.entry(col, row), op.entry(row, col));
}

TEST(Operator, FftMatchesDense) {
    for (int n : {4, 8, 12}) {
        const auto op = make(n, 0.6, 1.0, "uniform:8");
        const Vector x = random_vector(op.dim(), 3);
        const Vector fast = op.apply(x);
        const Vector slow = op.apply_dense(x);
        EXPECT_LE((fast - slow).norm(), 1e-12 * slow.norm()) << "n=" << n;
    }
}

TEST(Operator, ApplyIsLinear) {
    const auto op = make(8);
    const Vector x = random_vector(op.dim(), 1);
    const Vector y = random_vector(op.dim(), 2);
    const Vector lhs = op.apply(2.0 * x - 3.0 * y);
    const Vector rhs = 2.0 * op.apply(x) - 3.0 * op.apply(y);
    EXPECT_LE((lhs - rhs).norm(), 1e-12 * rhs.norm());
}

TEST(Operator, DenseIsSymmetricPositiveDefinite) {
    const auto op = make(8, 0.9);
    const Eigen::MatrixXd a = op.dense();
    EXPECT_LE((a - a.transpose()).norm(), 1e-13 * a.norm());
    EXPECT_NO_THROW(op.verify_spd());
    EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a).eigenvalues().minCoeff(), 0.0);
}

TEST(Operator, ExtractIsPrincipalSubmatrix) {
    const auto op = make(8);
    const std::vector<std::size_t> dofs{0, 5, 13, 40};
    const auto sub = extract_local(op, dofs);
    const auto a = op.dense();
    for (std::size_t i = 0; i < dofs.size(); ++i) {
        for (std::size_t j = 0; j < dofs.size(); ++j) {
            EXPECT_DOUBLE_EQ(sub(i, j), a(dofs[i], dofs[j]));
        }
    }
}

TEST(Operator, DimensionMismatchRejected) {
    const auto op = make(4);
    Vector y;
    EXPECT_THROW(op.apply(Vector::Zero(5), y), ConfigError);
}

TEST(Operator, AsymmetricSymbolFailsSpdCheck) {
    OffsetTable bad(1);
    bad.ref({0, 0}) = 4.0;
    bad.ref({1, 0}) = -1.0;
    bad.ref({-1, 0}) = -0.5;
    const FractionalOperator op(4, 0.75, 0.0, discretize_measure("axes4"), bad);
    EXPECT_THROW(op.verify_spd(), NumericalError);
}

TEST(Operator, ConcurrentApplyIsDeterministic) {
    const auto op = make(16);
    const Vector x = random_vector(op.dim(), 11);
    const Vector ref = op.apply(x);
    std::vector<Vector> out(4);
#pragma omp parallel for
    for (int t = 0; t < 4; ++t) out[t] = op.apply(x);
    for (const auto& y : out) EXPECT_EQ(y, ref);
}

TEST(Coarse, GalerkinMatchesDenseProduct) {
    const UniformMesh mesh({0.0, 2.0, 0.0, 2.0}, 8);
    const auto op = make(8);
    const auto p = coarse_prolongation(mesh, 4);
    const auto coarse = build_coarse(op, p);
    const Eigen::MatrixXd pd = p;
    const Eigen::MatrixXd ref = pd.transpose() * op.dense() * pd;
    EXPECT_LE((coarse.matrix() - ref).norm(), 1e-12 * ref.norm());
    const Vector r = random_vector(op.dim(), 5);
    const Vector z = coarse.correction(r);
    const Vector expect = pd * ref.llt().solve(pd.transpose() * r);
    EXPECT_LE((z - expect).norm(), 1e-10 * expect.norm());
}
