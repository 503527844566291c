#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "fracdd/assembly.hpp"
#include "fracdd/errors.hpp"
#include "fracdd/experiment.hpp"
#include "fracdd/fraccalc.hpp"
#include "fracdd/manufactured.hpp"
#include "fracdd/symbol_io.hpp"
#include "oracles.hpp"

using namespace fracdd;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "fracdd_test_bench";
    fs::create_directories(dir);
    return dir / name;
}

// -1/4 of both one-sided derivatives of g(t) = (2t - t^2)^4 in each variable,
// each derivative expanded monomial by monomial from the Gamma ratio.
double f_by_monomials(double x, double y, double mu) {
    const double coeff[] = {16.0, -32.0, 24.0, -8.0, 1.0};
    auto left = [&](double t) {
        double s = 0.0;
        for (int k = 0; k < 5; ++k) {
            const int p = k + 4;
            s += coeff[k] * std::tgamma(p + 1.0) / std::tgamma(p + 1.0 - mu) * std::pow(t, p - mu);
        }
        return s;
    };
    auto g = [](double t) { return std::pow(2.0 * t - t * t, 4); };
    const double dx = left(x) + left(2.0 - x);
    const double dy = left(y) + left(2.0 - y);
    return -0.25 * (dx * g(y) + g(x) * dy);
}

} // namespace

TEST(Manufactured, SolutionValues) {
    EXPECT_DOUBLE_EQ(manufactured_u(1.0, 1.0), 1.0);
    EXPECT_DOUBLE_EQ(manufactured_u(0.0, 0.7), 0.0);
    EXPECT_DOUBLE_EQ(manufactured_u(0.5, 1.0), 0.31640625);
}

TEST(Manufactured, RightHandSideValues) {
    EXPECT_NEAR(manufactured_f_example1(1.0, 1.0), 2.96271863360462789, 1e-12);
    EXPECT_NEAR(manufactured_f_example1(0.5, 1.5), -0.270026925905146287, 1e-12);
    EXPECT_NEAR(manufactured_f_example1(0.5, 1.5), f_by_monomials(0.5, 1.5, 1.5), 1e-12);
    EXPECT_NEAR(manufactured_f_example1(0.3, 0.8, 0.6), f_by_monomials(0.3, 0.8, 1.2), 1e-12);
}

TEST(Manufactured, RightHandSideSymmetry) {
    for (auto [x, y] : {std::pair{0.3, 1.1}, std::pair{0.9, 0.2}, std::pair{1.7, 1.4}}) {
        const double f = manufactured_f_example1(x, y);
        EXPECT_NEAR(manufactured_f_example1(y, x), f, 1e-12);
        EXPECT_NEAR(manufactured_f_example1(2.0 - x, y), f, 1e-12);
    }
}

TEST(LoadVector, ConstantAndZero) {
    const UniformMesh mesh({0.0, 2.0, 0.0, 2.0}, 8);
    const Vector ones = load_vector(mesh, [](double, double) { return 1.0; });
    EXPECT_NEAR((ones.array() - mesh.h() * mesh.h()).abs().maxCoeff(), 0.0, 1e-15);
    EXPECT_EQ(load_vector(mesh, [](double, double) { return 0.0; }), Vector::Zero(mesh.num_dofs()));
}

TEST(LoadVector, HatGivesMassColumn) {
    const UniformMesh mesh({0.0, 2.0, 0.0, 2.0}, 8);
    const LatticeNode center{3, 4};
    const double h = mesh.h();
    const Vector b = load_vector(mesh, [&](double x, double y) {
        return oracle::hat(x / h - center.ix, y / h - center.iy);
    });
    const auto mass = assemble_mass(mesh);
    for (std::size_t k = 0; k < mesh.num_dofs(); ++k) {
        const auto node = mesh.node_of(k);
        const double expect = mass.at({node.ix - center.ix, node.iy - center.iy});
        EXPECT_NEAR(b[static_cast<Eigen::Index>(k)], expect, 1e-8 * h * h);
    }
}

TEST(L2Error, ExactInterpolantOfZero) {
    const UniformMesh mesh({0.0, 2.0, 0.0, 2.0}, 8);
    EXPECT_EQ(l2_error(mesh, Vector::Zero(mesh.num_dofs()), [](double, double) { return 0.0; }), 0.0);
    EXPECT_NEAR(l2_error(mesh, Vector::Zero(mesh.num_dofs()), [](double, double) { return 1.0; }), 2.0, 1e-12);
}

TEST(SymbolFile, RoundTrip) {
    const UniformMesh mesh({0.0, 2.0, 0.0, 2.0}, 8);
    const auto op = build_operator(mesh, 0.7, 0.5, discretize_measure("uniform:4"));
    std::stringstream buf;
    write_symbol(buf, op);
    const auto back = read_symbol(buf);
    EXPECT_EQ(back.cells_per_axis(), 8);
    EXPECT_EQ(back.alpha(), 0.7);
    EXPECT_EQ(back.c(), 0.5);
    EXPECT_EQ(back.measure().directions().size(), 4u);
    EXPECT_EQ(back.symbol().values(), op.symbol().values());
}

TEST(SymbolFile, CorruptInputRejected) {
    const UniformMesh mesh({0.0, 2.0, 0.0, 2.0}, 4);
    const auto op = build_operator(mesh, 0.75, 0.0, discretize_measure("axes4"));
    std::stringstream buf;
    write_symbol(buf, op);
    const std::string good = buf.str();

    std::stringstream bad_magic("XSYM" + good.substr(4));
    EXPECT_THROW(read_symbol(bad_magic), ConfigError);
    std::stringstream truncated(good.substr(0, good.size() - 3));
    EXPECT_THROW(read_symbol(truncated), ConfigError);
    std::stringstream header_only(good.substr(0, 10));
    EXPECT_THROW(read_symbol(header_only), ConfigError);
    std::string version = good;
    version[4] = 9;
    std::stringstream bad_version(version);
    EXPECT_THROW(read_symbol(bad_version), ConfigError);
    std::string lopsided = good;
    lopsided[lopsided.size() - 1] ^= 0x10;  // perturb the last value only
    std::stringstream asym(lopsided);
    EXPECT_THROW(read_symbol(asym), ConfigError);
}

TEST(Config, ParseAndDefaults) {
    const auto spec = ExperimentSpec::parse(R"({"n": 32, "m": 4, "overlap_cells": 2, "example": 2})");
    EXPECT_EQ(spec.n, 32);
    EXPECT_EQ(spec.measure.kind, MeasureKind::Uniform);
    EXPECT_EQ(spec.measure.directions, 16);
    EXPECT_EQ(spec.solver.tol_infty, 1e-6);
    const auto again = ExperimentSpec::parse(spec.to_json());
    EXPECT_EQ(again.to_json(), spec.to_json());
}

TEST(Config, InvalidDocumentsRejected) {
    EXPECT_THROW(ExperimentSpec::parse(R"({"n": 16, "colour": 1})"), ConfigError);
    EXPECT_THROW(ExperimentSpec::parse(R"({"n": 16, "m": 3})"), ConfigError);
    EXPECT_THROW(ExperimentSpec::parse(R"({"alpha": 0.4})"), ConfigError);
    EXPECT_THROW(ExperimentSpec::parse(R"({"example": 3})"), ConfigError);
    EXPECT_THROW(ExperimentSpec::parse(R"({"n": "sixteen"})"), ConfigError);
    EXPECT_THROW(ExperimentSpec::parse(R"({"solver": {"stopping": "never"}})"), ConfigError);
    EXPECT_THROW(ExperimentSpec::parse(R"({"solver": {"tolerance": 1}})"), ConfigError);
    EXPECT_THROW(ExperimentSpec::parse(R"({"bounds": [0, 1, 0, 1]})"), ConfigError);
    EXPECT_THROW(ExperimentSpec::parse("{"), ConfigError);
    EXPECT_THROW(ExperimentSpec::load("/nonexistent/config.json"), ConfigError);
}

TEST(Csv, RowFormat) {
    ResultRow row{0.125, 0.5, 0.125, 14, 5.25, std::nullopt, 0.5, true};
    std::ostringstream out;
    write_csv_header(out);
    write_csv_row(out, row);
    write_csv_row(out, row, false);
    EXPECT_EQ(out.str(),
              "h,H,delta,iters,cond_est,l2_error,seconds\n"
              "0.125,0.5,0.125,14,5.25,,0.5\n"
              "0.125,0.5,0.125,14,5.25,,\n");
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

TEST(Table, EmptyGridWritesHeaderOnly) {
    std::ostringstream out;
    const auto summary = run_table(1, {}, out);
    EXPECT_EQ(out.str(), "h,H,delta,iters,cond_est,l2_error,seconds\n");
    EXPECT_EQ(summary.spread, 0);
}

TEST(Table, RerunWithCacheIsByteIdentical) {
    const std::vector<GridRow> grid{{16, 2, 1}, {16, 2, 2}, {32, 4, 1}};
    TableOptions opts;
    opts.include_timing = false;
    opts.cache_dir = scratch("cache").string();
    opts.jobs = 2;
    std::ostringstream first, second;
    run_table(2, grid, first, opts);
    opts.jobs = 1;
    run_table(2, grid, second, opts);
    EXPECT_EQ(first.str(), second.str());
    EXPECT_TRUE(fs::exists(fs::path(*opts.cache_dir) / "example2_n16.fsym"));
}

TEST(Experiment, SmokeRun) {
    auto spec = ExperimentSpec::for_example(1, 16, 4, 1);
    const auto result = run_experiment(spec);
    EXPECT_TRUE(result.row.converged);
    EXPECT_EQ(result.row.iters, result.report.iterations);
    EXPECT_LE(result.row.iters, 20);
    EXPECT_TRUE(result.row.l2_error.has_value());
    EXPECT_GT(result.row.cond_est, 1.0);
}

TEST(Experiment, CacheMismatchReassembles) {
    const auto path = scratch("mismatch.fsym");
    auto spec = ExperimentSpec::for_example(1, 16, 4, 1);
    spec.cache = path.string();
    spec.alpha = 0.8;
    (void)obtain_operator(spec);
    spec.alpha = 0.75;
    const auto op = obtain_operator(spec);
    EXPECT_EQ(op->alpha(), 0.75);
    EXPECT_EQ(load_symbol(path).alpha(), 0.75);
}

TEST(Experiment, L2ErrorDecreasesWithRefinement) {
    double prev = 1e300;
    for (int n : {16, 32, 64}) {
        const auto row = run_experiment(ExperimentSpec::for_example(1, n, n / 8, 1)).row;
        ASSERT_TRUE(row.l2_error.has_value());
        EXPECT_LT(*row.l2_error, prev);
        prev = *row.l2_error;
    }
}

TEST(Experiment, ExampleTwoHasNoError) {
    const auto row = run_experiment(ExperimentSpec::for_example(2, 16, 2, 1)).row;
    EXPECT_FALSE(row.l2_error.has_value());
    EXPECT_TRUE(row.converged);
}
