#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fracdd/krylov.hpp"
#include "fracdd/measure.hpp"
#include "fracdd/mesh.hpp"
#include "fracdd/operators.hpp"

namespace fracdd {

/// One solver run. Mirrors the JSON config document field for field:
///
///   { "bounds": [0, 2, 0, 2], "alpha": 0.75, "c": 0, "measure": "axes4",
///     "n": 64, "m": 8, "overlap_cells": 1, "example": 1,
///     "drop_tol": 1e-12, "probes": 5, "cache": "a.fsym", "out": "row.json",
///     "solver": { "tol_infty": 1e-6, "max_iter": 1000,
///                 "stopping": "increment", "residual_tol": 1e-8 } }
///
/// Every key is optional; unknown keys are rejected. The measure defaults to
/// axes4 for example 1 and uniform:16 for example 2.
struct ExperimentSpec {
    Rectangle bounds{0.0, 2.0, 0.0, 2.0};
    double alpha = 0.75;
    double c = 0.0;
    MeasureSpec measure;
    int n = 16;
    int m = 4;
    int overlap_cells = 1;
    SolveConfig solver;
    int example = 1;
    double drop_tol = 1e-12;
    int probes = 5;
    std::optional<std::string> cache;
    std::optional<std::string> out;

    void validate() const;

    static ExperimentSpec parse(std::string_view json_text);
    static ExperimentSpec load(const std::string& path);
    std::string to_json() const;

    /// Settings of the two benchmark examples on [0, 2]^2.
    static ExperimentSpec for_example(int example, int n, int m, int overlap_cells);
};

struct ResultRow {
    double h = 0.0;
    double H = 0.0;
    double delta = 0.0;
    int iters = 0;
    double cond_est = 0.0;
    std::optional<double> l2_error;  // example 1 only
    double seconds = 0.0;            // preconditioner setup + solve
    bool converged = false;
};

struct ExperimentResult {
    ResultRow row;
    PcgReport report;
    ConditionEstimate condition;
};

/// Assembles the operator, or loads it from spec.cache when the cached header
/// and diagonal match; a mismatching or missing cache is (re)written.
std::shared_ptr<const FractionalOperator> obtain_operator(const ExperimentSpec& spec);

ExperimentResult run_experiment(const ExperimentSpec& spec);
ExperimentResult run_experiment(const ExperimentSpec& spec, const FractionalOperator& op);

std::string result_to_json(const ResultRow& row, const ExperimentSpec& spec);
std::string condition_to_json(const ConditionEstimate& est, const ExperimentSpec& spec);

struct GridRow {
    int n = 64;
    int m = 8;
    int overlap_cells = 1;
};

/// (h, H) in {(2/64, 2/8), (2/128, 2/16), (2/256, 2/32)} x delta in {h, 2h, 4h}.
std::vector<GridRow> default_grid();
/// JSON list of {"n": .., "m": .., "overlap_cells": ..} objects.
std::vector<GridRow> load_grid(const std::string& path);

struct TableOptions {
    int jobs = 1;
    bool include_timing = true;
    std::optional<std::string> cache_dir;
};

struct TableSummary {
    std::vector<ResultRow> rows;
    int spread = 0;  // max - min iterations over all rows
};

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const ResultRow& row, bool include_timing = true);

/// Runs every grid row of example `table` (1 or 2) and writes the CSV in grid
/// order regardless of completion order.
TableSummary run_table(int table, const std::vector<GridRow>& rows, std::ostream& csv,
                       const TableOptions& options = {});

/// Shortest round-trip-safe rendering with 17 significant digits.
std::string format_double(double v);

} // namespace fracdd
