#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "fracdd/assembly.hpp"
#include "fracdd/errors.hpp"
#include "fracdd/experiment.hpp"
#include "fracdd/symbol_io.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitMaxIter = 4;

void emit(const std::string& text, const std::optional<std::string>& path) {
    if (path) {
        std::ofstream out(*path);
        if (!out) {
            throw fracdd::ConfigError("cannot write " + *path);
        }
        out << text << '\n';
    } else {
        std::cout << text << '\n';
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-level Schwarz preconditioned CG for space-fractional diffusion"};
    app.require_subcommand(1);

    int n = 16;
    double alpha = 0.75;
    double c = 0.0;
    std::string measure = "axes4";
    double drop_tol = 1e-12;
    std::string out_path;
    auto* assemble = app.add_subcommand("assemble", "Assemble the operator symbol and write an FSYM cache");
    assemble->add_option("--n", n, "Cells per axis")->required();
    assemble->add_option("--alpha", alpha, "Half the differentiation order, in (1/2, 1)")->required();
    assemble->add_option("--c", c, "Reaction coefficient")->required();
    assemble->add_option("--measure", measure, "axes4 or uniform:L")->required();
    assemble->add_option("--drop-tol", drop_tol, "Relative magnitude below which entries are dropped");
    assemble->add_option("--out", out_path, "Output FSYM file")->required();

    std::string config_path;
    std::optional<std::string> cache_path;
    std::optional<std::string> solve_out;
    auto* solve = app.add_subcommand("solve", "Run one experiment and print its result row as JSON");
    solve->add_option("--config", config_path, "JSON experiment config")->required();
    solve->add_option("--cache", cache_path, "FSYM cache file");
    solve->add_option("--out", solve_out, "Write the JSON here instead of stdout");

    int table = 1;
    std::optional<std::string> grid_path;
    fracdd::TableOptions table_options;
    std::string csv_path;
    bool no_timing = false;
    auto* bench = app.add_subcommand("bench", "Run the iteration-count benchmark grid and write CSV");
    bench->add_option("--table", table, "1 or 2")->required()->check(CLI::IsMember({1, 2}));
    bench->add_option("--grid", grid_path, "JSON list of {n, m, overlap_cells} rows");
    bench->add_option("--jobs", table_options.jobs, "Rows solved concurrently")->check(CLI::PositiveNumber);
    bench->add_option("--out", csv_path, "Output CSV file")->required();
    bench->add_option("--cache-dir", table_options.cache_dir, "Directory for FSYM caches");
    bench->add_flag("--no-timing", no_timing, "Leave the seconds column empty (byte-reproducible output)");

    std::string cond_config;
    std::optional<int> probes;
    auto* cond = app.add_subcommand("cond", "Estimate extreme eigenvalues of the preconditioned operator");
    cond->add_option("--config", cond_config, "JSON experiment config")->required();
    cond->add_option("--probes", probes, "Number of random probes")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*assemble) {
            const fracdd::UniformMesh mesh({0.0, 2.0, 0.0, 2.0}, n);
            const auto op = fracdd::build_operator(mesh, alpha, c, fracdd::discretize_measure(measure), drop_tol);
            fracdd::save_symbol(out_path, op);
            return 0;
        }
        if (*solve) {
            auto spec = fracdd::ExperimentSpec::load(config_path);
            if (cache_path) spec.cache = cache_path;
            if (solve_out) spec.out = solve_out;
            const auto result = fracdd::run_experiment(spec);
            emit(fracdd::result_to_json(result.row, spec), spec.out);
            return result.report.max_iter_reached ? kExitMaxIter : 0;
        }
        if (*bench) {
            const auto rows = grid_path ? fracdd::load_grid(*grid_path) : fracdd::default_grid();
            table_options.include_timing = !no_timing;
            std::ofstream csv(csv_path);
            if (!csv) {
                throw fracdd::ConfigError("cannot write " + csv_path);
            }
            const auto summary = fracdd::run_table(table, rows, csv, table_options);
            std::cout << "rows " << summary.rows.size() << ", iteration spread " << summary.spread << '\n';
            for (const auto& row : summary.rows) {
                if (!row.converged) return kExitMaxIter;
            }
            return 0;
        }
        if (*cond) {
            auto spec = fracdd::ExperimentSpec::load(cond_config);
            if (probes) spec.probes = *probes;
            const auto op = fracdd::obtain_operator(spec);
            const auto result = fracdd::run_experiment(spec, *op);
            std::cout << fracdd::condition_to_json(result.condition, spec) << '\n';
            return 0;
        }
    } catch (const fracdd::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const fracdd::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    return 0;
}
