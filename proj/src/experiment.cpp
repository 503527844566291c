#include "fracdd/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "fracdd/assembly.hpp"
#include "fracdd/errors.hpp"
#include "fracdd/manufactured.hpp"
#include "fracdd/schwarz.hpp"
#include "fracdd/symbol_io.hpp"

namespace fracdd {

namespace {

using nlohmann::json;

template <typename T>
T get_as(const json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> known, const char* where) {
    for (const auto& [key, value] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError(std::string("unknown key '") + key + "' in " + where);
        }
    }
}

SolveConfig parse_solver(const json& j) {
    if (!j.is_object()) {
        throw ConfigError("'solver' must be an object");
    }
    reject_unknown(j, {"tol_infty", "max_iter", "stopping", "residual_tol"}, "solver");
    SolveConfig cfg;
    if (j.contains("tol_infty")) cfg.tol_infty = get_as<double>(j, "tol_infty");
    if (j.contains("max_iter")) cfg.max_iter = get_as<int>(j, "max_iter");
    if (j.contains("residual_tol")) cfg.residual_tol = get_as<double>(j, "residual_tol");
    if (j.contains("stopping")) {
        const auto rule = get_as<std::string>(j, "stopping");
        if (rule == "increment") {
            cfg.rule = StoppingRule::Increment;
        } else if (rule == "residual") {
            cfg.rule = StoppingRule::RelativeResidual;
        } else {
            throw ConfigError("solver.stopping must be 'increment' or 'residual'");
        }
    }
    return cfg;
}

bool same_measure(const DirectionalMeasure& a, const DirectionalMeasure& b) {
    const auto& da = a.directions();
    const auto& db = b.directions();
    if (da.size() != db.size()) return false;
    for (std::size_t k = 0; k < da.size(); ++k) {
        if (std::abs(da[k].theta - db[k].theta) > 1e-12 || std::abs(da[k].weight - db[k].weight) > 1e-12) {
            return false;
        }
    }
    return true;
}

/// Diagonal of A recomputed from scratch; catches caches built on another
/// domain or with another drop tolerance regime.
double direct_diagonal(const UniformMesh& mesh, double alpha, double c, const DirectionalMeasure& measure) {
    double diag = c * assemble_mass(mesh).at({0, 0});
    for (const auto& pair : measure.antipodal_pairs()) {
        diag += -pair.weight * 2.0 * directional_entry(mesh, pair.theta, alpha, {0, 0});
    }
    return diag;
}

bool cache_matches(const FractionalOperator& cached, const ExperimentSpec& spec, const UniformMesh& mesh,
                   const DirectionalMeasure& measure) {
    if (cached.cells_per_axis() != spec.n || cached.alpha() != spec.alpha || cached.c() != spec.c ||
        !same_measure(cached.measure(), measure)) {
        return false;
    }
    const double expected = direct_diagonal(mesh, spec.alpha, spec.c, measure);
    return std::abs(cached.symbol().at({0, 0}) - expected) <= 1e-12 * std::abs(expected);
}

std::string table_cache_path(const std::string& dir, int table, int n) {
    return (std::filesystem::path(dir) / ("example" + std::to_string(table) + "_n" + std::to_string(n) + ".fsym"))
        .string();
}

} // namespace

void ExperimentSpec::validate() const {
    const UniformMesh mesh(bounds, n);
    (void)build_decomposition(mesh, m, overlap_cells);
    if (!(alpha > 0.5 && alpha < 1.0)) {
        throw ConfigError("alpha must lie in (1/2, 1)");
    }
    if (!(c >= 0.0)) {
        throw ConfigError("c must be nonnegative");
    }
    if (example != 1 && example != 2) {
        throw ConfigError("example must be 1 or 2");
    }
    if (bounds.ax != 0.0 || bounds.bx != 2.0 || bounds.ay != 0.0 || bounds.by != 2.0) {
        throw ConfigError("both examples are posed on [0, 2]^2");
    }
    if (!(drop_tol >= 0.0)) {
        throw ConfigError("drop_tol must be nonnegative");
    }
    if (probes < 1) {
        throw ConfigError("probes must be at least 1");
    }
    solver.validate();
    (void)discretize_measure(measure);
}

ExperimentSpec ExperimentSpec::parse(std::string_view json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed config JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    reject_unknown(j,
                   {"bounds", "alpha", "c", "measure", "n", "m", "overlap_cells", "solver", "example", "drop_tol",
                    "probes", "cache", "out"},
                   "config");
    ExperimentSpec spec;
    if (j.contains("example")) spec.example = get_as<int>(j, "example");
    spec.measure = spec.example == 2 ? MeasureSpec{MeasureKind::Uniform, 16} : MeasureSpec{};
    if (j.contains("bounds")) {
        const auto b = get_as<std::vector<double>>(j, "bounds");
        if (b.size() != 4) {
            throw ConfigError("bounds must be [ax, bx, ay, by]");
        }
        spec.bounds = {b[0], b[1], b[2], b[3]};
    }
    if (j.contains("alpha")) spec.alpha = get_as<double>(j, "alpha");
    if (j.contains("c")) spec.c = get_as<double>(j, "c");
    if (j.contains("measure")) spec.measure = MeasureSpec::parse(get_as<std::string>(j, "measure"));
    if (j.contains("n")) spec.n = get_as<int>(j, "n");
    if (j.contains("m")) spec.m = get_as<int>(j, "m");
    if (j.contains("overlap_cells")) spec.overlap_cells = get_as<int>(j, "overlap_cells");
    if (j.contains("solver")) spec.solver = parse_solver(j.at("solver"));
    if (j.contains("drop_tol")) spec.drop_tol = get_as<double>(j, "drop_tol");
    if (j.contains("probes")) spec.probes = get_as<int>(j, "probes");
    if (j.contains("cache")) spec.cache = get_as<std::string>(j, "cache");
    if (j.contains("out")) spec.out = get_as<std::string>(j, "out");
    spec.validate();
    return spec;
}

ExperimentSpec ExperimentSpec::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config " + path);
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

std::string ExperimentSpec::to_json() const {
    json j;
    j["bounds"] = {bounds.ax, bounds.bx, bounds.ay, bounds.by};
    j["alpha"] = alpha;
    j["c"] = c;
    j["measure"] = measure.to_string();
    j["n"] = n;
    j["m"] = m;
    j["overlap_cells"] = overlap_cells;
    j["example"] = example;
    j["drop_tol"] = drop_tol;
    j["probes"] = probes;
    j["solver"] = {{"tol_infty", solver.tol_infty},
                   {"max_iter", solver.max_iter},
                   {"stopping", solver.rule == StoppingRule::Increment ? "increment" : "residual"},
                   {"residual_tol", solver.residual_tol}};
    if (cache) j["cache"] = *cache;
    if (out) j["out"] = *out;
    return j.dump(2);
}

ExperimentSpec ExperimentSpec::for_example(int example, int n, int m, int overlap_cells) {
    ExperimentSpec spec;
    spec.example = example;
    spec.measure = example == 2 ? MeasureSpec{MeasureKind::Uniform, 16} : MeasureSpec{};
    spec.n = n;
    spec.m = m;
    spec.overlap_cells = overlap_cells;
    spec.validate();
    return spec;
}

std::shared_ptr<const FractionalOperator> obtain_operator(const ExperimentSpec& spec) {
    spec.validate();
    const UniformMesh mesh(spec.bounds, spec.n);
    const auto measure = discretize_measure(spec.measure);
    if (spec.cache && std::filesystem::exists(*spec.cache)) {
        try {
            auto cached = std::make_shared<const FractionalOperator>(load_symbol(*spec.cache));
            if (cache_matches(*cached, spec, mesh, measure)) {
                return cached;
            }
        } catch (const ConfigError&) {
            // unreadable cache: fall through and rebuild it
        }
    }
    auto op = std::make_shared<const FractionalOperator>(
        build_operator(mesh, spec.alpha, spec.c, measure, spec.drop_tol));
    if (spec.cache) {
        save_symbol(*spec.cache, *op);
    }
    return op;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    const auto op = obtain_operator(spec);
    return run_experiment(spec, *op);
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const FractionalOperator& op) {
    spec.validate();
    if (op.cells_per_axis() != spec.n) {
        throw ConfigError("operator was assembled for a different mesh");
    }
    const UniformMesh mesh(spec.bounds, spec.n);
    const auto decomposition = build_decomposition(mesh, spec.m, spec.overlap_cells);
    const double alpha = spec.alpha;
    const Vector f = load_vector(mesh, [alpha](double x, double y) { return manufactured_f_example1(x, y, alpha); });

    const auto start = std::chrono::steady_clock::now();
    const auto pre = build_preconditioner(op, decomposition, coarse_prolongation(mesh, spec.m));
    ExperimentResult result;
    result.report = pcg(op, pre, f, spec.solver);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.condition = estimate_condition(op, pre, spec.probes);

    auto& row = result.row;
    row.h = mesh.h();
    row.H = decomposition.H();
    row.delta = decomposition.delta();
    row.iters = result.report.iterations;
    row.cond_est = result.condition.cond;
    row.seconds = seconds;
    row.converged = result.report.converged;
    if (spec.example == 1) {
        row.l2_error = l2_error(mesh, result.report.solution, manufactured_u);
    }
    return result;
}

std::string result_to_json(const ResultRow& row, const ExperimentSpec& spec) {
    json j;
    j["h"] = row.h;
    j["H"] = row.H;
    j["delta"] = row.delta;
    j["iters"] = row.iters;
    j["cond_est"] = row.cond_est;
    j["l2_error"] = row.l2_error ? json(*row.l2_error) : json(nullptr);
    j["seconds"] = row.seconds;
    j["converged"] = row.converged;
    j["example"] = spec.example;
    j["measure"] = spec.measure.to_string();
    if (spec.example == 2) {
        j["note"] = "measure M(theta)=1 discretized by the midpoint rule with " +
                    std::to_string(spec.measure.directions) + " directions";
    }
    return j.dump(2);
}

std::string condition_to_json(const ConditionEstimate& est, const ExperimentSpec& spec) {
    json j;
    j["lambda_min"] = est.lambda_min;
    j["lambda_max"] = est.lambda_max;
    j["cond"] = est.cond;
    j["probes"] = est.probes_used;
    j["H_over_delta"] = static_cast<double>(spec.n / spec.m) / spec.overlap_cells;
    return j.dump(2);
}

std::vector<GridRow> default_grid() {
    std::vector<GridRow> rows;
    for (int n : {64, 128, 256}) {
        for (int k : {1, 2, 4}) {
            rows.push_back({n, n / 8, k});
        }
    }
    return rows;
}

std::vector<GridRow> load_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open grid file " + path);
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed grid JSON: ") + e.what());
    }
    if (!j.is_array()) {
        throw ConfigError("grid file must hold a JSON array");
    }
    std::vector<GridRow> rows;
    for (const auto& item : j) {
        if (!item.is_object()) {
            throw ConfigError("grid rows must be objects");
        }
        reject_unknown(item, {"n", "m", "overlap_cells"}, "grid row");
        rows.push_back({get_as<int>(item, "n"), get_as<int>(item, "m"), get_as<int>(item, "overlap_cells")});
    }
    return rows;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv_header(std::ostream& out) {
    out << "h,H,delta,iters,cond_est,l2_error,seconds\n";
}

void write_csv_row(std::ostream& out, const ResultRow& row, bool include_timing) {
    out << format_double(row.h) << ',' << format_double(row.H) << ',' << format_double(row.delta) << ','
        << row.iters << ',' << format_double(row.cond_est) << ','
        << (row.l2_error ? format_double(*row.l2_error) : std::string()) << ','
        << (include_timing ? format_double(row.seconds) : std::string()) << '\n';
}

TableSummary run_table(int table, const std::vector<GridRow>& rows, std::ostream& csv, const TableOptions& options) {
    if (table != 1 && table != 2) {
        throw ConfigError("table must be 1 or 2");
    }
    if (options.jobs < 1) {
        throw ConfigError("jobs must be at least 1");
    }
    std::vector<ExperimentSpec> specs;
    specs.reserve(rows.size());
    for (const auto& r : rows) {
        specs.push_back(ExperimentSpec::for_example(table, r.n, r.m, r.overlap_cells));
    }

    // One operator per mesh size, shared by every overlap/coarse setting.
    std::map<int, std::shared_ptr<const FractionalOperator>> operators;
    for (auto& spec : specs) {
        if (options.cache_dir) {
            std::filesystem::create_directories(*options.cache_dir);
            spec.cache = table_cache_path(*options.cache_dir, table, spec.n);
        }
        if (!operators.contains(spec.n)) {
            operators.emplace(spec.n, obtain_operator(spec));
        }
    }

    TableSummary summary;
    summary.rows.resize(specs.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
        for (std::size_t i = next++; i < specs.size(); i = next++) {
            try {
                summary.rows[i] = run_experiment(specs[i], *operators.at(specs[i].n)).row;
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        const auto workers = std::min<std::size_t>(static_cast<std::size_t>(options.jobs), specs.size());
        for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
        worker();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    write_csv_header(csv);
    for (const auto& row : summary.rows) {
        write_csv_row(csv, row, options.include_timing);
    }
    if (!summary.rows.empty()) {
        const auto [lo, hi] = std::minmax_element(summary.rows.begin(), summary.rows.end(),
                                                  [](const auto& a, const auto& b) { return a.iters < b.iters; });
        summary.spread = hi->iters - lo->iters;
    }
    return summary;
}

} // namespace fracdd
