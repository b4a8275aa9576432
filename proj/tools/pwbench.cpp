// pwbench: run the advection schedules on the host, query the accelerator
// cost models, and check them against the published figures.

#include "pwadv/advection.hpp"
#include "pwadv/params.hpp"
#include "pwadv/reference_data.hpp"
#include "pwadv/report.hpp"
#include "pwadv/schedules.hpp"
#include "pwadv/validation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

using namespace pwadv;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::optional<std::string> params_file;
    std::vector<std::string> overrides;
    std::optional<std::string> out;
    std::string format = "csv";
};

void add_common(CLI::App& cmd, Common& c)
{
    cmd.add_option("--params", c.params_file, "Parameter file (key = value, or .json)");
    cmd.add_option("--set", c.overrides, "Override one parameter, key=value (repeatable)");
    cmd.add_option("--out", c.out, "Write the table to FILE instead of stdout");
    cmd.add_option("--format", c.format, "Table format")->check(CLI::IsMember({"csv", "json"}));
}

ModelParams load(const Common& c)
{
    std::optional<std::filesystem::path> path;
    if (c.params_file) {
        path = *c.params_file;
        if (!std::filesystem::exists(*path))
            throw UsageError("parameter file not found: " + *c.params_file);
    }
    ModelParams p = resolve_params(path);
    for (const auto& kv : c.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw UsageError("--set expects key=value, got '" + kv + "'");
        set_param(p, std::string_view(kv).substr(0, eq), std::string_view(kv).substr(eq + 1));
    }
    return p;
}

void emit(const Common& c, const std::vector<std::string>& columns, const std::vector<Record>& rows)
{
    const Format fmt = parse_format(c.format);
    if (!c.out) {
        write_table(std::cout, columns, rows, fmt);
        return;
    }
    std::ofstream file(*c.out);
    if (!file)
        throw std::runtime_error("cannot write " + *c.out);
    write_table(file, columns, rows, fmt);
}

std::vector<std::uint64_t> parse_extents(const std::string& text)
{
    std::vector<std::uint64_t> parts;
    std::stringstream in(text);
    std::string piece;
    while (std::getline(in, piece, 'x')) {
        if (piece.empty() || piece.find_first_not_of("0123456789") != std::string::npos)
            throw UsageError("grid must look like NXxNYxNZ, got '" + text + "'");
        parts.push_back(std::stoull(piece));
    }
    if (parts.size() != 3)
        throw UsageError("grid must look like NXxNYxNZ, got '" + text + "'");
    return parts;
}

ModelGrid parse_model_grid(const std::string& text)
{
    const auto p = parse_extents(text);
    return {p[0], p[1], p[2]};
}

double parse_cells(const std::string& text)
{
    std::size_t used = 0;
    double v = -1;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || !(v >= 0) || !std::isfinite(v))
        throw UsageError("cell count must be a non-negative number, got '" + text + "'");
    return v;
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string piece;
    while (std::getline(in, piece, sep))
        if (!piece.empty())
            out.push_back(piece);
    return out;
}

/// "1-12" or "1,2,4,8" (or a mix).
std::vector<std::uint64_t> parse_engine_list(const std::string& text)
{
    std::vector<std::uint64_t> out;
    for (const auto& item : split(text, ',')) {
        const auto dash = item.find('-');
        try {
            if (dash == std::string::npos) {
                out.push_back(std::stoull(item));
            } else {
                const auto lo = std::stoull(item.substr(0, dash));
                const auto hi = std::stoull(item.substr(dash + 1));
                if (lo > hi)
                    throw UsageError("empty engine range '" + item + "'");
                for (auto e = lo; e <= hi; ++e)
                    out.push_back(e);
            }
        } catch (const std::logic_error&) {
            throw UsageError("bad engine list '" + text + "'");
        }
    }
    for (auto e : out)
        if (e == 0)
            throw UsageError("engine counts must be at least 1");
    if (out.empty())
        throw UsageError("engine list is empty");
    return out;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------
struct BenchArgs {
    Common common;
    std::string grid = "64x64x64";
    std::vector<std::string> schedules;
    std::size_t engines = 1;
    std::optional<std::size_t> y_batch;
    std::uint64_t seed = 42;
    std::string generator = "random";
    std::size_t reps = 5;
    std::optional<std::string> coeffs_file;
};

AdvectionCoefficients load_coefficients(const std::optional<std::string>& path, const GridDims& dims)
{
    if (!path)
        return AdvectionCoefficients::uniform(dims.nz);
    std::ifstream in(*path);
    if (!in)
        throw UsageError("coefficient file not found: " + *path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("invalid coefficient file: " + std::string(e.what()));
    }
    AdvectionCoefficients c;
    try {
        c.tcx = j.at("tcx").get<double>();
        c.tcy = j.at("tcy").get<double>();
        c.tzc1 = j.at("tzc1").get<std::vector<double>>();
        c.tzc2 = j.at("tzc2").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("coefficient file needs tcx, tcy, tzc1[nz], tzc2[nz]: " + std::string(e.what()));
    }
    check_coefficients(c, dims);
    return c;
}

GeneratorSpec make_generator(const BenchArgs& a)
{
    if (a.generator == "random")
        return RandomFill{a.seed};
    if (a.generator == "trig")
        return TrigFill{};
    return UniformFill{1.0, 1.0, 1.0};
}

bool bottom_level_zero(const SourceSet& s)
{
    const auto& d = s.dims();
    for (std::size_t i = 1; i <= d.nx; ++i)
        for (std::size_t j = 1; j <= d.ny; ++j)
            if (s.su(i, j, 1) != 0.0 || s.sv(i, j, 1) != 0.0 || s.sw(i, j, 1) != 0.0)
                return false;
    return true;
}

int cmd_bench(const BenchArgs& a)
{
    const auto ext = parse_extents(a.grid);
    GridDims dims;
    try {
        dims = make_grid(ext[0], ext[1], ext[2]);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (a.reps < 1)
        throw UsageError("--reps must be at least 1");

    std::vector<Variant> variants;
    if (a.schedules.empty()) {
        variants = {Variant::Reference, Variant::ColumnBuffered, Variant::YBatched, Variant::XReordered};
    } else {
        for (const auto& s : a.schedules) {
            try {
                variants.push_back(parse_variant(s));
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
        }
    }
    const std::size_t batch = a.y_batch.value_or(std::min<std::size_t>(64, dims.ny));
    for (Variant v : variants) {
        try {
            check_schedule({v, batch, a.engines}, dims);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }

    const auto coeffs = load_coefficients(a.coeffs_file, dims);
    const FieldSet fields = fill_fields(dims, make_generator(a));
    const std::string gen_label = a.generator == "random" ? "random(" + std::to_string(a.seed) + ")" : a.generator;
    const std::string host = host_description();

    std::vector<RunReport> reports;
    bool consistent = true;
    for (Variant v : variants) {
        RunReport r;
        r.spec = {v, batch, a.engines};
        r.dims = dims;
        r.generator = gen_label;
        r.host = host;
        for (std::size_t rep = 0; rep < a.reps; ++rep) {
            const auto result = run_schedule(fields, coeffs, r.spec);
            const auto sum = checksum(result.sources);
            if (rep == 0) {
                r.checksum = sum;
                r.traffic = result.traffic;
                r.bottom_level_zero = bottom_level_zero(result.sources);
            } else if (sum != r.checksum || !(result.traffic == r.traffic)) {
                std::cerr << "error: " << to_string(v) << " output changed between repetitions\n";
                consistent = false;
            }
            r.wall_seconds.push_back(result.wall_seconds);
        }
        if (!reports.empty() && r.checksum != reports.front().checksum) {
            std::cerr << "error: " << to_string(v) << " checksum differs from " << to_string(reports.front().spec.variant)
                      << '\n';
            consistent = false;
        }
        if (!r.bottom_level_zero) {
            std::cerr << "error: " << to_string(v) << " wrote a nonzero bottom level\n";
            consistent = false;
        }
        reports.push_back(std::move(r));
    }

    std::vector<Record> rows;
    for (const auto& r : reports)
        rows.push_back(to_record(r));
    emit(a.common, run_columns(), rows);
    return consistent ? kExitOk : kExitFailed;
}

// ---------------------------------------------------------------------------
// model / sweep
// ---------------------------------------------------------------------------
struct ModelArgs {
    Common common;
    std::optional<std::string> grid;
    std::optional<std::string> cells;
    std::uint64_t engines = 1;
};

ModelGrid pick_grid(const std::optional<std::string>& grid, const std::optional<std::string>& cells,
                    const ModelGrid& fallback)
{
    if (grid)
        return parse_model_grid(*grid);
    if (cells)
        return ModelGrid::factor_cells(parse_cells(*cells));
    return fallback;
}

int cmd_model(const ModelArgs& a)
{
    if (!a.grid && !a.cells)
        throw UsageError("model needs --grid or --cells");
    if (a.engines < 1)
        throw UsageError("--engines must be at least 1");
    const ModelParams p = load(a.common);
    const ModelGrid g = pick_grid(a.grid, a.cells, {});
    emit(a.common, sweep_columns(), {to_record(SweepRow{end_to_end(g, a.engines, p.system), std::nullopt})});
    return kExitOk;
}

struct SweepArgs {
    Common common;
    std::optional<std::string> grid;
    std::optional<std::string> cells;
    std::uint64_t engines = 12;
    std::optional<std::string> engine_list;
    std::optional<std::string> cells_list;
    bool ladder = false;
    bool measure = false;
    std::size_t reps = 1;
};

/// Host wall time of the X-reordered schedule, or nothing when the grid is
/// too large to run here.
std::optional<double> measure(const ModelGrid& g, std::uint64_t engines, std::size_t reps)
{
    constexpr double kMaxCells = 64.0 * 1024 * 1024;
    if (g.empty() || g.nz < 2 || g.cells() > kMaxCells || engines > g.nx)
        return std::nullopt;
    const GridDims dims = make_grid(g.nx, g.ny, g.nz);
    const FieldSet fields = fill_fields(dims, RandomFill{42});
    const auto coeffs = AdvectionCoefficients::uniform(dims.nz);
    const ScheduleSpec spec{Variant::XReordered, std::min<std::size_t>(64, dims.ny), engines};
    double best = INFINITY;
    for (std::size_t r = 0; r < std::max<std::size_t>(reps, 1); ++r)
        best = std::min(best, run_schedule(fields, coeffs, spec).wall_seconds);
    return best;
}

int cmd_sweep(const SweepArgs& a)
{
    const ModelParams p = load(a.common);
    if (a.ladder) {
        const ModelGrid g = pick_grid(a.grid, a.cells, ladder_grid());
        const auto rungs = ladder_rungs(p.system.kernel);
        const auto published = reference::kernel_ladder();
        // Published rows: CPU reference, initial port, then one per rung.
        std::vector<Record> rows;
        for (std::size_t r = 0; r < rungs.size(); ++r) {
            const auto& pub = published[r + 2];
            rows.push_back(to_record(LadderRow{r + 1, rungs[r].label,
                                               ladder_kernel_time(g, rungs[r], p.system.kernel),
                                               pub.runtime_ms / 1e3, std::string(pub.citation)}));
        }
        emit(a.common, ladder_columns(), rows);
        return kExitOk;
    }
    if (a.engine_list && a.cells_list)
        throw UsageError("give either --engines-list or --cells-list, not both");
    std::vector<SweepRow> rows;
    if (a.engine_list) {
        const ModelGrid g = pick_grid(a.grid, a.cells, breakdown_grid());
        for (const auto& r : scaling_table(g, parse_engine_list(*a.engine_list), p.system))
            rows.push_back({r, a.measure ? measure(g, r.engines, a.reps) : std::nullopt});
    } else if (a.cells_list) {
        if (a.engines < 1)
            throw UsageError("--engines must be at least 1");
        std::vector<ModelGrid> grids;
        for (const auto& c : split(*a.cells_list, ','))
            grids.push_back(ModelGrid::factor_cells(parse_cells(c)));
        if (grids.empty())
            throw UsageError("cell list is empty");
        for (const auto& r : grid_sweep(grids, a.engines, p.system))
            rows.push_back({r, a.measure ? measure(r.grid, a.engines, a.reps) : std::nullopt});
    } else {
        throw UsageError("sweep needs --engines-list, --cells-list or --ladder");
    }
    std::vector<Record> records;
    for (const auto& r : rows)
        records.push_back(to_record(r));
    emit(a.common, sweep_columns(), records);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// calibrate
// ---------------------------------------------------------------------------
struct CalibrateArgs {
    Common common;
    std::vector<std::string> observations;
};

/// GRID:ENGINES:SECONDS where GRID is NXxNYxNZ or a cell count.
Observation parse_observation(const std::string& text)
{
    const auto parts = split(text, ':');
    if (parts.size() != 3)
        throw UsageError("observation must be GRID:ENGINES:SECONDS, got '" + text + "'");
    Observation o;
    o.grid = parts[0].find('x') != std::string::npos ? parse_model_grid(parts[0])
                                                     : ModelGrid::factor_cells(parse_cells(parts[0]));
    try {
        o.engines = std::stoull(parts[1]);
        o.seconds = std::stod(parts[2]);
    } catch (const std::logic_error&) {
        throw UsageError("observation must be GRID:ENGINES:SECONDS, got '" + text + "'");
    }
    return o;
}

int cmd_calibrate(const CalibrateArgs& a)
{
    const ModelParams p = load(a.common);
    std::vector<Observation> obs;
    if (a.observations.empty()) {
        obs = published_anchors(p);
    } else {
        for (const auto& s : a.observations)
            obs.push_back(parse_observation(s));
    }
    CalibrationResult fit;
    try {
        fit = calibrate(obs, p.system.kernel);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    std::vector<Record> rows;
    auto add = [&](std::string key, double value) {
        Record r;
        r["key"] = std::move(key);
        r["value"] = value;
        rows.push_back(std::move(r));
    };
    add("memory.eff_bandwidth_1", fit.memory.eff_bandwidth_1);
    add("memory.contention", fit.memory.contention);
    for (std::size_t i = 0; i < fit.relative_residuals.size(); ++i)
        add("residual." + std::to_string(i + 1), fit.relative_residuals[i]);
    emit(a.common, {"key", "value"}, rows);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------
int cmd_validate(const Common& c)
{
    std::string source;
    std::optional<std::filesystem::path> path;
    if (c.params_file) {
        path = *c.params_file;
        if (!std::filesystem::exists(*path))
            throw UsageError("parameter file not found: " + *c.params_file);
    }
    ModelParams p = resolve_params(path, &source);
    for (const auto& kv : c.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw UsageError("--set expects key=value, got '" + kv + "'");
        set_param(p, std::string_view(kv).substr(0, eq), std::string_view(kv).substr(eq + 1));
    }

    const auto checks = run_validation(p);
    std::size_t passed = 0;
    std::ostream& log = c.out ? std::cout : std::cerr;
    log << "parameters: " << source << '\n';
    for (const auto& ch : checks) {
        passed += ch.passed;
        log << (ch.passed ? "PASS " : "FAIL ") << ch.id << "  " << ch.name << ": expected "
            << format_number(ch.expected) << ", got " << format_number(ch.actual);
        if (ch.kind == CheckKind::Absolute || ch.kind == CheckKind::Relative)
            log << " (" << to_string(ch.kind) << " tol " << format_number(ch.tolerance) << ")";
        log << "  [" << ch.citation << "]\n";
    }
    log << passed << "/" << checks.size() << " checks passed\n";

    std::vector<Record> rows;
    for (const auto& ch : checks)
        rows.push_back(to_record(ch));
    emit(c, check_columns(), rows);
    return passed == checks.size() ? kExitOk : kExitFailed;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Host benchmarks and accelerator cost models for the PW advection kernel"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "pwbench 1.0");

    BenchArgs bench;
    auto* b = app.add_subcommand("bench", "Run schedules on this host and report times, checksums and traffic");
    add_common(*b, bench.common);
    b->add_option("--grid", bench.grid, "Grid extents NXxNYxNZ")->capture_default_str();
    b->add_option("--schedule", bench.schedules, "reference | column | ybatched | xreordered (repeatable)");
    b->add_option("--engines", bench.engines, "Worker threads, one X slab each")->capture_default_str();
    b->add_option("--y-batch", bench.y_batch, "Columns per Y batch (default min(64, ny))");
    b->add_option("--seed", bench.seed, "Seed for the random generator")->capture_default_str();
    b->add_option("--generator", bench.generator, "Initial fields")
        ->check(CLI::IsMember({"random", "trig", "uniform"}))
        ->capture_default_str();
    b->add_option("--reps", bench.reps, "Repetitions per schedule")->capture_default_str();
    b->add_option("--coeffs", bench.coeffs_file, "JSON file with tcx, tcy, tzc1[nz], tzc2[nz]");

    ModelArgs model;
    auto* m = app.add_subcommand("model", "Predict kernel, DMA and total time for one configuration");
    add_common(*m, model.common);
    auto* mg = m->add_option("--grid", model.grid, "Grid extents NXxNYxNZ");
    m->add_option("--cells", model.cells, "Cell count, factored to nz=64 and nx~ny")->excludes(mg);
    m->add_option("--engines", model.engines, "Kernel instances")->capture_default_str();

    SweepArgs sweep;
    auto* s = app.add_subcommand("sweep", "Model over a list of engine counts, grid sizes, or the optimisation steps");
    add_common(*s, sweep.common);
    auto* sg = s->add_option("--grid", sweep.grid, "Grid extents NXxNYxNZ (default 1012x1024x64)");
    s->add_option("--cells", sweep.cells, "Cell count instead of --grid")->excludes(sg);
    s->add_option("--engines", sweep.engines, "Kernel instances for a cell sweep")->capture_default_str();
    s->add_option("--engines-list", sweep.engine_list, "Engine counts, e.g. 1-12 or 1,2,4,8");
    s->add_option("--cells-list", sweep.cells_list, "Cell counts, e.g. 1e6,4e6,16e6");
    s->add_flag("--ladder", sweep.ladder, "Model each published optimisation step (default grid 512x512x64)");
    s->add_flag("--measure", sweep.measure, "Also time the X-reordered schedule on this host where feasible");
    s->add_option("--reps", sweep.reps, "Repetitions per measured point")->capture_default_str();

    CalibrateArgs cal;
    auto* c = app.add_subcommand("calibrate", "Fit memory bandwidth and contention to measured kernel times");
    add_common(*c, cal.common);
    c->add_option("--obs", cal.observations,
                  "GRID:ENGINES:SECONDS, GRID as NXxNYxNZ or cells (repeatable; default: published anchors)");

    Common val;
    auto* v = app.add_subcommand("validate", "Check the models against every published figure");
    add_common(*v, val);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*b)
            return cmd_bench(bench);
        if (*m)
            return cmd_model(model);
        if (*s)
            return cmd_sweep(sweep);
        if (*c)
            return cmd_calibrate(cal);
        if (*v)
            return cmd_validate(val);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailed;
    }
    return kExitUsage;
}
