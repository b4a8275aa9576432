#include "pwadv/dataflow_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pwadv {

void check_pipeline(const PipelineSpec& spec)
{
    if (spec.depth < 1 || spec.ii < 1 || !(spec.clock_hz > 0.0))
        throw std::invalid_argument("pipeline needs depth >= 1, ii >= 1 and a positive clock");
}

CycleReport pipeline_cycles(const PipelineSpec& spec, std::int64_t n_elements)
{
    check_pipeline(spec);
    if (n_elements < 1)
        throw std::invalid_argument("pipeline_cycles needs at least one element");
    CycleReport r;
    r.total_cycles = spec.depth + spec.ii * n_elements;
    r.fill_cycles = spec.depth;
    r.drain_cycles = spec.depth;
    r.full_cycles = std::max<std::int64_t>(0, r.total_cycles - 2 * spec.depth);
    r.utilization = static_cast<double>(r.full_cycles) / static_cast<double>(r.total_cycles);
    return r;
}

double pipeline_latency(const PipelineSpec& spec)
{
    check_pipeline(spec);
    return static_cast<double>(spec.depth) / spec.clock_hz;
}

void check_memory(const MemoryModel& mem)
{
    const bool ok = mem.arrays_per_xstep > 0 && mem.eff_bandwidth_1 > 0 && mem.contention > 0 &&
                    mem.contention <= 1.0 && mem.burst_bytes > 0 && mem.outstanding > 0;
    if (!ok)
        throw std::invalid_argument("memory model parameters must be positive with contention <= 1");
}

ModelGrid ModelGrid::factor_cells(double cells)
{
    if (!(cells >= 0.5))
        return {};
    const auto n = static_cast<std::uint64_t>(std::llround(cells));
    const std::uint64_t nz = std::min<std::uint64_t>(64, n);
    const double rest = static_cast<double>(n) / static_cast<double>(nz);
    const auto nx = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(std::sqrt(rest))));
    const auto ny = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(rest / static_cast<double>(nx))));
    return {nx, ny, nz};
}

namespace {

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

std::uint64_t batches(const ModelGrid& grid, std::uint64_t y_batch)
{
    if (y_batch < 1)
        throw std::invalid_argument("y_batch must be at least 1");
    return ceil_div(grid.ny, y_batch);
}

// A kernel cannot batch more columns than the grid has in Y.
std::uint64_t effective_batch(const ModelGrid& grid, std::uint64_t y_batch)
{
    return std::max<std::uint64_t>(1, std::min(y_batch, grid.ny));
}

ModelGrid engine_share(const ModelGrid& grid, std::uint64_t engines)
{
    return {ceil_div(grid.nx, engines), grid.ny, grid.nz};
}

} // namespace

std::int64_t kernel_compute_cycles(const ModelGrid& grid, const PipelineSpec& spec, std::uint64_t y_batch)
{
    const std::uint64_t runs = grid.nx * batches(grid, y_batch);
    if (runs == 0 || grid.nz == 0)
        return 0;
    const auto per_run = pipeline_cycles(spec, static_cast<std::int64_t>(y_batch * grid.nz)).total_cycles;
    return static_cast<std::int64_t>(runs) * per_run;
}

double kernel_memory_bytes(const ModelGrid& grid, const MemoryModel& mem, std::uint64_t y_batch)
{
    const double runs = static_cast<double>(grid.nx * batches(grid, y_batch));
    return runs * mem.arrays_per_xstep * static_cast<double>(y_batch * grid.nz) * sizeof(double);
}

double kernel_memory_seconds(const ModelGrid& grid, const MemoryModel& mem, std::uint64_t y_batch,
                             std::uint64_t engines_on_controller)
{
    check_memory(mem);
    if (engines_on_controller < 1)
        throw std::invalid_argument("at least one engine per controller");
    const double bytes = kernel_memory_bytes(grid, mem, y_batch);
    if (bytes == 0.0)
        return 0.0;
    const double bandwidth =
        mem.eff_bandwidth_1 * std::pow(mem.contention, static_cast<double>(engines_on_controller - 1));
    return bytes / bandwidth;
}

double kernel_time(const ModelGrid& grid, const KernelConfig& config, std::uint64_t engines)
{
    if (engines < 1)
        throw std::invalid_argument("kernel_time needs at least one engine");
    if (config.controllers < 1)
        throw std::invalid_argument("kernel_time needs at least one memory controller");
    check_pipeline(config.pipeline);
    if (grid.empty())
        return 0.0;
    const ModelGrid share = engine_share(grid, engines);
    const std::uint64_t per_controller = ceil_div(engines, config.controllers);
    const std::uint64_t batch = effective_batch(grid, config.y_batch);
    const double compute =
        static_cast<double>(kernel_compute_cycles(share, config.pipeline, batch)) / config.pipeline.clock_hz;
    return compute + kernel_memory_seconds(share, config.memory, batch, per_controller);
}

double gflops(double cells, const FlopProfile& profile, double seconds)
{
    if (!(seconds > 0.0))
        throw std::invalid_argument("gflops needs a positive duration");
    return flops(cells, profile) / seconds / 1e9;
}

// ---------------------------------------------------------------------------
// Calibration
//
// With A the compute time and B the bytes of the slowest engine, and m the
// number of extra engines sharing its controller, the model is
//     T = A + B / (bw * c^m).
// ln(B / (T - A)) = ln bw + m ln c is linear in (ln bw, ln c): solve that in
// the least-squares sense, then refine with Gauss-Newton on the relative
// time residuals.
// ---------------------------------------------------------------------------
namespace {

struct Term {
    double compute;
    double bytes;
    double extra; // m
    double observed;
};

struct Solve2 {
    double x0;
    double x1;
};

Solve2 solve_2x2(double a00, double a01, double a11, double b0, double b1)
{
    const double det = a00 * a11 - a01 * a01;
    const double scale = std::max({std::fabs(a00 * a11), std::fabs(a01 * a01), 1e-300});
    if (std::fabs(det) <= 1e-12 * scale)
        throw std::invalid_argument("calibration is singular: observations need distinct engines-per-controller loads");
    return {(b0 * a11 - b1 * a01) / det, (a00 * b1 - a01 * b0) / det};
}

double model_time(const Term& t, double log_bw, double log_c)
{
    return t.compute + t.bytes * std::exp(-log_bw - t.extra * log_c);
}

} // namespace

CalibrationResult calibrate(const std::vector<Observation>& observations, const KernelConfig& config)
{
    if (observations.size() < 2)
        throw std::invalid_argument("calibration needs at least two observations");
    check_pipeline(config.pipeline);

    std::vector<Term> terms;
    for (const auto& obs : observations) {
        if (obs.engines < 1 || !(obs.seconds > 0.0) || obs.grid.empty())
            throw std::invalid_argument("calibration observations need engines >= 1, a non-empty grid and positive time");
        const ModelGrid share = engine_share(obs.grid, obs.engines);
        const std::uint64_t batch = effective_batch(obs.grid, config.y_batch);
        Term t;
        t.compute = static_cast<double>(kernel_compute_cycles(share, config.pipeline, batch)) /
                    config.pipeline.clock_hz;
        t.bytes = kernel_memory_bytes(share, config.memory, batch);
        t.extra = static_cast<double>(ceil_div(obs.engines, config.controllers) - 1);
        t.observed = obs.seconds;
        if (!(obs.seconds > t.compute))
            throw std::invalid_argument("observation is faster than the modelled compute bound");
        terms.push_back(t);
    }

    // Linearised fit.
    double s00 = 0, s01 = 0, s11 = 0, r0 = 0, r1 = 0;
    for (const auto& t : terms) {
        const double y = std::log(t.bytes / (t.observed - t.compute));
        s00 += 1.0;
        s01 += t.extra;
        s11 += t.extra * t.extra;
        r0 += y;
        r1 += t.extra * y;
    }
    auto [log_bw, log_c] = solve_2x2(s00, s01, s11, r0, r1);

    // Gauss-Newton on relative residuals.
    for (int iter = 0; iter < 50; ++iter) {
        double a00 = 0, a01 = 0, a11 = 0, g0 = 0, g1 = 0;
        for (const auto& t : terms) {
            const double model = model_time(t, log_bw, log_c);
            const double r = (model - t.observed) / t.observed;
            const double mem = model - t.compute;
            const double j0 = -mem / t.observed;
            const double j1 = -t.extra * mem / t.observed;
            a00 += j0 * j0;
            a01 += j0 * j1;
            a11 += j1 * j1;
            g0 += j0 * r;
            g1 += j1 * r;
        }
        const auto step = solve_2x2(a00, a01, a11, -g0, -g1);
        log_bw += step.x0;
        log_c += step.x1;
        if (std::fabs(step.x0) < 1e-15 && std::fabs(step.x1) < 1e-15)
            break;
    }

    CalibrationResult result;
    result.memory = config.memory;
    result.memory.eff_bandwidth_1 = std::exp(log_bw);
    result.memory.contention = std::exp(log_c);
    if (result.memory.contention > 1.0 + 1e-12)
        throw std::invalid_argument("fitted contention exceeds 1: more engines per controller appear faster");
    result.memory.contention = std::min(result.memory.contention, 1.0);
    for (const auto& t : terms)
        result.relative_residuals.push_back((model_time(t, log_bw, log_c) - t.observed) / t.observed);
    return result;
}

// ---------------------------------------------------------------------------
// Ladder rungs. Depths, initiation intervals and clocks follow the published
// HLS reports; array counts and bandwidth efficiencies of the intermediate
// rungs are illustrative and only meant to preserve the ordering.
// ---------------------------------------------------------------------------
std::vector<LadderRung> ladder_rungs(const KernelConfig& final_config)
{
    const double base_clock = 250e6;
    const std::uint64_t batch = final_config.y_batch;
    // Without local buffers every operand load goes through the single data
    // port, one access per cycle.
    const auto port_ii = stencil_census().loads_per_point(false);
    return {
        {"Pipeline directive on inner loop", {71, port_ii, base_clock}, 1, 0.0, 1.0},
        {"Local BRAM for column data", {71, 2, base_clock}, 1, 15.0, 0.5},
        {"Local BRAM batches columns in Y", {71, 1, base_clock}, batch, 15.0, 0.5},
        {"Extract all variables", {65, 1, base_clock}, batch, 15.0, 0.5},
        {"Burst mode on port", {65, 1, base_clock}, batch, 15.0, 0.8},
        {"Re-order X and Y loops", {65, 1, base_clock}, batch, final_config.memory.arrays_per_xstep, 0.8},
        {"Replace memcpy with explicit loops", {65, 1, base_clock}, batch, final_config.memory.arrays_per_xstep, 0.9},
        {"Tune double precision cores and clock to 310Mhz", final_config.pipeline, batch,
         final_config.memory.arrays_per_xstep, 1.0},
    };
}

double ladder_kernel_time(const ModelGrid& grid, const LadderRung& rung, const KernelConfig& final_config)
{
    if (grid.empty())
        return 0.0;
    const std::uint64_t batch = effective_batch(grid, rung.y_batch);
    const double compute =
        static_cast<double>(kernel_compute_cycles(grid, rung.pipeline, batch)) / rung.pipeline.clock_hz;
    if (rung.arrays_per_xstep <= 0.0)
        return compute;
    MemoryModel mem = final_config.memory;
    mem.arrays_per_xstep = rung.arrays_per_xstep;
    mem.eff_bandwidth_1 *= rung.memory_efficiency;
    return compute + kernel_memory_seconds(grid, mem, batch, 1);
}

} // namespace pwadv
