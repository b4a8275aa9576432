#pragma once

#include "pwadv/advection.hpp"
#include "pwadv/grid.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pwadv {

// ---------------------------------------------------------------------------
// Analytic model of the accelerator kernel.
//
// A pipelined loop of depth D and initiation interval II processing N
// elements runs for D + II*N cycles; it is full only between fill and drain,
// i.e. for max(0, total - 2D) cycles. The kernel alternates an SDRAM copy
// phase and a compute phase per (X plane, Y batch) with no overlap.
// ---------------------------------------------------------------------------

struct PipelineSpec {
    std::int64_t depth = 72;
    std::int64_t ii = 1;
    double clock_hz = 310e6;
};

void check_pipeline(const PipelineSpec& spec);

struct CycleReport {
    std::int64_t total_cycles = 0;
    std::int64_t fill_cycles = 0;
    std::int64_t drain_cycles = 0;
    std::int64_t full_cycles = 0;
    double utilization = 0.0;
};

CycleReport pipeline_cycles(const PipelineSpec& spec, std::int64_t n_elements);

/// Seconds for one element to traverse the pipeline: depth / clock.
double pipeline_latency(const PipelineSpec& spec);

struct MemoryModel {
    double arrays_per_xstep = 6;  // external planes moved per X step
    double eff_bandwidth_1 = 1e9; // bytes/s for a lone engine on a controller
    double contention = 1.0;      // multiplicative derating per extra engine
    double burst_bytes = 256 * 8;
    double outstanding = 8;
};

void check_memory(const MemoryModel& mem);

/// Extents used by the cost model. Unlike GridDims, zero extents are allowed
/// (an empty problem costs nothing).
struct ModelGrid {
    std::uint64_t nx = 0;
    std::uint64_t ny = 0;
    std::uint64_t nz = 0;

    [[nodiscard]] double cells() const
    {
        return static_cast<double>(nx) * static_cast<double>(ny) * static_cast<double>(nz);
    }
    [[nodiscard]] bool empty() const { return nx == 0 || ny == 0 || nz == 0; }

    static ModelGrid from(const GridDims& d) { return {d.nx, d.ny, d.nz}; }
    /// nz = min(64, cells), nx ~ ny ~ sqrt(cells / nz). cells = 0 gives an empty grid.
    static ModelGrid factor_cells(double cells);

    friend bool operator==(const ModelGrid&, const ModelGrid&) = default;
};

/// nx * ceil(ny / y_batch) pipeline runs of y_batch * nz elements each.
std::int64_t kernel_compute_cycles(const ModelGrid& grid, const PipelineSpec& spec, std::uint64_t y_batch);

/// Bytes moved between SDRAM and the kernel's local buffers.
double kernel_memory_bytes(const ModelGrid& grid, const MemoryModel& mem, std::uint64_t y_batch);

double kernel_memory_seconds(const ModelGrid& grid, const MemoryModel& mem, std::uint64_t y_batch,
                             std::uint64_t engines_on_controller);

struct KernelConfig {
    PipelineSpec pipeline;
    MemoryModel memory;
    std::uint64_t y_batch = 64;
    std::uint64_t controllers = 2;
};

/// Time of the slowest engine: engines split X into ceil(nx / engines) planes
/// each and are spread evenly over the memory controllers.
double kernel_time(const ModelGrid& grid, const KernelConfig& config, std::uint64_t engines);

/// cells * total_per_cell / seconds / 1e9. Throws if seconds <= 0.
double gflops(double cells, const FlopProfile& profile, double seconds);

// ---------------------------------------------------------------------------
// Calibration of (eff_bandwidth_1, contention) from measured kernel times.
// ---------------------------------------------------------------------------
struct Observation {
    ModelGrid grid;
    std::uint64_t engines = 1;
    double seconds = 0.0;
};

struct CalibrationResult {
    MemoryModel memory;
    std::vector<double> relative_residuals; // (model - observed) / observed
};

/// Least-squares fit minimising relative time error. Needs at least two
/// observations with distinct engines-per-controller loads; throws
/// std::invalid_argument otherwise or when an observation is faster than its
/// compute bound.
CalibrationResult calibrate(const std::vector<Observation>& observations, const KernelConfig& config);

// ---------------------------------------------------------------------------
// The optimisation ladder as model configurations (illustrative; only the
// final rung is calibrated).
// ---------------------------------------------------------------------------
struct LadderRung {
    std::string label;
    PipelineSpec pipeline;
    std::uint64_t y_batch = 1;
    double arrays_per_xstep = 0;
    double memory_efficiency = 1.0; // fraction of the calibrated bandwidth
};

std::vector<LadderRung> ladder_rungs(const KernelConfig& final_config);
double ladder_kernel_time(const ModelGrid& grid, const LadderRung& rung, const KernelConfig& final_config);

} // namespace pwadv
