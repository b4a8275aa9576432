#pragma once

#include "pwadv/advection.hpp"
#include "pwadv/grid.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pwadv {

// ---------------------------------------------------------------------------
// Execution schedules. Every variant evaluates the same per-point formulas in
// the same order; they differ only in how operands travel from the full grid
// arrays ("external" memory) to the arithmetic.
//
//   Reference       operands are read directly from the grid arrays.
//   ColumnBuffered  per column, the 17 input column arrays are copied into
//                   scratch, computed, and 3 output columns copied back.
//   YBatched        as ColumnBuffered, but each scratch array holds y_batch
//                   consecutive columns.
//   XReordered      batches of Y are the outer loop and X runs inside; arrays
//                   whose X-offset shifts by one are recycled locally, so only
//                   9 of the 17 input arrays are fetched per X step.
// ---------------------------------------------------------------------------
enum class Variant { Reference, ColumnBuffered, YBatched, XReordered };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view name);

struct ScheduleSpec {
    Variant variant = Variant::Reference;
    std::size_t y_batch = 64;
    std::size_t engines = 1;
};

/// Throws std::invalid_argument if the schedule does not fit the grid.
void check_schedule(const ScheduleSpec& spec, const GridDims& dims);

/// Counts are in double-precision elements except scratch sizes (bytes).
struct TrafficReport {
    std::uint64_t external_reads = 0;
    std::uint64_t external_writes = 0;
    std::uint64_t local_reads = 0;
    std::uint64_t local_writes = 0;
    std::uint64_t scratch_bytes_peak = 0;       // summed over engines
    std::uint64_t scratch_bytes_per_engine = 0; // largest single engine

    TrafficReport& operator+=(const TrafficReport& other);
    friend bool operator==(const TrafficReport&, const TrafficReport&) = default;
};

/// Interior X range [x_begin, x_end) owned by one engine (1-based).
struct Slab {
    std::size_t x_begin = 1;
    std::size_t x_end = 1;

    [[nodiscard]] std::size_t size() const { return x_end - x_begin; }
    friend bool operator==(const Slab&, const Slab&) = default;
};

/// Balanced split of 1..nx; the first nx % engines slabs get one extra plane.
std::vector<Slab> partition_domain(const GridDims& dims, std::size_t engines);

/// Number of scratch arrays: 17 input neighbourhood arrays plus 3 outputs.
inline constexpr std::size_t kInputArrays = 17;
inline constexpr std::size_t kOutputArrays = 3;
inline constexpr std::size_t kScratchArrays = kInputArrays + kOutputArrays;

struct ScheduleResult {
    SourceSet sources;
    TrafficReport traffic;
    double wall_seconds = 0.0;
};

ScheduleResult run_schedule(const FieldSet& fields, const AdvectionCoefficients& coeffs,
                            const ScheduleSpec& spec);

struct Comparison {
    bool bitwise_equal = true;
    double max_abs_diff = 0.0;
    std::uint64_t max_ulp_diff = 0;
};

/// Compares interior cells of all three source fields.
Comparison compare_outputs(const SourceSet& a, const SourceSet& b);

/// Distance in units in the last place between two doubles (0 iff identical bits).
std::uint64_t ulp_distance(double a, double b);

} // namespace pwadv
