#include "pwadv/schedules.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

namespace pwadv {

std::string_view to_string(Variant v)
{
    switch (v) {
    case Variant::Reference: return "reference";
    case Variant::ColumnBuffered: return "column";
    case Variant::YBatched: return "ybatched";
    case Variant::XReordered: return "xreordered";
    }
    return "unknown";
}

Variant parse_variant(std::string_view name)
{
    for (Variant v : {Variant::Reference, Variant::ColumnBuffered, Variant::YBatched, Variant::XReordered})
        if (name == to_string(v))
            return v;
    throw std::invalid_argument("unknown schedule '" + std::string(name) +
                                "' (expected reference, column, ybatched or xreordered)");
}

void check_schedule(const ScheduleSpec& spec, const GridDims& dims)
{
    if (spec.engines < 1 || spec.engines > dims.nx)
        throw std::invalid_argument("engines must be in 1..nx (nx=" + std::to_string(dims.nx) + ")");
    if (spec.y_batch < 1)
        throw std::invalid_argument("y_batch must be at least 1");
    if ((spec.variant == Variant::YBatched || spec.variant == Variant::XReordered) && spec.y_batch > dims.ny)
        throw std::invalid_argument("y_batch must not exceed ny (ny=" + std::to_string(dims.ny) + ")");
}

TrafficReport& TrafficReport::operator+=(const TrafficReport& other)
{
    external_reads += other.external_reads;
    external_writes += other.external_writes;
    local_reads += other.local_reads;
    local_writes += other.local_writes;
    scratch_bytes_peak += other.scratch_bytes_peak;
    scratch_bytes_per_engine = std::max(scratch_bytes_per_engine, other.scratch_bytes_per_engine);
    return *this;
}

std::vector<Slab> partition_domain(const GridDims& dims, std::size_t engines)
{
    if (engines < 1 || engines > dims.nx)
        throw std::invalid_argument("engines must be in 1..nx");
    std::vector<Slab> slabs;
    slabs.reserve(engines);
    const std::size_t base = dims.nx / engines;
    const std::size_t extra = dims.nx % engines;
    std::size_t x = 1;
    for (std::size_t e = 0; e < engines; ++e) {
        const std::size_t width = base + (e < extra ? 1 : 0);
        slabs.push_back({x, x + width});
        x += width;
    }
    return slabs;
}

namespace {

// ---------------------------------------------------------------------------
// Scratch layout. Each input slot holds one (field, dx, dy) neighbour column
// for every column of the current batch.
// ---------------------------------------------------------------------------
enum Slot : int {
    U_C, U_XM, U_XP, U_YM, U_YP, U_XM_YP,
    V_C, V_YM, V_XP_YM, V_XP, V_XM, V_YP,
    W_C, W_XP, W_XM, W_YM, W_YP,
    SU, SV, SW,
};

enum class Which { U, V, W };

struct SlotOffset {
    Which field;
    int dx;
    int dy;
};

constexpr std::array<SlotOffset, kInputArrays> kSlotOffsets{{
    {Which::U, 0, 0}, {Which::U, -1, 0}, {Which::U, 1, 0}, {Which::U, 0, -1}, {Which::U, 0, 1}, {Which::U, -1, 1},
    {Which::V, 0, 0}, {Which::V, 0, -1}, {Which::V, 1, -1}, {Which::V, 1, 0}, {Which::V, -1, 0}, {Which::V, 0, 1},
    {Which::W, 0, 0}, {Which::W, 1, 0}, {Which::W, -1, 0}, {Which::W, 0, -1}, {Which::W, 0, 1},
}};

constexpr int slot_of(Which f, int dx, int dy)
{
    for (int s = 0; s < static_cast<int>(kInputArrays); ++s) {
        const auto& o = kSlotOffsets[static_cast<std::size_t>(s)];
        if (o.field == f && o.dx == dx && o.dy == dy)
            return s;
    }
    return -1;
}

// X-step recycling for XReordered: at the next X step, slot `dst` holds what
// slot `src` holds now. Ordered so no source is overwritten before it is read.
struct Recycle {
    Slot dst;
    Slot src;
};
constexpr std::array<Recycle, 8> kRecycle{{
    {U_XM, U_C}, {U_XM_YP, U_YP}, {U_C, U_XP},
    {V_XM, V_C}, {V_C, V_XP}, {V_YM, V_XP_YM},
    {W_XM, W_C}, {W_C, W_XP},
}};
constexpr std::array<Slot, 9> kRefetch{{U_XP, U_YM, U_YP, V_XP_YM, V_XP, V_YP, W_XP, W_YM, W_YP}};

static_assert(kRecycle.size() + kRefetch.size() == kInputArrays);

constexpr std::array<int, 27> make_slot_table()
{
    std::array<int, 27> table{};
    for (int f = 0; f < 3; ++f)
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy)
                table[static_cast<std::size_t>(f * 9 + (dx + 1) * 3 + (dy + 1))] =
                    slot_of(static_cast<Which>(f), dx, dy);
    return table;
}
constexpr auto kSlotTable = make_slot_table();

class ScratchAccess {
public:
    ScratchAccess(const std::array<double*, kScratchArrays>& slots, std::ptrdiff_t pos)
        : slots_(slots), pos_(pos)
    {
    }

    double u(int di, int dj, int dk) const { return slots_[slot(Which::U, di, dj)][pos_ + dk]; }
    double v(int di, int dj, int dk) const { return slots_[slot(Which::V, di, dj)][pos_ + dk]; }
    double w(int di, int dj, int dk) const { return slots_[slot(Which::W, di, dj)][pos_ + dk]; }

private:
    static std::size_t slot(Which f, int di, int dj)
    {
        return static_cast<std::size_t>(kSlotTable[static_cast<std::size_t>(static_cast<int>(f) * 9 + (di + 1) * 3 + (dj + 1))]);
    }

    const std::array<double*, kScratchArrays>& slots_;
    std::ptrdiff_t pos_;
};

struct SourceViews {
    double* su;
    double* sv;
    double* sw;
};

// Per-column operand load counts for k = 2..nz.
std::uint64_t column_loads(const GridDims& d)
{
    const auto& census = stencil_census();
    return static_cast<std::uint64_t>(census.loads_per_point(false)) * (d.nz - 2) +
           static_cast<std::uint64_t>(census.loads_per_point(true));
}

TrafficReport run_reference_slab(const FieldSet& fields, const AdvectionCoefficients& coeffs,
                                 const Slab& slab, const SourceViews& out)
{
    const GridDims& d = fields.dims();
    TrafficReport t;
    const std::uint64_t loads = column_loads(d);
    for (std::size_t i = slab.x_begin; i < slab.x_end; ++i) {
        for (std::size_t j = 1; j <= d.ny; ++j) {
            for (std::size_t k = 2; k <= d.nz; ++k) {
                const GridAccess at(fields, i, j, k);
                const auto c = coeffs.at_level(k);
                const bool top = k == d.nz;
                const std::size_t idx = linear_index(i, j, k, d);
                out.su[idx] = stencil::source_u(at, c, top);
                out.sv[idx] = stencil::source_v(at, c, top);
                out.sw[idx] = stencil::source_w(at, c, top);
            }
            t.external_reads += loads;
            t.external_writes += 3 * (d.nz - 1);
        }
    }
    return t;
}

class BatchWorker {
public:
    BatchWorker(const FieldSet& fields, const AdvectionCoefficients& coeffs, std::size_t batch,
                const SourceViews& out)
        : fields_(fields), coeffs_(coeffs), dims_(fields.dims()), batch_(batch), out_(out),
          storage_(kScratchArrays * batch * fields.dims().nz, 0.0)
    {
        const std::size_t stride = batch * dims_.nz;
        for (std::size_t s = 0; s < kScratchArrays; ++s)
            slots_[s] = storage_.data() + s * stride;
        traffic_.scratch_bytes_peak = storage_.size() * sizeof(double);
        traffic_.scratch_bytes_per_engine = traffic_.scratch_bytes_peak;
    }

    // ColumnBuffered / YBatched: X outer, Y batches inner, every input array
    // fetched for every batch.
    void run_batched(const Slab& slab)
    {
        for (std::size_t i = slab.x_begin; i < slab.x_end; ++i)
            for (std::size_t jb = 1; jb <= dims_.ny; jb += batch_) {
                const std::size_t cols = std::min(batch_, dims_.ny - jb + 1);
                for (std::size_t s = 0; s < kInputArrays; ++s)
                    fetch(static_cast<Slot>(s), i, jb, cols);
                compute(cols);
                store(i, jb, cols);
            }
    }

    // XReordered: Y batches outer, X inner with plane recycling.
    void run_reordered(const Slab& slab)
    {
        for (std::size_t jb = 1; jb <= dims_.ny; jb += batch_) {
            const std::size_t cols = std::min(batch_, dims_.ny - jb + 1);
            for (std::size_t i = slab.x_begin; i < slab.x_end; ++i) {
                if (i == slab.x_begin) {
                    for (std::size_t s = 0; s < kInputArrays; ++s)
                        fetch(static_cast<Slot>(s), i, jb, cols);
                } else {
                    for (const auto& r : kRecycle)
                        local_copy(r.dst, r.src, cols);
                    for (Slot s : kRefetch)
                        fetch(s, i, jb, cols);
                }
                compute(cols);
                store(i, jb, cols);
            }
        }
    }

    [[nodiscard]] const TrafficReport& traffic() const { return traffic_; }

private:
    const Field3D& field_of(Which f) const
    {
        switch (f) {
        case Which::U: return fields_.u;
        case Which::V: return fields_.v;
        case Which::W: return fields_.w;
        }
        return fields_.u;
    }

    void fetch(Slot s, std::size_t i, std::size_t jb, std::size_t cols)
    {
        const auto& o = kSlotOffsets[static_cast<std::size_t>(s)];
        const Field3D& src = field_of(o.field);
        const std::size_t x = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) + o.dx);
        const std::size_t y = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(jb) + o.dy);
        const std::size_t n = cols * dims_.nz;
        std::memcpy(slots_[s], src.data().data() + linear_index(x, y, 1, dims_), n * sizeof(double));
        traffic_.external_reads += n;
        traffic_.local_writes += n;
    }

    void local_copy(Slot dst, Slot src, std::size_t cols)
    {
        const std::size_t n = cols * dims_.nz;
        std::memcpy(slots_[dst], slots_[src], n * sizeof(double));
        traffic_.local_reads += n;
        traffic_.local_writes += n;
    }

    void compute(std::size_t cols)
    {
        const std::size_t nz = dims_.nz;
        for (std::size_t b = 0; b < cols; ++b) {
            for (std::size_t k = 2; k <= nz; ++k) {
                const auto pos = static_cast<std::ptrdiff_t>(b * nz + (k - 1));
                const ScratchAccess at(slots_, pos);
                const auto c = coeffs_.at_level(k);
                const bool top = k == nz;
                slots_[SU][pos] = stencil::source_u(at, c, top);
                slots_[SV][pos] = stencil::source_v(at, c, top);
                slots_[SW][pos] = stencil::source_w(at, c, top);
            }
            traffic_.local_reads += column_loads(dims_);
            traffic_.local_writes += 3 * (nz - 1);
        }
    }

    void store(std::size_t i, std::size_t jb, std::size_t cols)
    {
        const std::size_t n = cols * dims_.nz;
        const std::size_t dst = linear_index(i, jb, 1, dims_);
        std::memcpy(out_.su + dst, slots_[SU], n * sizeof(double));
        std::memcpy(out_.sv + dst, slots_[SV], n * sizeof(double));
        std::memcpy(out_.sw + dst, slots_[SW], n * sizeof(double));
        traffic_.local_reads += 3 * n;
        traffic_.external_writes += 3 * n;
    }

    const FieldSet& fields_;
    const AdvectionCoefficients& coeffs_;
    GridDims dims_;
    std::size_t batch_;
    SourceViews out_;
    std::vector<double> storage_;
    std::array<double*, kScratchArrays> slots_{};
    TrafficReport traffic_;
};

TrafficReport run_slab(const FieldSet& fields, const AdvectionCoefficients& coeffs,
                       const ScheduleSpec& spec, const Slab& slab, const SourceViews& out)
{
    switch (spec.variant) {
    case Variant::Reference:
        return run_reference_slab(fields, coeffs, slab, out);
    case Variant::ColumnBuffered: {
        BatchWorker w(fields, coeffs, 1, out);
        w.run_batched(slab);
        return w.traffic();
    }
    case Variant::YBatched: {
        BatchWorker w(fields, coeffs, spec.y_batch, out);
        w.run_batched(slab);
        return w.traffic();
    }
    case Variant::XReordered: {
        BatchWorker w(fields, coeffs, spec.y_batch, out);
        w.run_reordered(slab);
        return w.traffic();
    }
    }
    return {};
}

} // namespace

ScheduleResult run_schedule(const FieldSet& fields, const AdvectionCoefficients& coeffs,
                            const ScheduleSpec& spec)
{
    const GridDims& d = fields.dims();
    check_coefficients(coeffs, d);
    check_schedule(spec, d);

    ScheduleResult result{SourceSet(d), {}, 0.0};
    const SourceViews out{result.sources.su.data().data(), result.sources.sv.data().data(),
                          result.sources.sw.data().data()};
    const auto slabs = partition_domain(d, spec.engines);
    std::vector<TrafficReport> per_engine(slabs.size());

    const auto start = std::chrono::steady_clock::now();
    if (slabs.size() == 1) {
        per_engine[0] = run_slab(fields, coeffs, spec, slabs[0], out);
    } else {
        std::vector<std::jthread> workers;
        workers.reserve(slabs.size());
        for (std::size_t e = 0; e < slabs.size(); ++e)
            workers.emplace_back([&, e] { per_engine[e] = run_slab(fields, coeffs, spec, slabs[e], out); });
    }
    const auto stop = std::chrono::steady_clock::now();
    result.wall_seconds = std::chrono::duration<double>(stop - start).count();

    for (const auto& t : per_engine)
        result.traffic += t;
    return result;
}

std::uint64_t ulp_distance(double a, double b)
{
    const auto ba = std::bit_cast<std::uint64_t>(a);
    const auto bb = std::bit_cast<std::uint64_t>(b);
    if (ba == bb)
        return 0;
    if (std::isnan(a) || std::isnan(b))
        return std::numeric_limits<std::uint64_t>::max();
    // Map to a monotone unsigned ordering of the reals.
    constexpr std::uint64_t sign = 1ULL << 63;
    auto ordered = [](std::uint64_t bits) { return (bits & sign) ? sign - (bits & ~sign) : sign + bits; };
    const std::uint64_t oa = ordered(ba);
    const std::uint64_t ob = ordered(bb);
    const std::uint64_t dist = oa > ob ? oa - ob : ob - oa;
    return dist == 0 ? 1 : dist; // +0 and -0 differ in bits
}

Comparison compare_outputs(const SourceSet& a, const SourceSet& b)
{
    if (a.dims() != b.dims())
        throw std::invalid_argument("compare_outputs: dimension mismatch");
    const GridDims& d = a.dims();
    Comparison cmp;
    auto scan = [&](const Field3D& x, const Field3D& y) {
        for (std::size_t i = 1; i <= d.nx; ++i)
            for (std::size_t j = 1; j <= d.ny; ++j)
                for (std::size_t k = 1; k <= d.nz; ++k) {
                    const double p = x(i, j, k);
                    const double q = y(i, j, k);
                    const std::uint64_t ulps = ulp_distance(p, q);
                    if (ulps == 0)
                        continue;
                    cmp.bitwise_equal = false;
                    cmp.max_ulp_diff = std::max(cmp.max_ulp_diff, ulps);
                    const double diff = std::fabs(p - q);
                    if (std::isnan(diff) || diff > cmp.max_abs_diff)
                        cmp.max_abs_diff = std::isnan(diff) ? std::numeric_limits<double>::infinity() : diff;
                }
    };
    scan(a.su, b.su);
    scan(a.sv, b.sv);
    scan(a.sw, b.sw);
    return cmp;
}

} // namespace pwadv
