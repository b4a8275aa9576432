#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

namespace pwadv {

// ---------------------------------------------------------------------------
// Grid geometry.
//
// Interior indices are 1-based: i in 1..nx, j in 1..ny, k in 1..nz. A halo of
// width one surrounds the interior in X and Y (indices 0 and n+1); there is no
// halo in Z. Storage is k-fastest, so a vertical column is contiguous.
// ---------------------------------------------------------------------------
struct GridDims {
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::size_t nz = 0;
    std::size_t halo = 1;

    [[nodiscard]] std::size_t interior_cells() const { return nx * ny * nz; }
    [[nodiscard]] std::size_t padded_x() const { return nx + 2 * halo; }
    [[nodiscard]] std::size_t padded_y() const { return ny + 2 * halo; }
    [[nodiscard]] std::size_t padded_len() const { return padded_x() * padded_y() * nz; }

    friend bool operator==(const GridDims&, const GridDims&) = default;
};

/// Validated constructor: nx, ny >= 1 and nz >= 2. Throws std::invalid_argument.
GridDims make_grid(std::size_t nx, std::size_t ny, std::size_t nz);

/// Offset of (i, j, k) in the padded k-fastest array:
/// (i * (ny + 2) + j) * nz + (k - 1).
inline std::size_t linear_index(std::size_t i, std::size_t j, std::size_t k, const GridDims& dims)
{
    return (i * dims.padded_y() + j) * dims.nz + (k - 1);
}

/// Same as linear_index but rejects indices outside the padded box.
std::size_t checked_linear_index(std::size_t i, std::size_t j, std::size_t k, const GridDims& dims);

class Field3D {
public:
    Field3D() = default;
    explicit Field3D(const GridDims& dims);

    [[nodiscard]] const GridDims& dims() const { return dims_; }

    double& operator()(std::size_t i, std::size_t j, std::size_t k)
    {
        return data_[index(i, j, k)];
    }
    double operator()(std::size_t i, std::size_t j, std::size_t k) const
    {
        return data_[index(i, j, k)];
    }

    [[nodiscard]] std::span<double> data() { return data_; }
    [[nodiscard]] std::span<const double> data() const { return data_; }

    /// Fill the X and Y halos with the periodic wrap of the interior.
    void wrap_halos();

    friend bool operator==(const Field3D&, const Field3D&) = default;

private:
    std::size_t index(std::size_t i, std::size_t j, std::size_t k) const
    {
#ifndef NDEBUG
        return checked_linear_index(i, j, k, dims_);
#else
        return linear_index(i, j, k, dims_);
#endif
    }

    GridDims dims_;
    std::vector<double> data_;
};

/// The three prognostic wind fields.
struct FieldSet {
    Field3D u, v, w;

    explicit FieldSet(const GridDims& dims) : u(dims), v(dims), w(dims) {}
    [[nodiscard]] const GridDims& dims() const { return u.dims(); }
};

/// Advection source terms for u, v and w.
struct SourceSet {
    Field3D su, sv, sw;

    explicit SourceSet(const GridDims& dims) : su(dims), sv(dims), sw(dims) {}
    [[nodiscard]] const GridDims& dims() const { return su.dims(); }
};

// ---------------------------------------------------------------------------
// Deterministic field generation.
// ---------------------------------------------------------------------------
struct UniformFill {
    double u = 0.0, v = 0.0, w = 0.0;
};

/// Smooth periodic fields built from a portable sine approximation.
struct TrigFill {};

/// Uniform values in [-1, 1) from a 64-bit LCG (see Lcg64). The interior of
/// u is filled first in (i, j, k) loop order, then v, then w.
struct RandomFill {
    std::uint64_t seed = 0;
};

using GeneratorSpec = std::variant<UniformFill, TrigFill, RandomFill>;

/// Knuth's MMIX linear congruential generator. The top 53 bits of the state
/// form the mantissa of each draw, so output is identical on every platform.
class Lcg64 {
public:
    explicit Lcg64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next()
    {
        state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
        return state_;
    }
    /// Uniform in [0, 1).
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

FieldSet fill_fields(const GridDims& dims, const GeneratorSpec& spec);

// ---------------------------------------------------------------------------
// Checksums: 64-bit FNV-1a over the little-endian bytes of the interior cells
// in index order.
// ---------------------------------------------------------------------------
class Fnv1a64 {
public:
    void update(double value);
    [[nodiscard]] std::uint64_t digest() const { return hash_; }

private:
    std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

std::uint64_t checksum(const Field3D& field);
std::uint64_t checksum(const FieldSet& fields);
std::uint64_t checksum(const SourceSet& sources);

// ---------------------------------------------------------------------------
// Raw serialization: 24-byte header (nx, ny, nz as little-endian uint64)
// followed by the padded array as little-endian doubles in index order.
// ---------------------------------------------------------------------------
void write_field(std::ostream& out, const Field3D& field);
Field3D read_field(std::istream& in);

} // namespace pwadv
