#include "pwadv/grid.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

namespace pwadv {

GridDims make_grid(std::size_t nx, std::size_t ny, std::size_t nz)
{
    if (nx == 0 || ny == 0 || nz == 0)
        throw std::invalid_argument("grid extents must be non-zero");
    if (nz < 2)
        throw std::invalid_argument("nz must be at least 2: the stencil starts at the second level");
    return GridDims{nx, ny, nz, 1};
}

std::size_t checked_linear_index(std::size_t i, std::size_t j, std::size_t k, const GridDims& dims)
{
    if (i >= dims.padded_x() || j >= dims.padded_y() || k < 1 || k > dims.nz)
        throw std::out_of_range("grid index (" + std::to_string(i) + ", " + std::to_string(j) + ", " +
                                std::to_string(k) + ") outside padded extents");
    return linear_index(i, j, k, dims);
}

Field3D::Field3D(const GridDims& dims) : dims_(dims), data_(dims.padded_len(), 0.0) {}

void Field3D::wrap_halos()
{
    const std::size_t nx = dims_.nx;
    const std::size_t ny = dims_.ny;
    const std::size_t nz = dims_.nz;
    if (data_.empty())
        return;

    // Y halos of the interior planes, then whole X halo planes (which also
    // carries the corners).
    for (std::size_t i = 1; i <= nx; ++i) {
        for (std::size_t k = 1; k <= nz; ++k) {
            data_[linear_index(i, 0, k, dims_)] = data_[linear_index(i, ny, k, dims_)];
            data_[linear_index(i, ny + 1, k, dims_)] = data_[linear_index(i, 1, k, dims_)];
        }
    }
    const std::size_t plane = dims_.padded_y() * nz;
    auto plane_at = [&](std::size_t i) { return data_.begin() + static_cast<std::ptrdiff_t>(i * plane); };
    std::copy(plane_at(nx), plane_at(nx) + static_cast<std::ptrdiff_t>(plane), plane_at(0));
    std::copy(plane_at(1), plane_at(1) + static_cast<std::ptrdiff_t>(plane), plane_at(nx + 1));
}

namespace {

// Sine from basic IEEE operations only, so trig fields do not depend on the
// platform libm. Accurate to ~1e-9, which is plenty for test data.
double portable_sin(double x)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    x -= two_pi * std::nearbyint(x / two_pi);
    const double x2 = x * x;
    double term = x;
    double sum = x;
    for (int n = 1; n <= 11; ++n) {
        term = -term * x2 / static_cast<double>((2 * n) * (2 * n + 1));
        sum += term;
    }
    return sum;
}

double portable_cos(double x) { return portable_sin(x + 0.5 * std::numbers::pi); }

template <class Fn>
void fill_interior(Field3D& f, Fn&& value)
{
    const GridDims& d = f.dims();
    for (std::size_t i = 1; i <= d.nx; ++i)
        for (std::size_t j = 1; j <= d.ny; ++j)
            for (std::size_t k = 1; k <= d.nz; ++k)
                f(i, j, k) = value(i, j, k);
}

} // namespace

FieldSet fill_fields(const GridDims& dims, const GeneratorSpec& spec)
{
    FieldSet fs(dims);
    if (const auto* uni = std::get_if<UniformFill>(&spec)) {
        std::fill(fs.u.data().begin(), fs.u.data().end(), uni->u);
        std::fill(fs.v.data().begin(), fs.v.data().end(), uni->v);
        std::fill(fs.w.data().begin(), fs.w.data().end(), uni->w);
        return fs;
    }
    if (const auto* rnd = std::get_if<RandomFill>(&spec)) {
        Lcg64 rng(rnd->seed);
        auto draw = [&](std::size_t, std::size_t, std::size_t) { return 2.0 * rng.next_unit() - 1.0; };
        fill_interior(fs.u, draw);
        fill_interior(fs.v, draw);
        fill_interior(fs.w, draw);
    } else {
        constexpr double two_pi = 2.0 * std::numbers::pi;
        auto theta_x = [&](std::size_t i) { return two_pi * static_cast<double>(i - 1) / static_cast<double>(dims.nx); };
        auto theta_y = [&](std::size_t j) { return two_pi * static_cast<double>(j - 1) / static_cast<double>(dims.ny); };
        auto level = [](std::size_t k) { return 0.01 * static_cast<double>(k); };
        fill_interior(fs.u, [&](std::size_t i, std::size_t j, std::size_t k) {
            return portable_sin(theta_x(i)) * portable_cos(theta_y(j)) + level(k);
        });
        fill_interior(fs.v, [&](std::size_t i, std::size_t j, std::size_t k) {
            return portable_cos(theta_x(i)) * portable_sin(theta_y(j)) - level(k);
        });
        fill_interior(fs.w, [&](std::size_t i, std::size_t j, std::size_t k) {
            return 0.1 * portable_sin(theta_x(i) + theta_y(j)) * level(k);
        });
    }
    fs.u.wrap_halos();
    fs.v.wrap_halos();
    fs.w.wrap_halos();
    return fs;
}

void Fnv1a64::update(double value)
{
    const auto bits = std::bit_cast<std::uint64_t>(value);
    for (int b = 0; b < 8; ++b) {
        hash_ ^= (bits >> (8 * b)) & 0xffU;
        hash_ *= 0x100000001b3ULL;
    }
}

namespace {

void hash_interior(Fnv1a64& h, const Field3D& f)
{
    const GridDims& d = f.dims();
    const auto data = f.data();
    for (std::size_t i = 1; i <= d.nx; ++i)
        for (std::size_t j = 1; j <= d.ny; ++j) {
            const std::size_t base = linear_index(i, j, 1, d);
            for (std::size_t k = 0; k < d.nz; ++k)
                h.update(data[base + k]);
        }
}

} // namespace

std::uint64_t checksum(const Field3D& field)
{
    Fnv1a64 h;
    hash_interior(h, field);
    return h.digest();
}

std::uint64_t checksum(const FieldSet& fields)
{
    Fnv1a64 h;
    hash_interior(h, fields.u);
    hash_interior(h, fields.v);
    hash_interior(h, fields.w);
    return h.digest();
}

std::uint64_t checksum(const SourceSet& sources)
{
    Fnv1a64 h;
    hash_interior(h, sources.su);
    hash_interior(h, sources.sv);
    hash_interior(h, sources.sw);
    return h.digest();
}

namespace {

void put_u64(std::ostream& out, std::uint64_t v)
{
    std::array<char, 8> bytes{};
    for (int b = 0; b < 8; ++b)
        bytes[static_cast<std::size_t>(b)] = static_cast<char>((v >> (8 * b)) & 0xffU);
    out.write(bytes.data(), bytes.size());
}

std::uint64_t get_u64(std::istream& in)
{
    std::array<unsigned char, 8> bytes{};
    if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size()))
        throw std::runtime_error("truncated field stream");
    std::uint64_t v = 0;
    for (int b = 7; b >= 0; --b)
        v = (v << 8) | bytes[static_cast<std::size_t>(b)];
    return v;
}

} // namespace

void write_field(std::ostream& out, const Field3D& field)
{
    const GridDims& d = field.dims();
    put_u64(out, d.nx);
    put_u64(out, d.ny);
    put_u64(out, d.nz);
    for (double value : field.data())
        put_u64(out, std::bit_cast<std::uint64_t>(value));
    if (!out)
        throw std::runtime_error("failed writing field stream");
}

Field3D read_field(std::istream& in)
{
    const auto nx = get_u64(in);
    const auto ny = get_u64(in);
    const auto nz = get_u64(in);
    Field3D field(make_grid(nx, ny, nz));
    for (double& value : field.data())
        value = std::bit_cast<double>(get_u64(in));
    return field;
}

} // namespace pwadv
