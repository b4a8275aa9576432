#include "pwadv/advection.hpp"

#include <cmath>
#include <stdexcept>

namespace pwadv {

AdvectionCoefficients AdvectionCoefficients::uniform(std::size_t nz, double value)
{
    AdvectionCoefficients c;
    c.tcx = value;
    c.tcy = value;
    c.tzc1.assign(nz, value);
    c.tzc2.assign(nz, value);
    return c;
}

void check_coefficients(const AdvectionCoefficients& coeffs, const GridDims& dims)
{
    if (coeffs.tzc1.size() != dims.nz || coeffs.tzc2.size() != dims.nz)
        throw std::invalid_argument("tzc1/tzc2 length must equal nz");
    auto finite = [](double x) { return std::isfinite(x); };
    bool ok = finite(coeffs.tcx) && finite(coeffs.tcy);
    for (std::size_t k = 0; k < dims.nz; ++k)
        ok = ok && finite(coeffs.tzc1[k]) && finite(coeffs.tzc2[k]);
    if (!ok)
        throw std::invalid_argument("advection coefficients must be finite");
}

double flops(const GridDims& dims, const FlopProfile& profile)
{
    return flops(static_cast<double>(dims.interior_cells()), profile);
}

double flops(double cells, const FlopProfile& profile)
{
    return cells * static_cast<double>(profile.total_per_cell());
}

double advect_point_u(const FieldSet& fields, const AdvectionCoefficients& coeffs,
                      std::size_t i, std::size_t j, std::size_t k)
{
    return stencil::source_u(GridAccess(fields, i, j, k), coeffs.at_level(k), k == fields.dims().nz);
}

double advect_point_v(const FieldSet& fields, const AdvectionCoefficients& coeffs,
                      std::size_t i, std::size_t j, std::size_t k)
{
    return stencil::source_v(GridAccess(fields, i, j, k), coeffs.at_level(k), k == fields.dims().nz);
}

double advect_point_w(const FieldSet& fields, const AdvectionCoefficients& coeffs,
                      std::size_t i, std::size_t j, std::size_t k)
{
    return stencil::source_w(GridAccess(fields, i, j, k), coeffs.at_level(k), k == fields.dims().nz);
}

SourceSet run_reference(const FieldSet& fields, const AdvectionCoefficients& coeffs)
{
    const GridDims& d = fields.dims();
    check_coefficients(coeffs, d);
    SourceSet out(d);
    auto su = out.su.data();
    auto sv = out.sv.data();
    auto sw = out.sw.data();
    for (std::size_t i = 1; i <= d.nx; ++i) {
        for (std::size_t j = 1; j <= d.ny; ++j) {
            for (std::size_t k = 2; k <= d.nz; ++k) {
                const GridAccess at(fields, i, j, k);
                const auto c = coeffs.at_level(k);
                const bool top = k == d.nz;
                const std::size_t idx = linear_index(i, j, k, d);
                su[idx] = stencil::source_u(at, c, top);
                sv[idx] = stencil::source_v(at, c, top);
                sw[idx] = stencil::source_w(at, c, top);
            }
        }
    }
    return out;
}

namespace {

template <class Formula>
FormulaCensus census_of(Formula formula)
{
    const stencil::CountingAccess at;
    const stencil::PointCoefficients<stencil::Counted> c{
        stencil::Counted::constant(), stencil::Counted::constant(),
        stencil::Counted::constant(), stencil::Counted::constant()};
    return {formula(at, c, false).n, formula(at, c, true).n};
}

} // namespace

const StencilCensus& stencil_census()
{
    using stencil::CountingAccess;
    using stencil::Counted;
    using stencil::PointCoefficients;
    static const StencilCensus census{
        census_of([](const CountingAccess& a, const PointCoefficients<Counted>& c, bool top) {
            return stencil::source_u(a, c, top);
        }),
        census_of([](const CountingAccess& a, const PointCoefficients<Counted>& c, bool top) {
            return stencil::source_v(a, c, top);
        }),
        census_of([](const CountingAccess& a, const PointCoefficients<Counted>& c, bool top) {
            return stencil::source_w(a, c, top);
        }),
    };
    return census;
}

} // namespace pwadv
