#pragma once

#include "pwadv/grid.hpp"
#include "pwadv/stencil.hpp"

#include <cstdint>
#include <vector>

namespace pwadv {

/// tcx, tcy are scalars; tzc1 and tzc2 are indexed by level (element k-1 holds
/// level k).
struct AdvectionCoefficients {
    double tcx = 0.25;
    double tcy = 0.25;
    std::vector<double> tzc1;
    std::vector<double> tzc2;

    /// Test defaults: every coefficient 0.25.
    static AdvectionCoefficients uniform(std::size_t nz, double value = 0.25);

    [[nodiscard]] stencil::PointCoefficients<double> at_level(std::size_t k) const
    {
        return {tcx, tcy, tzc1[k - 1], tzc2[k - 1]};
    }
};

/// Throws std::invalid_argument unless tzc1/tzc2 have length nz and every value is finite.
void check_coefficients(const AdvectionCoefficients& coeffs, const GridDims& dims);

/// Nominal floating-point cost per grid cell used for rate reporting.
struct FlopProfile {
    std::int64_t adds_per_cell = 21;
    std::int64_t muls_per_cell = 32;

    [[nodiscard]] std::int64_t total_per_cell() const { return adds_per_cell + muls_per_cell; }
};

/// nx * ny * nz * total_per_cell, using the nominal cell count.
double flops(const GridDims& dims, const FlopProfile& profile);
double flops(double cells, const FlopProfile& profile);

/// Accessor reading operands straight from the full grid arrays.
class GridAccess {
public:
    GridAccess(const FieldSet& fields, std::size_t i, std::size_t j, std::size_t k)
        : u_(fields.u.data().data()),
          v_(fields.v.data().data()),
          w_(fields.w.data().data()),
          sx_(static_cast<std::ptrdiff_t>(fields.dims().padded_y() * fields.dims().nz)),
          sy_(static_cast<std::ptrdiff_t>(fields.dims().nz)),
          base_(static_cast<std::ptrdiff_t>(linear_index(i, j, k, fields.dims())))
    {
    }

    double u(int di, int dj, int dk) const { return u_[offset(di, dj, dk)]; }
    double v(int di, int dj, int dk) const { return v_[offset(di, dj, dk)]; }
    double w(int di, int dj, int dk) const { return w_[offset(di, dj, dk)]; }

private:
    std::ptrdiff_t offset(int di, int dj, int dk) const { return base_ + di * sx_ + dj * sy_ + dk; }

    const double* u_;
    const double* v_;
    const double* w_;
    std::ptrdiff_t sx_, sy_, base_;
};

// Point operations: 1 <= i <= nx, 1 <= j <= ny, 2 <= k <= nz, halos populated.
double advect_point_u(const FieldSet& fields, const AdvectionCoefficients& coeffs,
                      std::size_t i, std::size_t j, std::size_t k);
double advect_point_v(const FieldSet& fields, const AdvectionCoefficients& coeffs,
                      std::size_t i, std::size_t j, std::size_t k);
double advect_point_w(const FieldSet& fields, const AdvectionCoefficients& coeffs,
                      std::size_t i, std::size_t j, std::size_t k);

/// Whole-grid reference execution. Level 1 of every source field is zero.
SourceSet run_reference(const FieldSet& fields, const AdvectionCoefficients& coeffs);

/// Operator census of one formula, obtained by symbolically evaluating it.
struct FormulaCensus {
    stencil::OpCount interior; // 2 <= k < nz
    stencil::OpCount top;      // k == nz
};

struct StencilCensus {
    FormulaCensus u, v, w;

    /// Operand loads for all three formulas at one point.
    [[nodiscard]] std::int64_t loads_per_point(bool top) const
    {
        return top ? u.top.loads + v.top.loads + w.top.loads
                   : u.interior.loads + v.interior.loads + w.interior.loads;
    }
};

const StencilCensus& stencil_census();

} // namespace pwadv
