#pragma once

// Per-point Piacsek-Williams source-term formulas, written once and shared by
// every execution schedule. The formulas are generic over a neighbourhood
// accessor so the same expression tree can be evaluated on full grid arrays,
// on local scratch buffers, or symbolically (see OpCensus) to count operators.
//
// An accessor provides u(di, dj, dk), v(...), w(...) returning the value at
// offset (di, dj, dk) from the current point, in (i, j, k) order.
//
// Evaluation order is fixed: X term, then + Y term, then + Z term, with the
// inner parenthesisation of the Fortran original. Any schedule that feeds the
// same operand values therefore produces bit-identical results.

#include <cstdint>

namespace pwadv::stencil {

template <class Real>
struct PointCoefficients {
    Real tcx;
    Real tcy;
    Real tzc1;
    Real tzc2;
};

template <class Nb, class Real>
Real source_u(const Nb& at, const PointCoefficients<Real>& c, bool top)
{
    Real s = c.tcx * (at.u(-1, 0, 0) * (at.u(0, 0, 0) + at.u(-1, 0, 0)) -
                      at.u(1, 0, 0) * (at.u(0, 0, 0) + at.u(1, 0, 0)));
    s = s + c.tcy * (at.u(0, -1, 0) * (at.v(0, -1, 0) + at.v(1, -1, 0)) -
                     at.u(0, 1, 0) * (at.v(0, 0, 0) + at.v(1, 0, 0)));
    if (!top)
        s = s + c.tzc1 * at.u(0, 0, -1) * (at.w(0, 0, -1) + at.w(1, 0, -1)) -
            c.tzc2 * at.u(0, 0, 1) * (at.w(0, 0, 0) + at.w(1, 0, 0));
    else
        s = s + c.tzc1 * at.u(0, 0, -1) * (at.w(0, 0, -1) + at.w(1, 0, -1));
    return s;
}

// v sits on the Y faces: self-advection in Y, the cross term carries u
// interpolated to (j, j+1), the vertical term carries w at (j, j+1).
template <class Nb, class Real>
Real source_v(const Nb& at, const PointCoefficients<Real>& c, bool top)
{
    Real s = c.tcx * (at.v(-1, 0, 0) * (at.u(-1, 0, 0) + at.u(-1, 1, 0)) -
                      at.v(1, 0, 0) * (at.u(0, 0, 0) + at.u(0, 1, 0)));
    s = s + c.tcy * (at.v(0, -1, 0) * (at.v(0, 0, 0) + at.v(0, -1, 0)) -
                     at.v(0, 1, 0) * (at.v(0, 0, 0) + at.v(0, 1, 0)));
    if (!top)
        s = s + c.tzc1 * at.v(0, 0, -1) * (at.w(0, 0, -1) + at.w(0, 1, -1)) -
            c.tzc2 * at.v(0, 0, 1) * (at.w(0, 0, 0) + at.w(0, 1, 0));
    else
        s = s + c.tzc1 * at.v(0, 0, -1) * (at.w(0, 0, -1) + at.w(0, 1, -1));
    return s;
}

// w sits on the lower Z faces: horizontal cross terms carry u and v
// interpolated to (k-1, k), the vertical term is self-advection.
template <class Nb, class Real>
Real source_w(const Nb& at, const PointCoefficients<Real>& c, bool top)
{
    Real s = c.tcx * (at.w(-1, 0, 0) * (at.u(-1, 0, -1) + at.u(-1, 0, 0)) -
                      at.w(1, 0, 0) * (at.u(0, 0, -1) + at.u(0, 0, 0)));
    s = s + c.tcy * (at.w(0, -1, 0) * (at.v(0, -1, -1) + at.v(0, -1, 0)) -
                     at.w(0, 1, 0) * (at.v(0, 0, -1) + at.v(0, 0, 0)));
    if (!top)
        s = s + c.tzc1 * at.w(0, 0, -1) * (at.w(0, 0, 0) + at.w(0, 0, -1)) -
            c.tzc2 * at.w(0, 0, 1) * (at.w(0, 0, 0) + at.w(0, 0, 1));
    else
        s = s + c.tzc1 * at.w(0, 0, -1) * (at.w(0, 0, 0) + at.w(0, 0, -1));
    return s;
}

// ---------------------------------------------------------------------------
// Symbolic evaluation: every node of the expression tree adds its own
// operator to the counts of its operands, so evaluating a formula on Counted
// values walks the tree and tallies additions, multiplications and operand
// loads.
// ---------------------------------------------------------------------------
struct OpCount {
    std::int64_t adds = 0;
    std::int64_t muls = 0;
    std::int64_t loads = 0;

    friend bool operator==(const OpCount&, const OpCount&) = default;
};

struct Counted {
    OpCount n;

    static Counted load() { return Counted{{0, 0, 1}}; }
    static Counted constant() { return Counted{}; }
};

inline Counted combine(const Counted& a, const Counted& b, bool is_mul)
{
    Counted r;
    r.n.adds = a.n.adds + b.n.adds + (is_mul ? 0 : 1);
    r.n.muls = a.n.muls + b.n.muls + (is_mul ? 1 : 0);
    r.n.loads = a.n.loads + b.n.loads;
    return r;
}

inline Counted operator+(const Counted& a, const Counted& b) { return combine(a, b, false); }
inline Counted operator-(const Counted& a, const Counted& b) { return combine(a, b, false); }
inline Counted operator*(const Counted& a, const Counted& b) { return combine(a, b, true); }

struct CountingAccess {
    Counted u(int, int, int) const { return Counted::load(); }
    Counted v(int, int, int) const { return Counted::load(); }
    Counted w(int, int, int) const { return Counted::load(); }
};

} // namespace pwadv::stencil
