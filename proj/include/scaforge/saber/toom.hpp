#pragma once

#include "scaforge/saber/meter.hpp"
#include "scaforge/saber/poly.hpp"

namespace scaforge::saber {

inline constexpr std::size_t kSubN = kN / 4;     // 64 coefficients per limb
inline constexpr std::size_t kToomPoints = 7;    // {0, 1, -1, 2, -2, 3, inf}

/// Stride-4 limb: A(x) = sum_i x^i A_i(y), y = x^4, in Z[y]/(y^64 + 1).
using Limb = std::array<std::uint16_t, kSubN>;
using Limbs = std::array<Limb, 4>;

/// The four outer-polynomial coefficients evaluated at the seven Toom
/// points, slot-wise over the 64-coefficient subring, mod 2^16.
struct PolyEval {
    std::array<Limb, kToomPoints> slot{};

    bool operator==(const PolyEval&) const = default;
};

/// limb_i[t] = a[4t + i].
Limbs striding_split(const PolyRq& a);

/// Inverse of striding_split.
PolyRq striding_join(const Limbs& limbs);

/// Evaluates the degree-3 outer polynomial at {0, 1, -1, 2, -2, 3, inf}.
PolyEval toom4_evaluate(const Limbs& limbs);

/// Slot-wise negacyclic 64-coefficient product mod 2^16 (schoolbook inner
/// loops). Counts 7 pointwise products on the meter.
PolyEval eval_pointwise_mul(const PolyEval& ea, const PolyEval& eb, MemoryMeter* meter = nullptr);

/// Slot-wise, coefficient-wise addition mod 2^16.
void eval_accumulate(PolyEval& acc, const PolyEval& prod);

/// Fused multiply-accumulate: acc += ea * eb slot-wise without
/// materializing the product (the lazy pipeline's inner step).
void eval_pointwise_mul_acc(PolyEval& acc, const PolyEval& ea, const PolyEval& eb,
                            MemoryMeter* meter = nullptr);

/// Recovers the seven outer product limbs by exact integer-functional
/// interpolation mod 2^16 (odd factors via modular inverse, powers of two
/// via checked right shifts), recombines with x^4 = y, reduces mod q.
/// Throws InterpolationOverflow if an exact division check fails.
PolyRq toom4_interpolate(const PolyEval& acc, MemoryMeter* meter = nullptr);

/// Full striding pipeline for a single product.
PolyRq toom_mul(const PolyRq& a, const PolyRq& b, MemoryMeter* meter = nullptr);

/// b = A * s (or A^T * s) with lazy interpolation: s evaluated once per
/// entry, 7-slot products accumulated across the row, one interpolation per
/// output polynomial (l total).
PolyVec matvec_mul_lazy(const PolyMat& a, const PolyVec& s, bool transpose, MemoryMeter& meter);

/// Same result, interpolating every product (l^2 interpolations); the
/// ablation baseline for the bench comparison.
PolyVec matvec_mul_eager(const PolyMat& a, const PolyVec& s, bool transpose, MemoryMeter& meter);

/// Inner product b . s with a single interpolation.
PolyRq inner_prod_lazy(const PolyVec& b, const PolyVec& s, MemoryMeter& meter);

} // namespace scaforge::saber
