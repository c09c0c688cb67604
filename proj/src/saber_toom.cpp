#include "scaforge/saber/toom.hpp"

#include "scaforge/error.hpp"

namespace scaforge::saber {

namespace {

constexpr std::uint16_t kInv3 = 43691;  // 3 * 43691 = 1 mod 2^16
constexpr std::uint16_t kInv15 = 61167; // 15 * 61167 = 1 mod 2^16

constexpr std::uint64_t kEvalWords = kToomPoints * kSubN; // 448
constexpr std::uint64_t kPolyWords = kN;                  // 256

inline std::uint16_t u16(std::uint32_t v) {
    return static_cast<std::uint16_t>(v);
}

// Negacyclic 64-point schoolbook: dst (+)= a * b mod (y^64 + 1), mod 2^16.
void negacyclic64_mul_acc(Limb& dst, const Limb& a, const Limb& b) {
    for (std::size_t i = 0; i < kSubN; ++i) {
        const std::uint32_t ai = a[i];
        for (std::size_t j = 0; j < kSubN; ++j) {
            const std::uint16_t prod = u16(ai * b[j]);
            const std::size_t k = i + j;
            if (k < kSubN)
                dst[k] = u16(dst[k] + prod);
            else
                dst[k - kSubN] = u16(dst[k - kSubN] - prod);
        }
    }
}

// Integer functional for one outer coefficient: K * c_k = sum(lambda_i * v_i)
// over the seven slots, with K = 2^shift * odd.
struct InterpFunctional {
    std::array<std::int32_t, kToomPoints> lambda;
    std::uint16_t odd_inverse;
    int shift;
};

// Derived for points {0, 1, -1, 2, -2, 3, inf}; every path loses at most
// the 3 guard bits, so results are exact mod 2^13.
constexpr InterpFunctional kFunc1 = {{-20, 60, -30, -15, 3, 2, -720}, kInv15, 2};  // K = 60
constexpr InterpFunctional kFunc2 = {{-30, 16, 16, -1, -1, 0, 96}, kInv3, 3};      // K = 24
constexpr InterpFunctional kFunc3 = {{10, -14, -1, 7, -1, -1, 360}, kInv3, 3};     // K = 24
constexpr InterpFunctional kFunc4 = {{6, -4, -4, 1, 1, 0, -120}, kInv3, 3};        // K = 24
constexpr InterpFunctional kFunc5 = {{-10, 10, 5, -5, -1, 1, -360}, kInv15, 3};    // K = 120

void apply_functional(const PolyEval& acc, const InterpFunctional& f, Limb& out) {
    for (std::size_t t = 0; t < kSubN; ++t) {
        std::uint32_t combo = 0;
        for (std::size_t p = 0; p < kToomPoints; ++p)
            combo += static_cast<std::uint32_t>(f.lambda[p]) * acc.slot[p][t];
        const std::uint16_t v = u16(combo * f.odd_inverse);
        if (v & ((1u << f.shift) - 1))
            throw InterpolationOverflow("toom4_interpolate: inexact power-of-two division");
        out[t] = static_cast<std::uint16_t>(v >> f.shift);
    }
}

} // namespace

Limbs striding_split(const PolyRq& a) {
    Limbs limbs{};
    for (std::size_t t = 0; t < kSubN; ++t)
        for (std::size_t i = 0; i < 4; ++i)
            limbs[i][t] = a.c[4 * t + i];
    return limbs;
}

PolyRq striding_join(const Limbs& limbs) {
    PolyRq a;
    for (std::size_t t = 0; t < kSubN; ++t)
        for (std::size_t i = 0; i < 4; ++i)
            a.c[4 * t + i] = limbs[i][t];
    return a;
}

PolyEval toom4_evaluate(const Limbs& limbs) {
    PolyEval e;
    for (std::size_t t = 0; t < kSubN; ++t) {
        const std::uint32_t a0 = limbs[0][t], a1 = limbs[1][t], a2 = limbs[2][t],
                            a3 = limbs[3][t];
        e.slot[0][t] = u16(a0);
        e.slot[1][t] = u16(a0 + a1 + a2 + a3);
        e.slot[2][t] = u16(a0 - a1 + a2 - a3);
        e.slot[3][t] = u16(a0 + 2 * a1 + 4 * a2 + 8 * a3);
        e.slot[4][t] = u16(a0 - 2 * a1 + 4 * a2 - 8 * a3);
        e.slot[5][t] = u16(a0 + 3 * a1 + 9 * a2 + 27 * a3);
        e.slot[6][t] = u16(a3);
    }
    return e;
}

PolyEval eval_pointwise_mul(const PolyEval& ea, const PolyEval& eb, MemoryMeter* meter) {
    PolyEval prod;
    for (std::size_t p = 0; p < kToomPoints; ++p)
        negacyclic64_mul_acc(prod.slot[p], ea.slot[p], eb.slot[p]);
    if (meter) {
        meter->count_pointwise(kToomPoints);
        meter->count_mults(kToomPoints * kSubN * kSubN);
    }
    return prod;
}

void eval_accumulate(PolyEval& acc, const PolyEval& prod) {
    for (std::size_t p = 0; p < kToomPoints; ++p)
        for (std::size_t t = 0; t < kSubN; ++t)
            acc.slot[p][t] = u16(acc.slot[p][t] + prod.slot[p][t]);
}

void eval_pointwise_mul_acc(PolyEval& acc, const PolyEval& ea, const PolyEval& eb,
                            MemoryMeter* meter) {
    for (std::size_t p = 0; p < kToomPoints; ++p)
        negacyclic64_mul_acc(acc.slot[p], ea.slot[p], eb.slot[p]);
    if (meter) {
        meter->count_pointwise(kToomPoints);
        meter->count_mults(kToomPoints * kSubN * kSubN);
    }
}

PolyRq toom4_interpolate(const PolyEval& acc, MemoryMeter* meter) {
    // Outer product limbs C_0..C_6.
    std::array<Limb, 7> c{};
    c[0] = acc.slot[0];
    c[6] = acc.slot[6];
    apply_functional(acc, kFunc1, c[1]);
    apply_functional(acc, kFunc2, c[2]);
    apply_functional(acc, kFunc3, c[3]);
    apply_functional(acc, kFunc4, c[4]);
    apply_functional(acc, kFunc5, c[5]);

    // Recombine with x^4 = y, y^64 = -1: out_r = C_r + y * C_{r+4}.
    PolyRq r;
    for (std::size_t out_limb = 0; out_limb < 4; ++out_limb) {
        for (std::size_t t = 0; t < kSubN; ++t) {
            std::uint16_t v = c[out_limb][t];
            if (out_limb < 3) {
                const Limb& hi = c[out_limb + 4];
                v = t == 0 ? u16(v - hi[kSubN - 1]) : u16(v + hi[t - 1]);
            }
            r.c[4 * t + out_limb] = v & kQMask;
        }
    }
    if (meter)
        meter->count_interpolation();
    return r;
}

PolyRq toom_mul(const PolyRq& a, const PolyRq& b, MemoryMeter* meter) {
    const PolyEval ea = toom4_evaluate(striding_split(a));
    const PolyEval eb = toom4_evaluate(striding_split(b));
    if (meter) {
        meter->count_eval_words(2 * kEvalWords);
        meter->alloc(kEvalWords); // product buffer
    }
    PolyEval prod = eval_pointwise_mul(ea, eb, meter);
    PolyRq r = toom4_interpolate(prod, meter);
    if (meter)
        meter->release(kEvalWords);
    return r;
}

PolyVec matvec_mul_lazy(const PolyMat& a, const PolyVec& s, bool transpose, MemoryMeter& meter) {
    // Operand evaluations: each s_j once (cached), each A_ij once on the fly.
    std::array<PolyEval, kL> es;
    for (std::size_t j = 0; j < kL; ++j) {
        es[j] = toom4_evaluate(striding_split(s[j]));
        meter.count_eval_words(kEvalWords);
    }

    PolyVec out;
    for (std::size_t i = 0; i < kL; ++i) {
        meter.alloc(kEvalWords); // row accumulator
        PolyEval acc;
        for (std::size_t j = 0; j < kL; ++j) {
            const PolyRq& entry = transpose ? a[j][i] : a[i][j];
            const PolyEval ea = toom4_evaluate(striding_split(entry));
            meter.count_eval_words(kEvalWords);
            eval_pointwise_mul_acc(acc, ea, es[j], &meter);
        }
        out[i] = toom4_interpolate(acc, &meter);
        meter.release(kEvalWords);
    }
    return out;
}

PolyVec matvec_mul_eager(const PolyMat& a, const PolyVec& s, bool transpose, MemoryMeter& meter) {
    PolyVec out;
    for (std::size_t i = 0; i < kL; ++i) {
        meter.alloc(kPolyWords); // R_q row accumulator
        PolyRq acc;
        for (std::size_t j = 0; j < kL; ++j) {
            const PolyRq& entry = transpose ? a[j][i] : a[i][j];
            const PolyEval ea = toom4_evaluate(striding_split(entry));
            const PolyEval eb = toom4_evaluate(striding_split(s[j]));
            meter.count_eval_words(2 * kEvalWords);
            meter.alloc(kEvalWords); // materialized product
            const PolyEval prod = eval_pointwise_mul(ea, eb, &meter);
            meter.alloc(kPolyWords); // interpolated intermediate
            const PolyRq term = toom4_interpolate(prod, &meter);
            meter.release(kEvalWords);
            for (std::size_t t = 0; t < kN; ++t)
                acc.c[t] = static_cast<std::uint16_t>(acc.c[t] + term.c[t]) & kQMask;
            meter.release(kPolyWords);
        }
        out[i] = acc;
        meter.release(kPolyWords);
    }
    return out;
}

PolyRq inner_prod_lazy(const PolyVec& b, const PolyVec& s, MemoryMeter& meter) {
    meter.alloc(kEvalWords);
    PolyEval acc;
    for (std::size_t j = 0; j < kL; ++j) {
        const PolyEval eb = toom4_evaluate(striding_split(b[j]));
        const PolyEval es = toom4_evaluate(striding_split(s[j]));
        meter.count_eval_words(2 * kEvalWords);
        eval_pointwise_mul_acc(acc, eb, es, &meter);
    }
    PolyRq r = toom4_interpolate(acc, &meter);
    meter.release(kEvalWords);
    return r;
}

} // namespace scaforge::saber
