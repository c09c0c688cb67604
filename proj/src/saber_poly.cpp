#include "scaforge/saber/poly.hpp"

namespace scaforge::saber {

PolyRq poly_mul_schoolbook(const PolyRq& a, const PolyRq& b) {
    PolyRq r;
    for (std::size_t i = 0; i < kN; ++i) {
        const std::uint32_t ai = a.c[i];
        if (ai == 0)
            continue;
        for (std::size_t j = 0; j < kN; ++j) {
            const std::uint16_t prod = static_cast<std::uint16_t>(ai * b.c[j]);
            const std::size_t k = i + j;
            if (k < kN)
                r.c[k] = static_cast<std::uint16_t>(r.c[k] + prod);
            else
                r.c[k - kN] = static_cast<std::uint16_t>(r.c[k - kN] - prod);
        }
    }
    r.normalize();
    return r;
}

void pack_bits(std::span<const std::uint16_t> coeffs, int bits, std::uint8_t* out) {
    const std::size_t out_bytes = coeffs.size() * bits / 8;
    for (std::size_t i = 0; i < out_bytes; ++i)
        out[i] = 0;
    std::size_t bitpos = 0;
    for (const std::uint16_t raw : coeffs) {
        const std::uint32_t v = raw & ((1u << bits) - 1);
        const std::size_t byte = bitpos >> 3;
        const int shift = static_cast<int>(bitpos & 7);
        out[byte] |= static_cast<std::uint8_t>(v << shift);
        if (shift + bits > 8)
            out[byte + 1] |= static_cast<std::uint8_t>(v >> (8 - shift));
        if (shift + bits > 16)
            out[byte + 2] |= static_cast<std::uint8_t>(v >> (16 - shift));
        bitpos += bits;
    }
}

void unpack_bits(const std::uint8_t* in, int bits, std::span<std::uint16_t> coeffs) {
    std::size_t bitpos = 0;
    for (auto& c : coeffs) {
        const std::size_t byte = bitpos >> 3;
        const int shift = static_cast<int>(bitpos & 7);
        std::uint32_t v = static_cast<std::uint32_t>(in[byte]) >> shift;
        if (shift + bits > 8)
            v |= static_cast<std::uint32_t>(in[byte + 1]) << (8 - shift);
        if (shift + bits > 16)
            v |= static_cast<std::uint32_t>(in[byte + 2]) << (16 - shift);
        c = static_cast<std::uint16_t>(v & ((1u << bits) - 1));
        bitpos += bits;
    }
}

void cbd_mu8(PolyRq& s, const std::uint8_t buf[kPolyCoinBytes]) {
    for (std::size_t i = 0; i < kN / 4; ++i) {
        std::uint32_t t = static_cast<std::uint32_t>(buf[4 * i]) |
                          (static_cast<std::uint32_t>(buf[4 * i + 1]) << 8) |
                          (static_cast<std::uint32_t>(buf[4 * i + 2]) << 16) |
                          (static_cast<std::uint32_t>(buf[4 * i + 3]) << 24);
        std::uint32_t d = 0;
        for (int j = 0; j < 4; ++j)
            d += (t >> j) & 0x11111111u;
        for (int k = 0; k < 4; ++k) {
            const std::uint32_t a = (d >> (8 * k)) & 0xf;
            const std::uint32_t b = (d >> (8 * k + 4)) & 0xf;
            s.c[4 * i + k] = static_cast<std::uint16_t>(a - b);
        }
    }
}

} // namespace scaforge::saber
