#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "scaforge/saber/params.hpp"

namespace scaforge::saber {

/// Ring element of R_q = Z_q[x]/(x^256 + 1), q = 2^13. Arithmetic rides in
/// the full 16-bit word; normalize() masks back to 13 bits. Centered small
/// secrets are carried as 16-bit two's-complement residues, which the mod-q
/// pipeline absorbs (everything downstream is linear mod 2^16).
struct PolyRq {
    std::array<std::uint16_t, kN> c{};

    void normalize() {
        for (auto& v : c)
            v &= kQMask;
    }

    bool operator==(const PolyRq&) const = default;
};

using PolyVec = std::array<PolyRq, kL>;
using PolyMat = std::array<std::array<PolyRq, kL>, kL>;

/// Negacyclic schoolbook product mod q; the oracle the Toom pipeline is
/// checked against. Inputs need not be normalized.
PolyRq poly_mul_schoolbook(const PolyRq& a, const PolyRq& b);

/// Little-endian bitstream packing: coefficient i occupies bit range
/// [bits*i, bits*(i+1)) of the byte stream, LSB first — the Saber wire
/// layout for 13/10/4-bit fields.
void pack_bits(std::span<const std::uint16_t> coeffs, int bits, std::uint8_t* out);
void unpack_bits(const std::uint8_t* in, int bits, std::span<std::uint16_t> coeffs);

/// Centered binomial sampler, mu = 8: HW(4 bits) - HW(4 bits) per
/// coefficient from 256 buffer bytes.
void cbd_mu8(PolyRq& s, const std::uint8_t buf[kPolyCoinBytes]);

} // namespace scaforge::saber
