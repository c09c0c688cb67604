#include "scaforge/fips202.hpp"

#include <array>
#include <bit>
#include <cstring>

namespace scaforge {

namespace {

// Round constants from the rc(t) LFSR (x^8 + x^6 + x^5 + x^4 + 1) so no
// table has to be trusted.
constexpr int rc_bit(int t) {
    t %= 255;
    if (t == 0)
        return 1;
    std::uint16_t r = 1;
    for (int i = 1; i <= t; ++i) {
        r <<= 1;
        if (r & 0x100)
            r ^= 0x171;
    }
    return r & 1;
}

constexpr std::array<std::uint64_t, 24> make_round_constants() {
    std::array<std::uint64_t, 24> rc{};
    for (int round = 0; round < 24; ++round)
        for (int j = 0; j <= 6; ++j)
            if (rc_bit(7 * round + j))
                rc[round] |= std::uint64_t{1} << ((1 << j) - 1);
    return rc;
}

// Rho offsets via the (x,y) walk: start (1,0), offset (t+1)(t+2)/2,
// step (x,y) <- (y, 2x+3y).
constexpr std::array<int, 25> make_rho_offsets() {
    std::array<int, 25> rho{};
    int x = 1, y = 0;
    for (int t = 0; t < 24; ++t) {
        rho[x + 5 * y] = ((t + 1) * (t + 2) / 2) % 64;
        const int nx = y, ny = (2 * x + 3 * y) % 5;
        x = nx;
        y = ny;
    }
    return rho;
}

constexpr auto kRoundConstants = make_round_constants();
constexpr auto kRho = make_rho_offsets();

void keccak_f1600(std::uint64_t s[25]) {
    for (int round = 0; round < 24; ++round) {
        // theta
        std::uint64_t c[5], d[5];
        for (int x = 0; x < 5; ++x)
            c[x] = s[x] ^ s[x + 5] ^ s[x + 10] ^ s[x + 15] ^ s[x + 20];
        for (int x = 0; x < 5; ++x)
            d[x] = c[(x + 4) % 5] ^ std::rotl(c[(x + 1) % 5], 1);
        for (int i = 0; i < 25; ++i)
            s[i] ^= d[i % 5];

        // rho + pi
        std::uint64_t b[25];
        for (int x = 0; x < 5; ++x)
            for (int y = 0; y < 5; ++y)
                b[y + 5 * ((2 * x + 3 * y) % 5)] = std::rotl(s[x + 5 * y], kRho[x + 5 * y]);

        // chi
        for (int y = 0; y < 5; ++y)
            for (int x = 0; x < 5; ++x)
                s[x + 5 * y] = b[x + 5 * y] ^ (~b[(x + 1) % 5 + 5 * y] & b[(x + 2) % 5 + 5 * y]);

        // iota
        s[0] ^= kRoundConstants[round];
    }
}

void keccak_sponge(std::size_t rate, std::uint8_t pad, std::uint8_t* out, std::size_t outlen,
                   const std::uint8_t* in, std::size_t inlen) {
    std::uint64_t state[25] = {};
    auto absorb_block = [&](const std::uint8_t* block) {
        for (std::size_t i = 0; i < rate / 8; ++i) {
            std::uint64_t lane;
            std::memcpy(&lane, block + 8 * i, 8); // little-endian host assumed
            state[i] ^= lane;
        }
        keccak_f1600(state);
    };

    while (inlen >= rate) {
        absorb_block(in);
        in += rate;
        inlen -= rate;
    }
    std::uint8_t last[200] = {};
    std::memcpy(last, in, inlen);
    last[inlen] = pad;
    last[rate - 1] |= 0x80;
    absorb_block(last);

    while (outlen > 0) {
        const std::size_t take = outlen < rate ? outlen : rate;
        std::memcpy(out, state, take);
        out += take;
        outlen -= take;
        if (outlen > 0)
            keccak_f1600(state);
    }
}

} // namespace

void sha3_256(std::uint8_t out[32], const std::uint8_t* in, std::size_t inlen) {
    keccak_sponge(136, 0x06, out, 32, in, inlen);
}

void sha3_512(std::uint8_t out[64], const std::uint8_t* in, std::size_t inlen) {
    keccak_sponge(72, 0x06, out, 64, in, inlen);
}

void shake128(std::uint8_t* out, std::size_t outlen, const std::uint8_t* in, std::size_t inlen) {
    keccak_sponge(168, 0x1f, out, outlen, in, inlen);
}

} // namespace scaforge
