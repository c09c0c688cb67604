#pragma once

#include <array>
#include <cstdint>

namespace scaforge {

/// FIPS-197 S-box lookup.
std::uint8_t sbox_lookup(std::uint8_t x);

/// One-block AES-256 ECB encryption (used by the KAT DRBG).
void aes256_encrypt_block(const std::uint8_t key[32], const std::uint8_t in[16],
                          std::uint8_t out[16]);

inline int hamming_weight(std::uint8_t x) {
    return __builtin_popcount(x);
}

} // namespace scaforge
