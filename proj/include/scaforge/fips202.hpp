#pragma once

#include <cstddef>
#include <cstdint>

namespace scaforge {

void sha3_256(std::uint8_t out[32], const std::uint8_t* in, std::size_t inlen);
void sha3_512(std::uint8_t out[64], const std::uint8_t* in, std::size_t inlen);
void shake128(std::uint8_t* out, std::size_t outlen, const std::uint8_t* in, std::size_t inlen);

} // namespace scaforge
