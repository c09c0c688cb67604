#pragma once

#include <array>
#include <functional>

#include "scaforge/saber/meter.hpp"
#include "scaforge/saber/poly.hpp"

namespace scaforge::saber {

using PublicKey = std::array<std::uint8_t, kPublicKeyBytes>;
using SecretKey = std::array<std::uint8_t, kSecretKeyBytes>;
using Ciphertext = std::array<std::uint8_t, kCiphertextBytes>;
using SharedSecret = std::array<std::uint8_t, kSharedSecretBytes>;

/// Randomness injection point; KAT verification drives this with the NIST
/// DRBG, normal use with an RngStream-backed generator.
using RandomBytes = std::function<void(std::uint8_t*, std::size_t)>;

struct KeyPair {
    PublicKey pk;
    SecretKey sk;
};

struct EncapsResult {
    Ciphertext ct;
    SharedSecret ss;
};

/// Saber.KEM key generation (l=3, q=2^13, p=2^10, T=2^4, mu=8).
KeyPair keygen(const RandomBytes& random, MemoryMeter* meter = nullptr);

/// Encapsulation; ss is the derived shared secret.
EncapsResult encaps(const PublicKey& pk, const RandomBytes& random, MemoryMeter* meter = nullptr);

/// Decapsulation with implicit rejection: tampered ciphertexts yield a
/// deterministic garbage secret, never an error.
SharedSecret decaps(const SecretKey& sk, const Ciphertext& ct, MemoryMeter* meter = nullptr);

// Exposed for tests: the deterministic IND-CPA core.
void indcpa_keypair(const std::uint8_t seed_a[kSeedBytes],
                    const std::uint8_t seed_s[kNoiseSeedBytes],
                    std::uint8_t pk[kIndcpaPkBytes], std::uint8_t sk[kIndcpaSkBytes],
                    MemoryMeter* meter = nullptr);
void indcpa_enc(const std::uint8_t m[kKeyBytes], const std::uint8_t seed_sp[kNoiseSeedBytes],
                const std::uint8_t pk[kIndcpaPkBytes], std::uint8_t ct[kCiphertextBytes],
                MemoryMeter* meter = nullptr);
void indcpa_dec(const std::uint8_t sk[kIndcpaSkBytes], const std::uint8_t ct[kCiphertextBytes],
                std::uint8_t m[kKeyBytes], MemoryMeter* meter = nullptr);

/// Matrix expansion and secret sampling (SHAKE-128 based).
void gen_matrix(PolyMat& a, const std::uint8_t seed[kSeedBytes]);
void gen_secret(PolyVec& s, const std::uint8_t seed[kNoiseSeedBytes]);

} // namespace scaforge::saber
