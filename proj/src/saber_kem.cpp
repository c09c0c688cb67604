#include "scaforge/saber/kem.hpp"

#include <cstring>

#include "scaforge/fips202.hpp"
#include "scaforge/saber/toom.hpp"

namespace scaforge::saber {

namespace {

void polyvec_to_bytes_q(const PolyVec& v, std::uint8_t* out) {
    for (std::size_t i = 0; i < kL; ++i)
        pack_bits(v[i].c, kEq, out + i * kPolyBytes);
}

void bytes_to_polyvec_q(const std::uint8_t* in, PolyVec& v) {
    for (std::size_t i = 0; i < kL; ++i)
        unpack_bits(in + i * kPolyBytes, kEq, v[i].c);
}

void polyvec_to_bytes_p(const PolyVec& v, std::uint8_t* out) {
    for (std::size_t i = 0; i < kL; ++i)
        pack_bits(v[i].c, kEp, out + i * kPolyCompBytes);
}

void bytes_to_polyvec_p(const std::uint8_t* in, PolyVec& v) {
    for (std::size_t i = 0; i < kL; ++i)
        unpack_bits(in + i * kPolyCompBytes, kEp, v[i].c);
}

void msg_to_poly(const std::uint8_t m[kKeyBytes], PolyRq& mp) {
    for (std::size_t j = 0; j < kN; ++j)
        mp.c[j] = (m[j / 8] >> (j % 8)) & 1;
}

void poly_to_msg(const PolyRq& mp, std::uint8_t m[kKeyBytes]) {
    std::memset(m, 0, kKeyBytes);
    for (std::size_t j = 0; j < kN; ++j)
        m[j / 8] |= static_cast<std::uint8_t>((mp.c[j] & 1) << (j % 8));
}

// Constant-time-style compare/select, mirroring the reference KEM.
std::uint8_t ct_verify(const std::uint8_t* a, const std::uint8_t* b, std::size_t len) {
    std::uint8_t r = 0;
    for (std::size_t i = 0; i < len; ++i)
        r |= a[i] ^ b[i];
    return static_cast<std::uint8_t>(r != 0);
}

void ct_cmov(std::uint8_t* dst, const std::uint8_t* src, std::size_t len, std::uint8_t flag) {
    const std::uint8_t mask = static_cast<std::uint8_t>(-static_cast<std::int8_t>(flag));
    for (std::size_t i = 0; i < len; ++i)
        dst[i] ^= mask & (dst[i] ^ src[i]);
}

} // namespace

void gen_matrix(PolyMat& a, const std::uint8_t seed[kSeedBytes]) {
    std::uint8_t buf[kL * kPolyVecBytes];
    shake128(buf, sizeof(buf), seed, kSeedBytes);
    for (std::size_t i = 0; i < kL; ++i)
        for (std::size_t j = 0; j < kL; ++j) {
            unpack_bits(buf + i * kPolyVecBytes + j * kPolyBytes, kEq, a[i][j].c);
            a[i][j].normalize();
        }
}

void gen_secret(PolyVec& s, const std::uint8_t seed[kNoiseSeedBytes]) {
    std::uint8_t buf[kL * kPolyCoinBytes];
    shake128(buf, sizeof(buf), seed, kNoiseSeedBytes);
    for (std::size_t i = 0; i < kL; ++i)
        cbd_mu8(s[i], buf + i * kPolyCoinBytes);
}

void indcpa_keypair(const std::uint8_t seed_a[kSeedBytes],
                    const std::uint8_t seed_s[kNoiseSeedBytes],
                    std::uint8_t pk[kIndcpaPkBytes], std::uint8_t sk[kIndcpaSkBytes],
                    MemoryMeter* meter) {
    PolyMat a;
    PolyVec s;
    gen_matrix(a, seed_a);
    gen_secret(s, seed_s);
    polyvec_to_bytes_q(s, sk);

    MemoryMeter local;
    PolyVec b = matvec_mul_lazy(a, s, /*transpose=*/true, meter ? *meter : local);
    for (std::size_t i = 0; i < kL; ++i)
        for (std::size_t j = 0; j < kN; ++j)
            b[i].c[j] = static_cast<std::uint16_t>((b[i].c[j] + kH1) >> (kEq - kEp));

    polyvec_to_bytes_p(b, pk);
    std::memcpy(pk + kPolyVecCompBytes, seed_a, kSeedBytes);
}

void indcpa_enc(const std::uint8_t m[kKeyBytes], const std::uint8_t seed_sp[kNoiseSeedBytes],
                const std::uint8_t pk[kIndcpaPkBytes], std::uint8_t ct[kCiphertextBytes],
                MemoryMeter* meter) {
    MemoryMeter local;
    MemoryMeter& mm = meter ? *meter : local;

    PolyMat a;
    PolyVec sp;
    gen_matrix(a, pk + kPolyVecCompBytes);
    gen_secret(sp, seed_sp);

    PolyVec bp = matvec_mul_lazy(a, sp, /*transpose=*/false, mm);
    for (std::size_t i = 0; i < kL; ++i)
        for (std::size_t j = 0; j < kN; ++j)
            bp[i].c[j] = static_cast<std::uint16_t>((bp[i].c[j] + kH1) >> (kEq - kEp));
    polyvec_to_bytes_p(bp, ct);

    PolyVec b;
    bytes_to_polyvec_p(pk, b);
    PolyRq vp = inner_prod_lazy(b, sp, mm);

    PolyRq mp;
    msg_to_poly(m, mp);
    PolyRq cm;
    for (std::size_t j = 0; j < kN; ++j) {
        const std::uint16_t v =
            static_cast<std::uint16_t>(vp.c[j] + kH1 - (mp.c[j] << (kEp - 1))) & kPMask;
        cm.c[j] = static_cast<std::uint16_t>(v >> (kEp - kEt));
    }
    pack_bits(cm.c, kEt, ct + kPolyVecCompBytes);
}

void indcpa_dec(const std::uint8_t sk[kIndcpaSkBytes], const std::uint8_t ct[kCiphertextBytes],
                std::uint8_t m[kKeyBytes], MemoryMeter* meter) {
    MemoryMeter local;
    MemoryMeter& mm = meter ? *meter : local;

    PolyVec s;
    bytes_to_polyvec_q(sk, s);
    PolyVec bp;
    bytes_to_polyvec_p(ct, bp);
    PolyRq v = inner_prod_lazy(bp, s, mm);

    PolyRq cm;
    unpack_bits(ct + kPolyVecCompBytes, kEt, cm.c);

    PolyRq mp;
    for (std::size_t j = 0; j < kN; ++j) {
        const std::uint16_t t =
            static_cast<std::uint16_t>(v.c[j] + kH2 - (cm.c[j] << (kEp - kEt))) & kPMask;
        mp.c[j] = static_cast<std::uint16_t>(t >> (kEp - 1));
    }
    poly_to_msg(mp, m);
}

KeyPair keygen(const RandomBytes& random, MemoryMeter* meter) {
    KeyPair kp;
    std::uint8_t seed_a[kSeedBytes];
    std::uint8_t seed_s[kNoiseSeedBytes];
    random(seed_a, kSeedBytes);
    shake128(seed_a, kSeedBytes, seed_a, kSeedBytes); // decouple from the raw RNG state
    random(seed_s, kNoiseSeedBytes);

    indcpa_keypair(seed_a, seed_s, kp.pk.data(), kp.sk.data(), meter);
    std::memcpy(kp.sk.data() + kIndcpaSkBytes, kp.pk.data(), kIndcpaPkBytes);
    sha3_256(kp.sk.data() + kSecretKeyBytes - 64, kp.pk.data(), kIndcpaPkBytes);
    random(kp.sk.data() + kSecretKeyBytes - kKeyBytes, kKeyBytes);
    return kp;
}

EncapsResult encaps(const PublicKey& pk, const RandomBytes& random, MemoryMeter* meter) {
    EncapsResult res;
    std::uint8_t buf[64];
    std::uint8_t kr[64];

    random(buf, 32);
    sha3_256(buf, buf, 32);
    sha3_256(buf + 32, pk.data(), kIndcpaPkBytes);
    sha3_512(kr, buf, 64);

    indcpa_enc(buf, kr + 32, pk.data(), res.ct.data(), meter);

    sha3_256(kr + 32, res.ct.data(), kCiphertextBytes);
    sha3_256(res.ss.data(), kr, 64);
    return res;
}

SharedSecret decaps(const SecretKey& sk, const Ciphertext& ct, MemoryMeter* meter) {
    std::uint8_t buf[64];
    std::uint8_t kr[64];
    Ciphertext cmp;

    indcpa_dec(sk.data(), ct.data(), buf, meter);
    std::memcpy(buf + 32, sk.data() + kSecretKeyBytes - 64, 32);
    sha3_512(kr, buf, 64);

    indcpa_enc(buf, kr + 32, sk.data() + kIndcpaSkBytes, cmp.data(), meter);
    const std::uint8_t fail = ct_verify(ct.data(), cmp.data(), kCiphertextBytes);

    sha3_256(kr + 32, ct.data(), kCiphertextBytes);
    ct_cmov(kr, sk.data() + kSecretKeyBytes - kKeyBytes, kKeyBytes, fail);

    SharedSecret ss;
    sha3_256(ss.data(), kr, 64);
    return ss;
}

} // namespace scaforge::saber
