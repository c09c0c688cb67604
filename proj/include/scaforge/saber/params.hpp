#pragma once

#include <cstddef>
#include <cstdint>

namespace scaforge::saber {

// Saber (l = 3) round-3 parameters.
inline constexpr std::size_t kN = 256;
inline constexpr std::size_t kL = 3;
inline constexpr int kEq = 13;
inline constexpr int kEp = 10;
inline constexpr int kEt = 4;
inline constexpr int kMu = 8;

inline constexpr std::uint16_t kQMask = (1u << kEq) - 1;
inline constexpr std::uint16_t kPMask = (1u << kEp) - 1;
inline constexpr std::uint16_t kTMask = (1u << kEt) - 1;

// Rounding constants.
inline constexpr std::uint16_t kH1 = 1u << (kEq - kEp - 1); // 4
inline constexpr std::uint16_t kH2 =
    (1u << (kEp - 2)) - (1u << (kEp - kEt - 1)) + (1u << (kEq - kEp - 1)); // 228

inline constexpr std::size_t kSeedBytes = 32;
inline constexpr std::size_t kNoiseSeedBytes = 32;
inline constexpr std::size_t kKeyBytes = 32;
inline constexpr std::size_t kHashBytes = 32;

inline constexpr std::size_t kPolyBytes = kEq * kN / 8;            // 416
inline constexpr std::size_t kPolyVecBytes = kL * kPolyBytes;      // 1248
inline constexpr std::size_t kPolyCompBytes = kEp * kN / 8;        // 320
inline constexpr std::size_t kPolyVecCompBytes = kL * kPolyCompBytes; // 960
inline constexpr std::size_t kScaleBytes = kEt * kN / 8;           // 128
inline constexpr std::size_t kPolyCoinBytes = kMu * kN / 8;        // 256

inline constexpr std::size_t kIndcpaPkBytes = kPolyVecCompBytes + kSeedBytes; // 992
inline constexpr std::size_t kIndcpaSkBytes = kPolyVecBytes;                  // 1248

inline constexpr std::size_t kPublicKeyBytes = kIndcpaPkBytes;                          // 992
inline constexpr std::size_t kSecretKeyBytes =
    kIndcpaSkBytes + kIndcpaPkBytes + kHashBytes + kKeyBytes;                           // 2304
inline constexpr std::size_t kCiphertextBytes = kPolyVecCompBytes + kScaleBytes;        // 1088
inline constexpr std::size_t kSharedSecretBytes = 32;

} // namespace scaforge::saber
