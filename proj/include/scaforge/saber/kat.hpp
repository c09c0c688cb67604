#pragma once

#include <string>
#include <vector>

#include "scaforge/saber/kem.hpp"

namespace scaforge::saber {

/// One entry of a NIST-format .rsp known-answer file.
struct KatEntry {
    int count = -1;
    std::array<std::uint8_t, 48> seed{};
    PublicKey pk{};
    SecretKey sk{};
    Ciphertext ct{};
    SharedSecret ss{};
};

/// Parses a PQCkemKAT .rsp file (hex fields: seed, pk, sk, ct, ss).
/// Throws Error on malformed syntax or wrong field lengths.
std::vector<KatEntry> read_kat_file(const std::string& path);

struct KatOutcome {
    std::size_t total = 0;
    std::size_t passed = 0;
    std::vector<int> failed_counts;

    bool all_passed() const { return passed == total; }
};

/// Re-derives every entry from its seed through the DRBG-driven
/// keygen/encaps/decaps flow and compares all recorded bytes.
KatOutcome verify_kat_entries(const std::vector<KatEntry>& entries);

} // namespace scaforge::saber
