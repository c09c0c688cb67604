#pragma once

#include <cstdint>

namespace scaforge::saber {

/// AES256-CTR DRBG with the exact update/extract schedule of the NIST KAT
/// harness; seeding it with a KAT entry's 48-byte seed reproduces the
/// recorded key material bit for bit.
class NistDrbg {
  public:
    explicit NistDrbg(const std::uint8_t entropy_input[48]);

    void generate(std::uint8_t* out, std::size_t len);

  private:
    void update(const std::uint8_t* provided_data); // 48 bytes or nullptr
    void increment_v();

    std::uint8_t key_[32];
    std::uint8_t v_[16];
};

} // namespace scaforge::saber
