#include "scaforge/saber/drbg.hpp"

#include <cstring>

#include "scaforge/aes.hpp"

namespace scaforge::saber {

NistDrbg::NistDrbg(const std::uint8_t entropy_input[48]) {
    std::memset(key_, 0, sizeof(key_));
    std::memset(v_, 0, sizeof(v_));
    update(entropy_input);
}

void NistDrbg::increment_v() {
    for (int j = 15; j >= 0; --j) {
        if (v_[j] == 0xff) {
            v_[j] = 0x00;
        } else {
            ++v_[j];
            break;
        }
    }
}

void NistDrbg::update(const std::uint8_t* provided_data) {
    std::uint8_t temp[48];
    for (int i = 0; i < 3; ++i) {
        increment_v();
        aes256_encrypt_block(key_, v_, temp + 16 * i);
    }
    if (provided_data)
        for (int i = 0; i < 48; ++i)
            temp[i] ^= provided_data[i];
    std::memcpy(key_, temp, 32);
    std::memcpy(v_, temp + 32, 16);
}

void NistDrbg::generate(std::uint8_t* out, std::size_t len) {
    std::uint8_t block[16];
    while (len > 0) {
        increment_v();
        aes256_encrypt_block(key_, v_, block);
        const std::size_t take = len > 16 ? 16 : len;
        std::memcpy(out, block, take);
        out += take;
        len -= take;
    }
    update(nullptr);
}

} // namespace scaforge::saber
