#include "compchall/entropy.hpp"

#include <array>

#include "compchall/errors.hpp"

namespace compchall {

std::uint32_t EntropySource::draw_r(std::uint32_t k_bits) {
    if (k_bits == 0) {
        return 0;
    }
    std::array<std::uint8_t, 4> buf{};
    fill(buf);
    std::uint32_t v = (std::uint32_t{buf[0]} << 24) | (std::uint32_t{buf[1]} << 16) |
                      (std::uint32_t{buf[2]} << 8) | std::uint32_t{buf[3]};
    // Masking by 2^k - 1 keeps the draw uniform (power-of-two range).
    if (k_bits < 32) {
        v &= (std::uint32_t{1} << k_bits) - 1;
    }
    return v;
}

void SystemEntropy::fill(std::span<std::uint8_t> out) {
    static thread_local std::random_device dev;
    try {
        std::size_t i = 0;
        while (i < out.size()) {
            const unsigned int word = dev();
            for (int shift = 0; shift < 32 && i < out.size(); shift += 8) {
                out[i++] = static_cast<std::uint8_t>(word >> shift);
            }
        }
    } catch (const std::exception& e) {
        throw ChallengeError(std::string("entropy source failed: ") + e.what());
    }
}

void SeededEntropy::fill(std::span<std::uint8_t> out) {
    for (std::uint8_t& b : out) {
        if (remaining_ == 0) {
            word_ = engine_();
            remaining_ = 8;
        }
        b = static_cast<std::uint8_t>(word_ >> ((remaining_ - 1) * 8));
        --remaining_;
    }
}

}  // namespace compchall
