#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace compchall {

/// Source of random bytes for challenge generation. The production source
/// wraps the OS CSPRNG; tests and conformance fixtures use the seeded
/// source, whose output is fully determined by the seed on every platform.
class EntropySource {
  public:
    virtual ~EntropySource() = default;
    virtual void fill(std::span<std::uint8_t> out) = 0;

    /// Uniform draw from [0, 2^k). k = 0 yields 0 (single candidate).
    std::uint32_t draw_r(std::uint32_t k_bits);
};

class SystemEntropy final : public EntropySource {
  public:
    void fill(std::span<std::uint8_t> out) override;
};

/// Deterministic byte stream from a seeded mt19937_64. Words are emitted
/// big-endian, so the stream is identical across platforms and builds —
/// required for the pinned conformance transcripts.
class SeededEntropy final : public EntropySource {
  public:
    explicit SeededEntropy(std::uint64_t seed) : engine_(seed) {}
    void fill(std::span<std::uint8_t> out) override;

  private:
    std::mt19937_64 engine_;
    std::uint64_t word_ = 0;
    int remaining_ = 0;
};

}  // namespace compchall
