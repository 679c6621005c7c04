#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace oestylo {

// Identifies one reproducible random sequence.
//
// The generator is xoshiro256** (Blackman & Vigna). Its 256-bit state is
// filled with four consecutive splitmix64 outputs started from
//     x0 = splitmix64_mix(seed) ^ splitmix64_mix(stream_id ^ 0xD1B54A32D192ED03)
// so every (seed, stream_id) pair gives a platform-independent sequence.
// Child streams are derived with `substream(k)`, which hashes k into the
// stream id; Monte Carlo loops use one child per fixed-size chunk of
// replicates, so results are independent of the number of threads.
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    RngStream substream(std::uint64_t k) const;
    bool operator==(const RngStream&) const = default;
};

std::uint64_t splitmix64_mix(std::uint64_t x);

class Xoshiro256 {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256(const RngStream& stream);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    result_type operator()();

    // Uniform in [0, 1) with 53 random bits.
    double uniform();
    // Uniform integer in [0, bound) via Lemire's multiply-and-reject.
    std::uint64_t below(std::uint64_t bound);
    // Index drawn with probability proportional to the given cumulative
    // weights (last element is the total).
    std::size_t categorical(std::span<const double> cumulative);

private:
    std::array<std::uint64_t, 4> s_{};
};

}  // namespace oestylo
