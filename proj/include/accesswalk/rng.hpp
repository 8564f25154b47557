#pragma once

#include <cstdint>
#include <random>

namespace accesswalk {

/// Independent random stream identified by (master seed, stream id).
///
/// The engine state is derived through std::seed_seq, whose mixing algorithm
/// is fixed by the standard, so a given pair yields the same sequence on every
/// platform and regardless of which thread consumes it.
class RandomStream {
public:
    RandomStream(std::uint64_t master_seed, std::uint64_t stream_id);

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint32_t below(std::uint32_t bound)
    {
        // Lemire's multiply-shift with rejection; exact uniformity.
        std::uint64_t x = engine_();
        auto m = static_cast<unsigned __int128>(x) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            std::uint64_t threshold = (0 - static_cast<std::uint64_t>(bound)) % bound;
            while (low < threshold) {
                x = engine_();
                m = static_cast<unsigned __int128>(x) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint32_t>(m >> 64);
    }

    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace accesswalk
