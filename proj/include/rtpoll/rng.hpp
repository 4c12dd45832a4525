#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace rtpoll {

// Counter-style generator built on the splitmix64 mixing function.
// Stream-keyed: (seed, stream) pairs give statistically independent
// sequences, so replications can fan out without coordination.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : state_(mix(mix(seed) + kGolden * (stream + 1))) {}

    static constexpr std::string_view name() { return "splitmix64-counter"; }

    std::uint64_t next_u64() {
        state_ += kGolden;
        return mix(state_);
    }

    // uniform on [2^-54, 1 - 2^-54]; never 0 or 1
    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double exponential(double rate) {
        return -std::log1p(-uniform01()) / rate;
    }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

private:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace rtpoll
