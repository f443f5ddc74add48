// SPDX-License-Identifier: Apache-2.0
// risee - max-min energy efficiency for RIS-aided MISO broadcast links

#pragma once

#include <cmath>
#include <cstdint>
#include <complex>

namespace risee {

// Deterministic per-trial random stream.
//
// The stream for trial i is derived from the master seed with a counter-based
// split: state = splitmix64 walk of (seed, trial). Trials can therefore be
// generated in any order (or concurrently) and always see identical draws.
// The generator itself is xoshiro256++, seeded through splitmix64 as its
// authors recommend. Everything here is integer/IEEE arithmetic only, so a
// given build reproduces sequences bit for bit.
class TrialRng {
  public:
    TrialRng(std::uint64_t master_seed, std::uint64_t trial) {
        // counter-based split: mix the trial index into the seed walk so that
        // streams for (seed, 0), (seed, 1), ... are decorrelated
        std::uint64_t x = master_seed + 0x9E3779B97F4A7C15ULL * (trial + 1);
        for (auto& s : state_) {
            x += 0x9E3779B97F4A7C15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
            s = z ^ (z >> 31);
        }
        have_cached_ = false;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // uniform in [0, 1), 53-bit resolution
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // standard normal via Box-Muller; second value of each pair is cached
    double gaussian() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        // u1 in (0,1] so the log is finite
        const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double ang = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(ang);
        have_cached_ = true;
        return r * std::cos(ang);
    }

    // circularly symmetric complex normal CN(0,1)
    std::complex<double> cgaussian() {
        const double re = gaussian();
        const double im = gaussian();
        return {re * M_SQRT1_2, im * M_SQRT1_2};
    }

  private:
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    std::uint64_t state_[4];
    double cached_ = 0.0;
    bool have_cached_ = false;
};

} // namespace risee
