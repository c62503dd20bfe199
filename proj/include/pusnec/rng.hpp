#pragma once

#include <cstdint>

namespace pusnec {

// Counter-based stream: (seed, stream_id) -> independent deterministic
// sequence. Trials indexed by stream_id are order-independent, so parallel
// runs aggregate to identical results.
class Rng {
public:
    Rng() : state_(0x9e3779b97f4a7c15ULL) {}
    Rng(uint64_t seed, uint64_t stream_id) {
        state_ = mix(mix(seed + 0x9e3779b97f4a7c15ULL) ^ mix(stream_id + 0xbf58476d1ce4e5b9ULL));
        if (state_ == 0) state_ = 0x2545f4914f6cdd1dULL;
    }

    uint64_t next() {
        // splitmix64 step
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // uniform in [0, bound)
    uint64_t below(uint64_t bound) {
        // rejection sampling keeps the draw exactly uniform
        uint64_t limit = ~0ULL - (~0ULL % bound);
        uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % bound;
    }

    double unit() {
        return static_cast<double>(next() >> 11) * (1.0 / 9007199254740992.0);
    }

    bool bernoulli(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return unit() < p;
    }

private:
    static uint64_t mix(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    uint64_t state_;
};

}  // namespace pusnec
