#pragma once

#include <cstdint>

namespace trajroute {

// Deterministic splitmix64 generator. Avoids std:: distributions so
// sequences are identical across platforms and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n); n must be positive.
    std::uint64_t below(std::uint64_t n) { return next() % n; }

    // Uniform in [0, 1).
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    // Independent stream derived from this seed and a tag.
    Rng split(std::uint64_t tag) const {
        Rng r(state_ ^ (0x94d049bb133111ebull * (tag + 1)));
        r.next();
        return r;
    }

private:
    std::uint64_t state_;
};

}  // namespace trajroute
