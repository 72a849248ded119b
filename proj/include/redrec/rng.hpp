#pragma once

#include <cstdint>
#include <random>

namespace redrec {

// Counter-derived substream generator. Trial i of a run seeded with s draws
// from TrialRng(s, i), so trials are order-independent and safe to execute
// on any number of worker threads. mt19937_64 output is fixed by the
// standard, which keeps runs byte-identical across platforms; the uniform
// double conversion below avoids std::uniform_real_distribution for the
// same reason.
class TrialRng {
public:
    TrialRng(std::uint64_t seed, std::uint64_t stream) {
        std::seed_seq seq{seed, stream, std::uint64_t{0x9e3779b97f4a7c15ULL}};
        gen_.seed(seq);
    }

    std::uint64_t bits() { return gen_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) {
        if (p >= 1.0) return true;
        if (p <= 0.0) return false;
        return uniform() < p;
    }

    // Uniform integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % n;
    }

private:
    std::mt19937_64 gen_;
};

} // namespace redrec
