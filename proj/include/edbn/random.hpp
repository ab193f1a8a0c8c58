#ifndef EDBN_RANDOM_HPP
#define EDBN_RANDOM_HPP

#include <cstdint>
#include <span>

namespace edbn {

/// SplitMix64 (Steele, Lea & Flood). State advances by 0x9E3779B97F4A7C15;
/// output is the standard xor-shift-multiply finalizer. Bounded draws use
/// rejection sampling, never a library distribution, so streams match across
/// platforms.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform integer in [0, n); n > 0.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t x = next();
            if (x >= threshold) return x % n;
        }
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Index drawn proportionally to non-negative weights (at least one > 0).
    std::size_t weighted(std::span<const double> weights) {
        double total = 0;
        for (double w : weights) total += w;
        double r = unit() * total;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (r < weights[i]) return i;
            r -= weights[i];
        }
        for (std::size_t i = weights.size(); i-- > 0;)
            if (weights[i] > 0) return i;
        return 0;
    }

private:
    std::uint64_t state_;
};

/// Independent stream seed for item `index` under a run seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 a(seed);
    const std::uint64_t base = a.next();
    SplitMix64 b(base ^ (index * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL));
    return b.next();
}

}  // namespace edbn

#endif
