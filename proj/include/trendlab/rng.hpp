#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace trendlab {

/**
 * Deterministic PRNG with a fixed algorithm (splitmix64), so streams are
 * reproducible bit-for-bit across standard libraries and build modes.
 * std::mt19937 would pin the raw bit stream but not the distributions
 * layered on top; here both layers are owned.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform index in [0, n). n must be > 0.
    std::size_t next_index(std::size_t n) {
        // Rejection-free for our sizes; modulo bias is < 2^-50 for n < 2^14.
        return static_cast<std::size_t>(next_u64() % n);
    }

    /// Standard normal via Marsaglia's polar method (deterministic, no
    /// trig). One spare value is cached between calls.
    double next_normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * next_double() - 1.0;
            v = 2.0 * next_double() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

    /// Index drawn from the categorical distribution proportional to
    /// `cumulative` (a strictly increasing cumulative-weight vector).
    std::size_t next_categorical(std::span<const double> cumulative) {
        const double total = cumulative.back();
        const double u = next_double() * total;
        std::size_t lo = 0, hi = cumulative.size() - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (cumulative[mid] <= u) lo = mid + 1; else hi = mid;
        }
        return lo;
    }

    /// In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::swap(items[i - 1], items[next_index(i)]);
        }
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Derive a substream seed from a root seed and a stream label, so adding
/// a pipeline stage never perturbs the draws of another stage.
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view stream) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (char c : stream) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    Rng mixer(root ^ h);
    return mixer.next_u64();
}

}  // namespace trendlab
