#pragma once

#include <cstdint>
#include <cstddef>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lexrel {

/// Deterministic 64-bit generator (splitmix64). The standard library's
/// distributions and std::shuffle are implementation-defined, so every
/// random draw in the toolkit goes through this class instead; identical
/// seeds give identical streams on every platform and standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Unbiased integer in [0, n). n must be nonzero.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n; // 2^64 mod n
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            using std::swap;
            swap(v[i - 1], v[j]);
        }
    }

    /// k distinct indices drawn from [0, n) in draw order. Partial
    /// Fisher-Yates over a sparse permutation, so it is O(k) even when
    /// n is large. Requires k <= n.
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k) {
        std::unordered_map<std::size_t, std::size_t> displaced;
        displaced.reserve(k * 2);
        std::vector<std::size_t> out;
        out.reserve(k);
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(below(n - i));
            auto it = displaced.find(j);
            const std::size_t value = (it == displaced.end()) ? j : it->second;
            auto at_i = displaced.find(i);
            displaced[j] = (at_i == displaced.end()) ? i : at_i->second;
            out.push_back(value);
        }
        return out;
    }

    std::vector<std::size_t> sample_with_replacement(std::size_t n, std::size_t k) {
        std::vector<std::size_t> out;
        out.reserve(k);
        for (std::size_t i = 0; i < k; ++i) out.push_back(static_cast<std::size_t>(below(n)));
        return out;
    }

private:
    std::uint64_t state_;
};

} // namespace lexrel
