#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace crossforge {

// Deterministic RNG used everywhere randomness is needed. std::mt19937_64 has
// a standard-pinned output sequence; the value mappings below are pinned here
// so results are identical across platforms and standard libraries (the
// std::uniform_* distributions are not portable).
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    uint64_t next_u64() { return gen_(); }

    // Uniform index in [0, n). Lemire multiply-shift; bias is O(n / 2^64).
    size_t uniform_index(size_t n) {
        return static_cast<size_t>((static_cast<__uint128_t>(next_u64()) * n) >> 64);
    }

    // Uniform real in [0, 1) with 53 bits of precision.
    double uniform_real() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform_range(double lo, double hi) {
        return lo + (hi - lo) * uniform_real();
    }

    // Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = uniform_index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

    // k distinct indices from [0, n), k <= n, via partial Fisher-Yates.
    std::vector<size_t> sample_without_replacement(size_t n, size_t k) {
        std::vector<size_t> pool(n);
        for (size_t i = 0; i < n; ++i) pool[i] = i;
        std::vector<size_t> out;
        out.reserve(k);
        for (size_t i = 0; i < k; ++i) {
            size_t j = i + uniform_index(n - i);
            std::swap(pool[i], pool[j]);
            out.push_back(pool[i]);
        }
        return out;
    }

private:
    std::mt19937_64 gen_;
};

} // namespace crossforge
