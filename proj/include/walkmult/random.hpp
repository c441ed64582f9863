#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "walkmult/rational.hpp"

namespace walkmult {

/// Seeded generator with platform-independent draws: mt19937_64 output is
/// specified by the standard, and bounded draws use rejection sampling
/// instead of std::uniform_int_distribution.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform in [0, n), n > 0.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do x = eng_();
        while (x >= limit);
        return x % n;
    }

    /// Uniform in [lo, hi].
    std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    bool coin() { return below(2) == 1; }

    /// Nonzero rational a/b, a in [-9,9], b in [1,4].
    Rational weight() {
        std::int64_t a = 0;
        while (a == 0) a = uniform(-9, 9);
        return Rational(a, uniform(1, 4));
    }

    /// Nonzero integer in [-k, k].
    std::int64_t nonzero(std::int64_t k) {
        std::int64_t a = 0;
        while (a == 0) a = uniform(-k, k);
        return a;
    }

    template <class V>
    void shuffle(std::vector<V>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

}  // namespace walkmult
