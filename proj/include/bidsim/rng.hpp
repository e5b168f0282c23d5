#pragma once
#include <cstdint>
#include <vector>
#include <algorithm>

namespace bidsim {

// Deterministic, platform-independent PRNG. std:: distributions are
// implementation-defined, so all sampling helpers live here.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // warm up so nearby seeds diverge immediately
        splitmix64(state_);
    }

    std::uint64_t next() { return splitmix64(state_); }

    // derive an independent stream keyed by `key`
    Rng child(std::uint64_t key) const {
        std::uint64_t s = state_;
        std::uint64_t mixed = splitmix64(s) ^ (key * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
        return Rng(mixed);
    }

    // uniform integer in [0, n), n > 0; rejection sampling for exactness
    std::uint64_t uniform(std::uint64_t n) {
        std::uint64_t threshold = -n % n;  // (2^64 - n) mod n
        for (;;) {
            std::uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    int uniform_int(int lo, int hi) {  // inclusive range [lo, hi]
        return lo + static_cast<int>(uniform(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    double uniform_real() {  // [0, 1)
        return static_cast<double>(next() >> 11) * (1.0 / 9007199254740992.0);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // k distinct elements sampled without replacement, order randomized
    template <typename T>
    std::vector<T> sample(const std::vector<T>& pool, std::size_t k) {
        std::vector<T> v = pool;
        for (std::size_t i = 0; i < k && i < v.size(); ++i) {
            std::size_t j = i + static_cast<std::size_t>(uniform(v.size() - i));
            std::swap(v[i], v[j]);
        }
        v.resize(std::min(k, v.size()));
        return v;
    }

    template <typename T>
    const T& choice(const std::vector<T>& pool) {
        return pool[static_cast<std::size_t>(uniform(pool.size()))];
    }

private:
    std::uint64_t state_;
};

}  // namespace bidsim
