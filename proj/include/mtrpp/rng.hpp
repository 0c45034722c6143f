#ifndef MTRPP_RNG_HPP
#define MTRPP_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace mtrpp {

/// Seeded generator with portable integer/real draws. The std distributions
/// are implementation-defined, so all draws are done by hand on top of the
/// (fully specified) mt19937_64 stream.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    /// Uniform integer in [lo, hi], inclusive. Unbiased via rejection.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1u;
        if (span == 0) return static_cast<std::int64_t>(next());  // full 64-bit range
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t r;
        do {
            r = next();
        } while (r >= limit);
        return lo + static_cast<std::int64_t>(r % span);
    }

    int uniform_index(int size) { return static_cast<int>(uniform_int(0, size - 1)); }

    /// Uniform real in [0, 1).
    double uniform_real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform_real(); }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
            const int j = uniform_index(i + 1);
            std::swap(v[i], v[static_cast<size_t>(j)]);
        }
    }

private:
    std::mt19937_64 eng_;
};

/// Stable per-run seed derivation for multi-run commands: run r uses base + r.
inline std::uint64_t derive_seed(std::uint64_t base, int run) {
    return base + static_cast<std::uint64_t>(run);
}

}  // namespace mtrpp

#endif
