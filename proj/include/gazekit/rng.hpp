#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace gazekit {

/// Seeded RNG with hand-rolled distributions. The mt19937_64 engine is
/// fully specified by the standard; std:: distributions are not, and corpus
/// generation must be byte-identical across platforms.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t bits() { return eng_(); }

    /// uniform in [0, 1)
    double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// uniform integer in [lo, hi] inclusive
    int64_t uniform_int(int64_t lo, int64_t hi) {
        uint64_t span = uint64_t(hi - lo) + 1;
        return lo + int64_t(eng_() % span);
    }

    double normal(double mean, double sd) {
        // Box-Muller; one value per call keeps the stream easy to reason about
        double u1 = uniform();
        double u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[size_t(uniform_int(0, int64_t(i) - 1))]);
    }

private:
    std::mt19937_64 eng_;
};

} // namespace gazekit
