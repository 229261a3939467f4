#pragma once

#include <cstdint>
#include <random>

namespace mgrid {

/// Portable random source. The engine is std::mt19937_64, whose output
/// sequence is fixed by the standard; the derived draws below are computed
/// here rather than by <random> distributions, whose algorithms vary
/// between standard libraries.
///
///   uniform()      = (next() >> 11) * 2^-53, in [0, 1)
///   uniform_int(n) = rejection sampling on next() for an unbiased value in [0, n)
///   normal()       = Box-Muller on two uniforms, second value cached
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::uint64_t uniform_int(std::uint64_t n);
    double normal();
    double normal(double mean, double sd) { return mean + sd * normal(); }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Derives an independent stream seed from a base seed and a label.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t label);

}  // namespace mgrid
