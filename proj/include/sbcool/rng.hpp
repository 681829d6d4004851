#pragma once

// Reproducible random streams. Every consumer derives an independent
// substream from (seed, stream index) through a splitmix64 mix, then runs
// mt19937_64. Variate transforms are written out explicitly (uniform via
// 53-bit mantissa, normal via Box-Muller, poisson via Knuth with lambda
// splitting) so that a recorded seed reproduces outputs bit for bit on any
// conforming implementation.

#include <cstdint>
#include <random>

namespace sbcool::rng {

inline constexpr const char* algorithm_id = "mt19937_64+splitmix64(seed,stream);u53;box-muller;knuth-split";

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Independent generator for stream `index` of master `seed`; the derivation
// is order-free, so parallel consumers get identical streams.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(index + 1)));
}

// Uniform in [0, 1) with 53 significant bits.
inline double uniform(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Uniform in (0, 1]; safe as a log argument.
inline double uniform_positive(std::mt19937_64& g) {
    return (static_cast<double>(g() >> 11) + 1.0) * 0x1.0p-53;
}

double normal(std::mt19937_64& g);                   // standard Box-Muller pair, one value kept
double exponential(std::mt19937_64& g, double rate);  // -log(u)/rate
long poisson(std::mt19937_64& g, double mean);

}  // namespace sbcool::rng
