#include "sbcool/rng.hpp"

#include <cmath>
#include <stdexcept>

#include "sbcool/constants.hpp"

namespace sbcool::rng {

double normal(std::mt19937_64& g) {
    // Box-Muller; the sine partner is discarded to keep the stream layout
    // independent of call pairing.
    const double u1 = uniform_positive(g);
    const double u2 = uniform(g);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(constants::two_pi * u2);
}

double exponential(std::mt19937_64& g, double rate) {
    if (!(rate > 0.0)) throw std::domain_error("exponential: rate must be > 0");
    return -std::log(uniform_positive(g)) / rate;
}

long poisson(std::mt19937_64& g, double mean) {
    if (mean < 0.0) throw std::domain_error("poisson: mean must be >= 0");
    // Split large means so Knuth's product never underflows.
    long total = 0;
    while (mean > 500.0) {
        const double half = mean * 0.5;
        total += poisson(g, half);
        mean -= half;
    }
    const double limit = std::exp(-mean);
    double prod = uniform_positive(g);
    long k = 0;
    while (prod > limit) {
        prod *= uniform_positive(g);
        ++k;
    }
    return total + k;
}

}  // namespace sbcool::rng
