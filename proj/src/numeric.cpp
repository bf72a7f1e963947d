#include "syk/numeric.hpp"

#include <cmath>
#include <stdexcept>

namespace syk {

Integer binomial(unsigned long n, unsigned long k)
{
    Integer r;
    if (k > n) return r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

Integer factorial(unsigned long n)
{
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

Integer uniform_below(const Integer& bound, Rng& rng)
{
    if (sgn(bound) <= 0) throw std::invalid_argument("uniform_below: bound must be positive");
    if (bound.fits_ulong_p()) {
        std::uniform_int_distribution<unsigned long> dist(0, bound.get_ui() - 1);
        return Integer(dist(rng));
    }
    // Rejection on the smallest covering power of two.
    const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
    const std::size_t words = (bits + 63) / 64;
    const unsigned top_bits = static_cast<unsigned>(bits - (words - 1) * 64);
    Integer candidate;
    for (;;) {
        candidate = 0;
        for (std::size_t w = 0; w < words; ++w) {
            std::uint64_t chunk = rng();
            if (w == 0 && top_bits < 64) chunk &= (std::uint64_t{1} << top_bits) - 1;
            candidate <<= 64;
            candidate += Integer(static_cast<unsigned long>(chunk));
        }
        if (candidate < bound) return candidate;
    }
}

std::size_t uniform_index(std::size_t bound, Rng& rng)
{
    std::uniform_int_distribution<std::size_t> dist(0, bound - 1);
    return dist(rng);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream)
{
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double log_of(const Integer& x)
{
    if (sgn(x) <= 0) throw std::domain_error("log_of: non-positive argument");
    long exponent = 0;
    const double mantissa = mpz_get_d_2exp(&exponent, x.get_mpz_t());
    return std::log(mantissa) + static_cast<double>(exponent) * std::log(2.0);
}

}  // namespace syk
