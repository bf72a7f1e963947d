#pragma once

#include <cstdint>
#include <random>

#include <gmpxx.h>

namespace syk {

using Integer = mpz_class;
using Rational = mpq_class;

/// Engine used everywhere randomness is injected.
using Rng = std::mt19937_64;

Integer binomial(unsigned long n, unsigned long k);
Integer factorial(unsigned long n);

/// Uniform integer in [0, bound). `bound` must be positive.
Integer uniform_below(const Integer& bound, Rng& rng);

/// Uniform std::size_t in [0, bound).
std::size_t uniform_index(std::size_t bound, Rng& rng);

/// Deterministic per-stream seed derived from a master seed (SplitMix64 mix).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// log(x) for a positive big integer, accurate to double precision.
double log_of(const Integer& x);

}  // namespace syk
