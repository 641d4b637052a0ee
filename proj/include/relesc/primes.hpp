#pragma once

#include <gmpxx.h>

#include <vector>

namespace relesc {

bool is_prime(long p);
std::vector<long> primes_up_to(long n);
/// Distinct prime factors of |n| in increasing order (n != 0). Trial
/// division, then Pollard rho for the cofactor.
std::vector<mpz_class> prime_factors(const mpz_class& n);

}  // namespace relesc
