#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "omegalab/errors.hpp"

namespace omegalab {

// Smallest-prime-factor sieve plus the ordered list of primes up to `limit`.
// Immutable after construction; safe to share across threads.
class PrimeTable {
  public:
    static PrimeTable build(uint64_t limit);

    // Default memory cap; override with OMEGALAB_TABLE_LIMIT.
    static uint64_t capacity_cap();

    uint64_t limit() const { return limit_; }
    const std::vector<uint32_t>& primes() const { return primes_; }

    // Smallest prime factor of m, 2 <= m <= limit.
    uint32_t spf(uint64_t m) const { return spf_[m]; }
    bool is_prime(uint64_t m) const { return m >= 2 && spf_[m] == m; }

  private:
    uint64_t limit_ = 0;
    std::vector<uint32_t> spf_;
    std::vector<uint32_t> primes_;
};

struct Factorization {
    int sign = 1; // +1 or -1
    std::vector<std::pair<uint64_t, uint32_t>> factors; // (prime, exponent), primes increasing

    mpz_class reconstruct() const;
    size_t distinct_primes() const { return factors.size(); }
};

// Bounded prime weight theta with |theta(p)| <= bound, primes p <= bad_prime_cutoff
// excluded from sums.
struct PrimeWeight {
    double bound = 1.0;
    uint64_t bad_prime_cutoff = 0;
    std::function<double(uint64_t)> evaluate;

    static PrimeWeight ones(uint64_t cutoff = 0) {
        return PrimeWeight{1.0, cutoff, [](uint64_t) { return 1.0; }};
    }
};

// Deterministic Miller-Rabin for 64-bit integers.
bool is_prime_u64(uint64_t n);

// Exact factorization of a nonzero integer. Primes beyond the table are
// certified with deterministic Miller-Rabin; a composite cofactor that the
// table cannot split raises InsufficientTableError (never a silent mis-factor).
Factorization factorize(const mpz_class& m, const PrimeTable& table);
Factorization factorize(int64_t m, const PrimeTable& table);

// Number of distinct prime divisors of |m|; omega(+-1) = 0.
int omega(const mpz_class& m, const PrimeTable& table);
int omega(int64_t m, const PrimeTable& table);

// Sum of w.evaluate(p) over distinct primes p | m with p > w.bad_prime_cutoff.
double omega_weighted(const mpz_class& m, const PrimeWeight& w, const PrimeTable& table);
double omega_weighted(int64_t m, const PrimeWeight& w, const PrimeTable& table);

} // namespace omegalab
