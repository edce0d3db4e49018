#include "omegalab/arith.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace omegalab {

uint64_t PrimeTable::capacity_cap() {
    if (const char* env = std::getenv("OMEGALAB_TABLE_LIMIT")) {
        uint64_t v = std::strtoull(env, nullptr, 10);
        if (v >= 2) return v;
    }
    return 200'000'000ULL;
}

PrimeTable PrimeTable::build(uint64_t limit) {
    if (limit < 2) throw ValidationError("prime table limit must be >= 2");
    if (limit > capacity_cap())
        throw CapacityError("prime table limit " + std::to_string(limit) +
                            " exceeds cap " + std::to_string(capacity_cap()));
    PrimeTable t;
    t.limit_ = limit;
    t.spf_.assign(limit + 1, 0);
    for (uint64_t i = 2; i <= limit; ++i) {
        if (t.spf_[i] == 0) {
            t.spf_[i] = static_cast<uint32_t>(i);
            t.primes_.push_back(static_cast<uint32_t>(i));
            for (uint64_t j = i * i; j <= limit; j += i)
                if (t.spf_[j] == 0) t.spf_[j] = static_cast<uint32_t>(i);
        }
    }
    return t;
}

mpz_class Factorization::reconstruct() const {
    mpz_class v = sign;
    for (const auto& [p, e] : factors) {
        mpz_class pe;
        mpz_ui_pow_ui(pe.get_mpz_t(), static_cast<unsigned long>(p), e);
        v *= pe;
    }
    return v;
}

namespace {

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

} // namespace

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // Deterministic witness set for n < 3.3 * 10^24 (covers all of uint64).
    for (uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

namespace {

// Factor v <= table.limit by walking the spf chain.
void factor_small(uint64_t v, const PrimeTable& table,
                  std::vector<std::pair<uint64_t, uint32_t>>& out) {
    while (v > 1) {
        uint64_t p = table.spf(v);
        uint32_t e = 0;
        while (v % p == 0) {
            v /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
}

void merge_factor(std::vector<std::pair<uint64_t, uint32_t>>& factors, uint64_t p, uint32_t e) {
    for (auto& [q, f] : factors) {
        if (q == p) {
            f += e;
            return;
        }
    }
    factors.emplace_back(p, e);
}

} // namespace

Factorization factorize(const mpz_class& m, const PrimeTable& table) {
    if (m == 0) throw ValidationError("factorize: zero input");
    Factorization out;
    out.sign = sgn(m) < 0 ? -1 : 1;
    mpz_class v = abs(m);
    if (v == 1) return out;

    if (v.fits_ulong_p() && v.get_ui() <= table.limit()) {
        factor_small(v.get_ui(), table, out.factors);
        std::sort(out.factors.begin(), out.factors.end());
        return out;
    }

    for (uint32_t p : table.primes()) {
        if (mpz_divisible_ui_p(v.get_mpz_t(), p)) {
            uint32_t e = 0;
            do {
                mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), p);
                ++e;
            } while (mpz_divisible_ui_p(v.get_mpz_t(), p));
            merge_factor(out.factors, p, e);
        }
        if (v == 1) break;
        // Remaining cofactor has no prime factor <= p; once p^2 > v it is prime.
        if (mpz_cmp_ui(v.get_mpz_t(), 1) > 0) {
            mpz_class p2 = mpz_class(p) * p;
            if (p2 > v) break;
        }
    }

    if (v > 1) {
        bool prime;
        if (v.fits_ulong_p() && sizeof(unsigned long) == 8) {
            uint64_t c = v.get_ui();
            if (c <= table.limit()) {
                factor_small(c, table, out.factors);
                std::sort(out.factors.begin(), out.factors.end());
                return out;
            }
            prime = is_prime_u64(c);
        } else {
            prime = mpz_probab_prime_p(v.get_mpz_t(), 40) > 0;
        }
        if (!prime)
            throw InsufficientTableError(
                "factorize: composite cofactor " + v.get_str() +
                " beyond table limit " + std::to_string(table.limit()));
        merge_factor(out.factors, v.get_ui(), 1);
    }
    std::sort(out.factors.begin(), out.factors.end());
    return out;
}

Factorization factorize(int64_t m, const PrimeTable& table) {
    return factorize(mpz_class(static_cast<long>(m)), table);
}

int omega(const mpz_class& m, const PrimeTable& table) {
    return static_cast<int>(factorize(m, table).factors.size());
}

int omega(int64_t m, const PrimeTable& table) {
    if (m == 0) throw ValidationError("omega: zero input");
    uint64_t v = static_cast<uint64_t>(m < 0 ? -m : m);
    if (v <= table.limit()) {
        int count = 0;
        while (v > 1) {
            uint64_t p = table.spf(v);
            while (v % p == 0) v /= p;
            ++count;
        }
        return count;
    }
    return omega(mpz_class(static_cast<long>(m)), table);
}

double omega_weighted(const mpz_class& m, const PrimeWeight& w, const PrimeTable& table) {
    Factorization f = factorize(m, table);
    double sum = 0.0;
    for (const auto& [p, e] : f.factors) {
        (void)e;
        if (p <= w.bad_prime_cutoff) continue;
        double val = w.evaluate(p);
        if (std::abs(val) > w.bound + 1e-15)
            throw ContractError("prime weight at p=" + std::to_string(p) +
                                " exceeds declared bound");
        sum += val;
    }
    return sum;
}

double omega_weighted(int64_t m, const PrimeWeight& w, const PrimeTable& table) {
    return omega_weighted(mpz_class(static_cast<long>(m)), w, table);
}

} // namespace omegalab
