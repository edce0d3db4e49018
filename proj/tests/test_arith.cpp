#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "omegalab/arith.hpp"

using namespace omegalab;

namespace {

// Independent oracle: segmented sieve of Eratosthenes (bool array, no SPF).
uint64_t segmented_prime_count(uint64_t limit) {
    uint64_t root = 1;
    while ((root + 1) * (root + 1) <= limit) ++root;
    std::vector<bool> base(root + 1, true);
    std::vector<uint64_t> base_primes;
    for (uint64_t i = 2; i <= root; ++i) {
        if (!base[i]) continue;
        base_primes.push_back(i);
        for (uint64_t j = i * i; j <= root; j += i) base[j] = false;
    }
    uint64_t count = 0;
    const uint64_t seg = 1 << 16;
    std::vector<bool> block;
    for (uint64_t lo = 2; lo <= limit; lo += seg) {
        uint64_t hi = std::min(limit, lo + seg - 1);
        block.assign(hi - lo + 1, true);
        for (uint64_t p : base_primes) {
            uint64_t start = std::max(p * p, ((lo + p - 1) / p) * p);
            for (uint64_t j = start; j <= hi; j += p) block[j - lo] = false;
        }
        for (uint64_t m = lo; m <= hi; ++m)
            if (block[m - lo]) ++count;
    }
    return count;
}

// Independent oracle: plain trial division, no tables.
std::vector<std::pair<uint64_t, uint32_t>> trial_division(uint64_t v) {
    std::vector<std::pair<uint64_t, uint32_t>> out;
    for (uint64_t p = 2; p * p <= v; ++p) {
        if (v % p) continue;
        uint32_t e = 0;
        while (v % p == 0) {
            v /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    if (v > 1) out.emplace_back(v, 1);
    return out;
}

} // namespace

TEST_CASE("prime table small limits") {
    PrimeTable t = PrimeTable::build(10);
    CHECK(t.primes() == std::vector<uint32_t>{2, 3, 5, 7});

    PrimeTable t30 = PrimeTable::build(30);
    CHECK(t30.spf(21) == 3);
    CHECK(t30.spf(25) == 5);
    CHECK(t30.spf(29) == 29);
    for (uint64_t m = 2; m <= 30; ++m) {
        CHECK(m % t30.spf(m) == 0);
        CHECK(t30.is_prime(t30.spf(m)));
    }
}

TEST_CASE("prime count to 1e6 matches segmented sieve") {
    PrimeTable t = PrimeTable::build(1'000'000);
    CHECK(t.primes().size() == 78498);
    CHECK(t.primes().size() == segmented_prime_count(1'000'000));
}

TEST_CASE("prime table validation and capacity") {
    CHECK_THROWS_AS(PrimeTable::build(1), ValidationError);
    CHECK_THROWS_AS(PrimeTable::build(300'000'000ULL), CapacityError);
}

TEST_CASE("factorize basics") {
    PrimeTable t = PrimeTable::build(1000);
    Factorization f = factorize(mpz_class(12), t);
    CHECK(f.sign == 1);
    CHECK(f.factors == std::vector<std::pair<uint64_t, uint32_t>>{{2, 2}, {3, 1}});

    Factorization neg = factorize(mpz_class(-1), t);
    CHECK(neg.sign == -1);
    CHECK(neg.factors.empty());
    CHECK(neg.reconstruct() == -1);

    CHECK_THROWS_AS(factorize(mpz_class(0), t), ValidationError);
}

TEST_CASE("factorize beyond table via trial + primality") {
    PrimeTable t = PrimeTable::build(10000);
    mpz_class m("600851475143");
    Factorization f = factorize(m, t);
    std::vector<std::pair<uint64_t, uint32_t>> expect{{71, 1}, {839, 1}, {1471, 1}, {6857, 1}};
    CHECK(f.factors == expect);
    CHECK(f.factors == trial_division(600851475143ULL));
    CHECK(f.reconstruct() == m);
}

TEST_CASE("factorize refuses composite cofactors it cannot certify") {
    PrimeTable t = PrimeTable::build(100);
    // 1009 * 1013, both prime factors beyond the table.
    CHECK_THROWS_AS(factorize(mpz_class(1009) * 1013, t), InsufficientTableError);
    // A single large prime cofactor is fine.
    Factorization f = factorize(mpz_class(2) * 1000003, t);
    CHECK(f.factors == std::vector<std::pair<uint64_t, uint32_t>>{{2, 1}, {1000003, 1}});
}

TEST_CASE("factorize reconstruct identity on [-1e6, 1e6] sample") {
    PrimeTable t = PrimeTable::build(1'000'000);
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20000; ++i) {
        int64_t m = static_cast<int64_t>(rng() % 2'000'001) - 1'000'000;
        if (m == 0) continue;
        CHECK(factorize(m, t).reconstruct() == m);
    }
    // And exhaustively near the edges.
    for (int64_t m = 999'900; m <= 1'000'000; ++m) {
        CHECK(factorize(m, t).reconstruct() == m);
        CHECK(factorize(-m, t).reconstruct() == -m);
    }
}

TEST_CASE("omega basics") {
    PrimeTable t = PrimeTable::build(1000);
    CHECK(omega(int64_t{1}, t) == 0);
    CHECK(omega(int64_t{-1}, t) == 0);
    CHECK(omega(int64_t{12}, t) == 2);
    CHECK(omega(mpz_class(1024) * 3 * 5 * 7, t) == 4);
}

TEST_CASE("omega additivity on coprime pairs") {
    PrimeTable t = PrimeTable::build(1'000'000);
    std::mt19937_64 rng(11);
    int done = 0;
    while (done < 10000) {
        int64_t a = static_cast<int64_t>(rng() % 999'999) + 2;
        int64_t b = static_cast<int64_t>(rng() % 999'999) + 2;
        if (std::gcd(a, b) != 1) continue;
        CHECK(omega(mpz_class(a) * b, t) == omega(a, t) + omega(b, t));
        ++done;
    }
}

TEST_CASE("omega of powers") {
    PrimeTable t = PrimeTable::build(100000);
    std::mt19937_64 rng(13);
    for (int i = 0; i < 2000; ++i) {
        int64_t m = static_cast<int64_t>(rng() % 500) + 2;
        mpz_class pw = 1;
        int k = 1 + static_cast<int>(rng() % 5);
        for (int j = 0; j < k; ++j) pw *= m;
        CHECK(omega(pw, t) == omega(m, t));
    }
}

TEST_CASE("omega_weighted") {
    PrimeTable t = PrimeTable::build(1000);
    PrimeWeight ones = PrimeWeight::ones(0);
    CHECK(omega_weighted(int64_t{12}, ones, t) == doctest::Approx(2.0));

    PrimeWeight cut2 = PrimeWeight::ones(2);
    CHECK(omega_weighted(int64_t{12}, cut2, t) == doctest::Approx(1.0));

    PrimeWeight recip{1.0, 0, [](uint64_t p) { return 1.0 / static_cast<double>(p); }};
    CHECK(omega_weighted(int64_t{30}, recip, t) == doctest::Approx(31.0 / 30.0));

    PrimeWeight bad{0.1, 0, [](uint64_t) { return 1.0; }};
    CHECK_THROWS_AS(omega_weighted(int64_t{6}, bad, t), ContractError);
}

TEST_CASE("omega_weighted with unit weight equals omega on 1..1e5") {
    PrimeTable t = PrimeTable::build(100000);
    PrimeWeight ones = PrimeWeight::ones(0);
    for (int64_t m = 1; m <= 100000; ++m)
        CHECK(omega_weighted(m, ones, t) == doctest::Approx(static_cast<double>(omega(m, t))));
}

TEST_CASE("deterministic primality") {
    CHECK(is_prime_u64(2));
    CHECK(is_prime_u64(1000003));
    CHECK(!is_prime_u64(1));
    CHECK(!is_prime_u64(1000001)); // 101 * 9901
    CHECK(is_prime_u64(18446744073709551557ULL));
    CHECK(!is_prime_u64(18446744073709551555ULL));
    // Strong-pseudoprime stress: compare against trial division below 1e5.
    PrimeTable t = PrimeTable::build(100000);
    for (uint64_t m = 2; m <= 100000; ++m) CHECK(is_prime_u64(m) == t.is_prime(m));
}
