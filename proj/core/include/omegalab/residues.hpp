#pragma once

#include "omegalab/variety.hpp"

namespace omegalab {

inline constexpr uint64_t kDefaultResidueBudget = 2'000'000'000ULL;

// Exact #X(Z/QZ) for squarefree Q (CRT product over primes dividing Q).
uint64_t count_points_mod(const VarietySpec& v, uint64_t Q,
                          uint64_t budget = kDefaultResidueBudget);

struct ResidueClassSet {
    uint64_t modulus = 1;
    // Sorted residue vectors; projective classes are canonicalized per prime
    // (first coordinate that is a unit scaled to 1) and CRT-combined.
    std::vector<std::vector<int64_t>> members;
};

ResidueClassSet materialize_residues(const VarietySpec& v, uint64_t Q,
                                     uint64_t budget = kDefaultResidueBudget);

// Residue class of an integral point, matching the materialized canonical form.
std::vector<int64_t> reduce_point_mod(const VarietySpec& v, const IntegralPoint& x, uint64_t Q);

// #{x in X(F_p) : every generator of every divisor in `active` vanishes at x},
// exact; `active` empty counts all of X(F_p).
uint64_t condition_count_mod_p(const VarietySpec& v,
                               const std::vector<const DivisorSpec*>& active, uint64_t p,
                               uint64_t budget = kDefaultResidueBudget);

// The count above over #X(F_p), exact. `active` empty means density 1.
mpq_class condition_density_mod_p(const VarietySpec& v,
                                  const std::vector<const DivisorSpec*>& active, uint64_t p,
                                  uint64_t budget = kDefaultResidueBudget);

// Stereographic parametrization of a conic through its rational point: three
// binary quadratic forms x_i(u, v). Requires a conic-with-point host.
std::vector<IntPolynomial> conic_parametrization(const VarietySpec& v);

// g(d) = #Upsilon_d / #X(Z/DZ) with D = lcm(d_i); d_i squarefree, prime
// factors outside v.badPrimes.
mpq_class density_g(const VarietySpec& v, const std::vector<DivisorSpec>& divisors,
                    const std::vector<uint64_t>& d, uint64_t budget = kDefaultResidueBudget);

struct EquidistReport {
    uint64_t Q = 1;
    uint64_t class_count = 1;
    uint64_t point_count = 0;
    double max_deviation = 0;
    double l2_deviation = 0;
    // Per-class empirical frequency minus 1/#X(Z/QZ), in member order.
    std::vector<double> deviations;
};

EquidistReport check_equidistribution(const VarietySpec& v, uint64_t Q, int64_t B,
                                      const EnumOptions& opts = {});

struct MertensFit {
    // (prime, partial sum up to that prime), decimated checkpoints plus the
    // final prime.
    std::vector<std::pair<uint64_t, double>> partial_sums;
    double c = 0;
    double cprime = 0;
    uint64_t T = 0;
};

// Partial sums of g_D(p) for p <= T with a least-squares fit of
// c * log log T' + c' over the tail primes in (sqrt(T), T].
MertensFit mertens_sum(const VarietySpec& v, const DivisorSpec& divisor, uint64_t T,
                       const PrimeTable& table, uint64_t budget = kDefaultResidueBudget);

} // namespace omegalab
