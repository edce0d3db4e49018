#pragma once

#include "omegalab/residues.hpp"

namespace omegalab {

// #{p : x mod p lies on Z} = omega of the gcd of generator values at x.
// Projective hosts expect the canonical primitive representative.
int omega_Z(const IntegralPoint& x, const VarietySpec& host, const DivisorSpec& Z,
            const PrimeTable& table);

// Distinct irreducible components over Q of a reduced divisor, for the
// exact-capable class: univariate / binary-form hypersurfaces and divisors on
// a conic with a rational point (pulled back to P^1). Throws ValidationError
// ("use estimator") otherwise.
std::vector<IntPolynomial> components_exact(const VarietySpec& host, const DivisorSpec& D);

int common_components_exact(const VarietySpec& host, const DivisorSpec& D1,
                            const DivisorSpec& D2);

struct ComponentEstimate {
    double regression = 0;      // slope of sum_p density against log log p
    double direct_mean = 0;     // mean of #(D1 cap D2)(F_p) / p^(dim X - 1)
    double direct_stderr = 0;
    uint64_t primes_used = 0;
};

ComponentEstimate common_components_estimate(const VarietySpec& host, const DivisorSpec& D1,
                                             const DivisorSpec& D2, uint64_t T,
                                             const PrimeTable& table,
                                             uint64_t budget = kDefaultResidueBudget);

enum class CovMode { Exact, Estimate };

struct CovariancePrediction {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> c;     // c_{i,j}; integers in exact mode
    std::vector<std::vector<double>> sigma; // c_{i,j} / sqrt(c_{i,i} c_{j,j})
    int rank = 0;
    CovMode mode = CovMode::Exact;
};

struct CovOptions {
    uint64_t T = 10'000; // prime bound in estimate mode
    const PrimeTable* table = nullptr;
    uint64_t budget = kDefaultResidueBudget;
};

CovariancePrediction predict_covariance(const VarietySpec& host,
                                        const std::vector<DivisorSpec>& divisors, CovMode mode,
                                        const CovOptions& opts = {});

// Rank over Q of the divisor/component incidence matrix.
int divisor_group_rank(const VarietySpec& host, const std::vector<DivisorSpec>& divisors);

std::string covariance_to_json(const CovariancePrediction& pred);

// Eigenvalues of a symmetric matrix (cyclic Jacobi), ascending.
std::vector<double> symmetric_eigenvalues(std::vector<std::vector<double>> m);

} // namespace omegalab
