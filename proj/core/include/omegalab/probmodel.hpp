#pragma once

#include <cmath>

#include "omegalab/residues.hpp"

namespace omegalab {

// Truncation bookkeeping: F = B^Fexponent, eps = logloglog F / sqrt(loglog F).
// psi defaults to 1 (indicator-weight pipelines); the model window is then
// primes p <= F^psi.
struct CutoffParams {
    double F = 0;
    double eps = 0;
    double psi = 1.0;

    static CutoffParams from_height(double B, double Fexponent = 1.0, double psi = 1.0);
    double cutoff() const { return std::pow(F, psi); }
};

// Dependent Bernoulli model: one vector (X_1, ..., X_n) per prime in the
// window, with joint law determined by the densities g_S(p) via
// inclusion-exclusion. Densities are exact rationals so that moments are
// exact; double-valued tables are embedded exactly.
struct RandomModelConfig {
    int n = 1;
    std::vector<uint64_t> primes;
    // g[mask][prime_index], mask over bits 0..n-1 (bit i-1 set <=> i in S).
    // Row 0 (the empty set) is identically 1.
    std::vector<std::vector<mpq_class>> g;
    // Per-coordinate weights theta_i; empty means theta == 1.
    std::vector<PrimeWeight> weights;

    // Throws ValidationError on shape errors, out-of-range densities, or a
    // monotonicity violation (S subset S' requires g_{S'} <= g_S).
    void validate() const;
    mpq_class theta(int i, size_t prime_index) const;

    // The omega model: theta == 1 and independent coordinates with
    // g_S(p) = (1/p)^{|S|}.
    static RandomModelConfig omega_model(int n, uint64_t prime_bound, const PrimeTable& table);
    // n = 2, g_1 = g_2 = g_12 = 1/p: the two coordinates always agree.
    static RandomModelConfig fully_correlated_pair(uint64_t prime_bound,
                                                   const PrimeTable& table);
};

struct JointAtoms {
    std::vector<mpq_class> prob; // indexed by mask A over {0,1}^n
    bool clamped = false;        // some atom in [-1e-12, 0) was clamped to 0
};

// Inclusion-exclusion atoms at one prime:
// Prob[X_i = 1 for i in A, X_i = 0 otherwise] = sum_{S' subset A^c} (-1)^|S'| g_{A u S'}.
// Throws ValidationError if an atom is below -1e-12.
JointAtoms joint_atoms(const RandomModelConfig& config, size_t prime_index);

struct MeanVariance {
    std::vector<mpq_class> M;  // M_i = sum_p theta_i(p) g_i(p)
    std::vector<mpq_class> V2; // V_i^2 = sum_p theta_i(p)^2 g_i(p)(1 - g_i(p))
};

MeanVariance exact_mean_variance(const RandomModelConfig& config);

struct QForm {
    double Q = 0;
    std::vector<std::vector<double>> sigma; // unit diagonal; sigma_ij in [-1, 1]
};

// Q(t) = sum t_i^2 + 2 sum_{i<j} sigma_ij t_i t_j with
// sigma_ij = sum_p theta_i theta_j (g_ij - g_i g_j) / (V_i V_j).
// Throws ValidationError when some V_i = 0 (degenerate coordinate).
QForm variance_Q(const std::vector<double>& t, const RandomModelConfig& config);

// Centered mixed moment E[prod_i (S_i - E S_i)^{k_i}], |k| <= 6, by per-prime
// convolution of centered moment tensors (exact per-prime rationals, 512-bit
// float accumulation). Budget: <= 2*10^4 primes for |k| <= 4, <= 2*10^3 for
// |k| in {5, 6}; CapacityError beyond.
mpf_class exact_mixed_moment(const RandomModelConfig& config, const std::vector<int>& k);

// Standardized samples ((S_i - M_i)/V_i) for sample indices [lo, hi).
// Counter-based RNG keyed by (seed, prime index, sample index): any partition
// of the index range reproduces the same samples.
std::vector<std::vector<double>> sample_model(const RandomModelConfig& config, uint64_t seed,
                                              uint64_t lo, uint64_t hi);
inline std::vector<std::vector<double>> sample_model(const RandomModelConfig& config,
                                                     uint64_t seed, uint64_t N) {
    return sample_model(config, seed, 0, N);
}

struct MomentReport {
    std::vector<int> k;
    double exactValue = 0; // standardized: exact moment / prod V_i^{k_i}
    double mcValue = 0;
    double mcStdErr = 0;
    uint64_t sampleCount = 0;
};

MomentReport moment_report(const RandomModelConfig& config, const std::vector<int>& k,
                           uint64_t N, uint64_t seed);
std::string moment_report_to_json(const MomentReport& report);

// JSON density tables: { n, primes: [...], gS: { "1,2": [per-prime], ... } },
// subset keys comma-joined sorted 1-based indices; all nonempty subsets
// required.
RandomModelConfig model_config_from_json(const std::string& json_text);
std::string model_config_to_json(const RandomModelConfig& config);

// Model built from finite-field densities of the divisors on v, over the
// good primes p <= prime_bound.
RandomModelConfig model_from_variety(const VarietySpec& v,
                                     const std::vector<DivisorSpec>& divisors,
                                     uint64_t prime_bound, const PrimeTable& table,
                                     uint64_t budget = kDefaultResidueBudget);

} // namespace omegalab
