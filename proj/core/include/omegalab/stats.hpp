#pragma once

#include <string>
#include <vector>

#include <gmpxx.h>

#include "omegalab/errors.hpp"

namespace omegalab {

// Streaming summary of real vectors. Sums, outer-product sums, and per-
// coordinate power sums are exact rationals (doubles embed exactly), so
// accumulating a stream in any partition and merging gives bit-identical
// accumulators. A seeded reservoir keeps a subsample for distribution tests.
class EmpiricalSummary {
  public:
    explicit EmpiricalSummary(int n, size_t reservoir_cap = 100'000, uint64_t seed = 0);

    int dim() const { return n_; }
    uint64_t count() const { return count_; }
    const std::vector<mpq_class>& sum_vec() const { return sum_vec_; }
    const std::vector<std::vector<mpq_class>>& sum_outer() const { return sum_outer_; }
    // power_sums()[i][r] = sum of v_i^(r+1), r = 0..3.
    const std::vector<std::vector<mpq_class>>& power_sums() const { return power_sums_; }
    const std::vector<std::vector<double>>& reservoir() const { return reservoir_; }

    void accumulate(const std::vector<double>& v);

    std::vector<double> mean() const;
    // Sample covariance with the count-1 divisor; needs count >= 2.
    std::vector<std::vector<double>> covariance() const;
    // Correlation matrix derived from covariance(); unit diagonal.
    std::vector<std::vector<double>> correlation() const;
    // Central moment of each coordinate, order in 1..4; needs count >= 1.
    std::vector<double> central_moment(int order) const;

    // Exact accumulators add; the reservoir is remixed seeded-deterministically
    // (weighted by stream sizes). merge(a, b) == merge(b, a) on exact fields.
    static EmpiricalSummary merge(const EmpiricalSummary& a, const EmpiricalSummary& b);

  private:
    int n_;
    uint64_t count_ = 0;
    std::vector<mpq_class> sum_vec_;
    std::vector<std::vector<mpq_class>> sum_outer_;
    std::vector<std::vector<mpq_class>> power_sums_;
    size_t reservoir_cap_;
    uint64_t seed_;
    uint64_t reservoir_seen_ = 0;
    std::vector<std::vector<double>> reservoir_;
};

// (omega_i - c_i lambda) / sqrt(c_i lambda) with lambda = log log (B^Fexponent).
// Throws ValidationError when B^Fexponent <= e (lambda would be <= 0) or
// c_i <= 0.
std::vector<double> normalize_K(const std::vector<int>& omegas, const std::vector<double>& c,
                                double B, double Fexponent = 1.0);

struct ProjectionStat {
    std::vector<double> t;
    double ks = 0;
    double cvm = 0;
    size_t sampleCount = 0;
    bool degenerateMismatch = false; // target variance 0 but sample nonconstant
    bool pass = false;
};

// KS and Cramer-von-Mises statistics of the projection <v, t> against
// N(0, targetVariance). targetVariance == 0 passes iff the projected sample
// is identically 0 (Dirac convention). Needs >= 1000 samples.
ProjectionStat projection_test(const std::vector<std::vector<double>>& samples,
                               const std::vector<double>& t, double targetVariance,
                               double ks_threshold = 0.05);

// Cramer-Wold direction set: all e_i, all e_i +- e_j, and 8 seeded random
// unit vectors.
std::vector<std::vector<double>> default_projections(int n, uint64_t seed);

struct FitReport {
    std::vector<std::vector<double>> empirical;
    std::vector<std::vector<double>> predicted;
    double maxAbsDeviation = 0;
    std::vector<std::vector<bool>> entryPass;
    std::vector<ProjectionStat> ksStatistics;
    bool lowSampleWarning = false;
    uint64_t sampleCount = 0;
    bool pass = false;
};

FitReport compare_matrices(const std::vector<std::vector<double>>& empirical,
                           const std::vector<std::vector<double>>& predicted, double tol,
                           uint64_t sample_count = 0, uint64_t low_sample_floor = 1000);

std::string fit_report_to_json(const FitReport& report);

// CSV of projected values: header "t,value"; t serialized with ';' separators.
std::string projection_to_csv(const std::vector<double>& t, const std::vector<double>& values);

// Standalone SVG: histogram of the values with the N(0, targetVariance)
// density overlaid (scaled to the bin area).
std::string svg_histogram(const std::vector<double>& values, double targetVariance,
                          int bins = 60, int width = 640, int height = 400);

double normal_cdf(double x); // standard normal

} // namespace omegalab
