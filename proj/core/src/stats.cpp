#include "omegalab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

#include <json.hpp>

namespace omegalab {

namespace {

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double u01(uint64_t key) { return static_cast<double>(splitmix64(key) >> 11) * 0x1.0p-53; }

double q2d(const mpq_class& q) { return mpq_get_d(q.get_mpq_t()); }

} // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

EmpiricalSummary::EmpiricalSummary(int n, size_t reservoir_cap, uint64_t seed)
    : n_(n), reservoir_cap_(reservoir_cap), seed_(seed) {
    if (n < 1) throw ValidationError("summary dimension must be >= 1");
    sum_vec_.assign(n, 0);
    sum_outer_.assign(n, std::vector<mpq_class>(n, 0));
    power_sums_.assign(n, std::vector<mpq_class>(4, 0));
}

void EmpiricalSummary::accumulate(const std::vector<double>& v) {
    if (static_cast<int>(v.size()) != n_)
        throw ValidationError("accumulate: dimension mismatch");
    std::vector<mpq_class> q(n_);
    for (int i = 0; i < n_; ++i) q[i] = mpq_class(v[i]);
    for (int i = 0; i < n_; ++i) {
        sum_vec_[i] += q[i];
        mpq_class pw = q[i];
        for (int r = 0; r < 4; ++r) {
            power_sums_[i][r] += pw;
            pw *= q[i];
        }
        for (int j = 0; j < n_; ++j) sum_outer_[i][j] += q[i] * q[j];
    }
    ++count_;
    // Seeded reservoir over the stream index within this summary.
    if (reservoir_cap_ > 0) {
        if (reservoir_.size() < reservoir_cap_) {
            reservoir_.push_back(v);
        } else {
            uint64_t j = splitmix64(seed_ ^ splitmix64(reservoir_seen_ + 1)) %
                         (reservoir_seen_ + 1);
            if (j < reservoir_cap_) reservoir_[j] = v;
        }
        ++reservoir_seen_;
    }
}

std::vector<double> EmpiricalSummary::mean() const {
    if (count_ == 0) throw ValidationError("mean of an empty summary");
    std::vector<double> m(n_);
    for (int i = 0; i < n_; ++i) m[i] = q2d(sum_vec_[i] / mpq_class(count_));
    return m;
}

std::vector<std::vector<double>> EmpiricalSummary::covariance() const {
    if (count_ < 2) throw ValidationError("covariance needs at least two samples");
    mpq_class nq(count_);
    std::vector<std::vector<double>> c(n_, std::vector<double>(n_));
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            c[i][j] = q2d((sum_outer_[i][j] - sum_vec_[i] * sum_vec_[j] / nq) /
                          mpq_class(count_ - 1));
    return c;
}

std::vector<std::vector<double>> EmpiricalSummary::correlation() const {
    auto c = covariance();
    std::vector<std::vector<double>> r(n_, std::vector<double>(n_, 0));
    for (int i = 0; i < n_; ++i) {
        if (c[i][i] <= 0) throw ValidationError("correlation with a constant coordinate");
        for (int j = 0; j < n_; ++j) r[i][j] = c[i][j] / std::sqrt(c[i][i] * c[j][j]);
    }
    return r;
}

std::vector<double> EmpiricalSummary::central_moment(int order) const {
    if (order < 1 || order > 4) throw ValidationError("central moment order must be 1..4");
    if (count_ == 0) throw ValidationError("central moment of an empty summary");
    mpq_class nq(count_);
    std::vector<double> out(n_);
    for (int i = 0; i < n_; ++i) {
        mpq_class mu = sum_vec_[i] / nq;
        // E[(X - mu)^k] by binomial expansion over the raw power sums.
        mpq_class acc = 0;
        long binom[5][5] = {{1, 0, 0, 0, 0},
                            {1, 1, 0, 0, 0},
                            {1, 2, 1, 0, 0},
                            {1, 3, 3, 1, 0},
                            {1, 4, 6, 4, 1}};
        for (int r = 0; r <= order; ++r) {
            mpq_class raw = (r == 0) ? nq : power_sums_[i][r - 1];
            mpq_class mupow = 1;
            for (int e = 0; e < order - r; ++e) mupow *= mu;
            int sign = ((order - r) % 2 == 0) ? 1 : -1;
            acc += sign * binom[order][r] * raw * mupow;
        }
        out[i] = q2d(acc / nq);
    }
    return out;
}

EmpiricalSummary EmpiricalSummary::merge(const EmpiricalSummary& a, const EmpiricalSummary& b) {
    if (a.n_ != b.n_) throw ValidationError("merge: dimension mismatch");
    EmpiricalSummary out(a.n_, std::max(a.reservoir_cap_, b.reservoir_cap_), a.seed_ ^ b.seed_);
    out.count_ = a.count_ + b.count_;
    for (int i = 0; i < a.n_; ++i) {
        out.sum_vec_[i] = a.sum_vec_[i] + b.sum_vec_[i];
        for (int r = 0; r < 4; ++r)
            out.power_sums_[i][r] = a.power_sums_[i][r] + b.power_sums_[i][r];
        for (int j = 0; j < a.n_; ++j)
            out.sum_outer_[i][j] = a.sum_outer_[i][j] + b.sum_outer_[i][j];
    }
    // Seeded-deterministic weighted reservoir remix: each retained sample gets
    // an exponential key scaled by the stream mass it represents; keep the
    // cap smallest keys. Commutative because keys ignore argument order.
    struct Keyed {
        double key;
        const std::vector<double>* v;
    };
    std::vector<Keyed> pool;
    uint64_t mix = splitmix64(a.seed_ ^ splitmix64(b.seed_ + a.count_ + b.count_));
    auto add = [&](const EmpiricalSummary& s) {
        if (s.reservoir_.empty()) return;
        double w = static_cast<double>(s.count_) / static_cast<double>(s.reservoir_.size());
        for (size_t i = 0; i < s.reservoir_.size(); ++i) {
            uint64_t h = mix;
            for (double x : s.reservoir_[i]) {
                uint64_t bits;
                static_assert(sizeof(bits) == sizeof(x));
                std::memcpy(&bits, &x, sizeof(bits));
                h = splitmix64(h ^ bits);
            }
            h = splitmix64(h ^ (i * 0x9e3779b97f4a7c15ULL));
            double u = std::max(u01(h), 1e-300);
            pool.push_back({-std::log(u) / w, &s.reservoir_[i]});
        }
    };
    add(a);
    add(b);
    size_t keep = std::min(pool.size(), out.reservoir_cap_);
    std::partial_sort(pool.begin(), pool.begin() + keep, pool.end(),
                      [](const Keyed& x, const Keyed& y) { return x.key < y.key; });
    for (size_t i = 0; i < keep; ++i) out.reservoir_.push_back(*pool[i].v);
    out.reservoir_seen_ = a.reservoir_seen_ + b.reservoir_seen_;
    return out;
}

std::vector<double> normalize_K(const std::vector<int>& omegas, const std::vector<double>& c,
                                double B, double Fexponent) {
    if (omegas.size() != c.size()) throw ValidationError("normalize_K: dimension mismatch");
    double logbase = Fexponent * std::log(B);
    if (!(logbase > 1))
        throw ValidationError("normalization base must exceed e (log log undefined)");
    double lambda = std::log(logbase);
    std::vector<double> out(omegas.size());
    for (size_t i = 0; i < omegas.size(); ++i) {
        if (!(c[i] > 0)) throw ValidationError("normalize_K: c_i must be positive");
        out[i] = (omegas[i] - c[i] * lambda) / std::sqrt(c[i] * lambda);
    }
    return out;
}

ProjectionStat projection_test(const std::vector<std::vector<double>>& samples,
                               const std::vector<double>& t, double targetVariance,
                               double ks_threshold) {
    if (samples.size() < 1000)
        throw ValidationError("projection_test needs at least 1000 samples");
    ProjectionStat out;
    out.t = t;
    out.sampleCount = samples.size();
    std::vector<double> proj;
    proj.reserve(samples.size());
    for (const auto& v : samples) {
        if (v.size() != t.size()) throw ValidationError("projection dimension mismatch");
        double s = 0;
        for (size_t i = 0; i < t.size(); ++i) s += t[i] * v[i];
        proj.push_back(s);
    }
    if (targetVariance < 0) throw ValidationError("negative target variance");
    if (targetVariance == 0) {
        double maxabs = 0;
        for (double x : proj) maxabs = std::max(maxabs, std::abs(x));
        if (maxabs < 1e-9) {
            out.pass = true; // Dirac case
            return out;
        }
        out.degenerateMismatch = true;
        out.ks = 1.0;
        return out;
    }
    std::sort(proj.begin(), proj.end());
    double sd = std::sqrt(targetVariance);
    size_t N = proj.size();
    double ks = 0, cvm = 1.0 / (12.0 * static_cast<double>(N));
    for (size_t i = 0; i < N; ++i) {
        double F = normal_cdf(proj[i] / sd);
        double lo = static_cast<double>(i) / N, hi = static_cast<double>(i + 1) / N;
        ks = std::max(ks, std::max(std::abs(F - lo), std::abs(F - hi)));
        double mid = (2.0 * i + 1) / (2.0 * N);
        cvm += (F - mid) * (F - mid);
    }
    out.ks = ks;
    out.cvm = cvm;
    out.pass = ks < ks_threshold;
    return out;
}

std::vector<std::vector<double>> default_projections(int n, uint64_t seed) {
    if (n < 1) throw ValidationError("projection dimension must be >= 1");
    std::vector<std::vector<double>> out;
    for (int i = 0; i < n; ++i) {
        std::vector<double> e(n, 0);
        e[i] = 1;
        out.push_back(e);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (double s : {1.0, -1.0}) {
                std::vector<double> e(n, 0);
                e[i] = 1;
                e[j] = s;
                out.push_back(e);
            }
    for (int r = 0; r < 8; ++r) {
        std::vector<double> e(n);
        double norm = 0;
        for (int i = 0; i < n; ++i) {
            // Box-Muller on counter-based uniforms for reproducibility.
            double u1 = std::max(u01(seed ^ splitmix64(1000 + 2 * (r * n + i))), 1e-12);
            double u2 = u01(seed ^ splitmix64(1001 + 2 * (r * n + i)));
            e[i] = std::sqrt(-2 * std::log(u1)) * std::cos(2 * M_PI * u2);
            norm += e[i] * e[i];
        }
        norm = std::sqrt(norm);
        for (auto& x : e) x /= norm == 0 ? 1 : norm;
        out.push_back(e);
    }
    return out;
}

FitReport compare_matrices(const std::vector<std::vector<double>>& empirical,
                           const std::vector<std::vector<double>>& predicted, double tol,
                           uint64_t sample_count, uint64_t low_sample_floor) {
    if (empirical.size() != predicted.size())
        throw ValidationError("compare_matrices: shape mismatch");
    FitReport rep;
    rep.empirical = empirical;
    rep.predicted = predicted;
    rep.sampleCount = sample_count;
    rep.lowSampleWarning = sample_count > 0 && sample_count < low_sample_floor;
    rep.pass = true;
    for (size_t i = 0; i < empirical.size(); ++i) {
        if (empirical[i].size() != predicted[i].size())
            throw ValidationError("compare_matrices: shape mismatch");
        std::vector<bool> row;
        for (size_t j = 0; j < empirical[i].size(); ++j) {
            double dev = std::abs(empirical[i][j] - predicted[i][j]);
            rep.maxAbsDeviation = std::max(rep.maxAbsDeviation, dev);
            bool ok = dev <= tol;
            rep.pass = rep.pass && ok;
            row.push_back(ok);
        }
        rep.entryPass.push_back(row);
    }
    return rep;
}

std::string fit_report_to_json(const FitReport& report) {
    nlohmann::json j;
    j["empirical"] = report.empirical;
    j["predicted"] = report.predicted;
    j["maxAbsDeviation"] = report.maxAbsDeviation;
    j["entryPass"] = report.entryPass;
    j["lowSampleWarning"] = report.lowSampleWarning;
    j["sampleCount"] = report.sampleCount;
    j["pass"] = report.pass;
    nlohmann::json ks = nlohmann::json::array();
    for (const auto& s : report.ksStatistics) {
        nlohmann::json e;
        e["t"] = s.t;
        e["ks"] = s.ks;
        e["cvm"] = s.cvm;
        e["sampleCount"] = s.sampleCount;
        e["degenerateMismatch"] = s.degenerateMismatch;
        e["pass"] = s.pass;
        ks.push_back(e);
    }
    j["ksStatistics"] = ks;
    return j.dump(2);
}

std::string projection_to_csv(const std::vector<double>& t,
                              const std::vector<double>& values) {
    std::ostringstream os;
    os << "t,value\n";
    std::ostringstream ts;
    for (size_t i = 0; i < t.size(); ++i) {
        if (i) ts << ';';
        ts << t[i];
    }
    for (double v : values) os << ts.str() << ',' << v << '\n';
    return os.str();
}

std::string svg_histogram(const std::vector<double>& values, double targetVariance, int bins,
                          int width, int height) {
    if (values.empty()) throw ValidationError("svg_histogram: empty sample");
    if (bins < 1) throw ValidationError("svg_histogram: bins must be >= 1");
    double lo = *std::min_element(values.begin(), values.end());
    double hi = *std::max_element(values.begin(), values.end());
    if (hi <= lo) {
        lo -= 1;
        hi += 1;
    }
    double bw = (hi - lo) / bins;
    std::vector<double> freq(bins, 0);
    for (double v : values) {
        int b = std::min(bins - 1, static_cast<int>((v - lo) / bw));
        freq[b] += 1.0 / (values.size() * bw); // density scale
    }
    double ymax = *std::max_element(freq.begin(), freq.end());
    if (targetVariance > 0)
        ymax = std::max(ymax, 1.0 / std::sqrt(2 * M_PI * targetVariance));
    ymax *= 1.05;
    const int mL = 40, mB = 30, mT = 10, mR = 10;
    double pw = width - mL - mR, ph = height - mT - mB;
    auto X = [&](double x) { return mL + (x - lo) / (hi - lo) * pw; };
    auto Y = [&](double y) { return mT + ph - y / ymax * ph; };
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (int b = 0; b < bins; ++b) {
        double x0 = X(lo + b * bw), x1 = X(lo + (b + 1) * bw), y = Y(freq[b]);
        os << "<rect x=\"" << x0 << "\" y=\"" << y << "\" width=\"" << (x1 - x0)
           << "\" height=\"" << (mT + ph - y) << "\" fill=\"#7799cc\" stroke=\"#335\"/>\n";
    }
    if (targetVariance > 0) {
        os << "<polyline fill=\"none\" stroke=\"#c33\" stroke-width=\"1.5\" points=\"";
        for (int i = 0; i <= 200; ++i) {
            double x = lo + (hi - lo) * i / 200.0;
            double d = std::exp(-x * x / (2 * targetVariance)) /
                       std::sqrt(2 * M_PI * targetVariance);
            os << X(x) << ',' << Y(d) << ' ';
        }
        os << "\"/>\n";
    }
    os << "<line x1=\"" << mL << "\" y1=\"" << (mT + ph) << "\" x2=\"" << (width - mR)
       << "\" y2=\"" << (mT + ph) << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << mL << "\" y1=\"" << mT << "\" x2=\"" << mL << "\" y2=\""
       << (mT + ph) << "\" stroke=\"black\"/>\n";
    os << "</svg>\n";
    return os.str();
}

} // namespace omegalab
