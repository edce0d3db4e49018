#include "omegalab/probmodel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include <json.hpp>

namespace omegalab {

namespace {

constexpr int kMomentPrec = 512; // bits for the moment accumulator

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Counter-based uniform in [0, 1) keyed by (seed, prime index, sample index).
double u01(uint64_t seed, uint64_t prime_index, uint64_t sample_index) {
    uint64_t h = splitmix64(seed ^ splitmix64(0xC0FFEE0000000001ULL + prime_index));
    uint64_t r = splitmix64(h ^ splitmix64(0xB16B00B500000002ULL + sample_index));
    return static_cast<double>(r >> 11) * 0x1.0p-53;
}

} // namespace

CutoffParams CutoffParams::from_height(double B, double Fexponent, double psi) {
    if (!(psi > 0 && psi <= 1)) throw ValidationError("psi must lie in (0, 1]");
    CutoffParams c;
    c.F = std::pow(B, Fexponent);
    if (!(std::log(c.F) > 1))
        throw ValidationError("height too small: log log F(B) must be positive");
    double ll = std::log(std::log(c.F));
    c.eps = std::log(ll) / std::sqrt(ll);
    c.psi = psi;
    return c;
}

void RandomModelConfig::validate() const {
    if (n < 1 || n > 20) throw ValidationError("model dimension out of range");
    size_t masks = size_t{1} << n;
    if (g.size() != masks) throw ValidationError("density table needs one row per subset");
    for (const auto& row : g)
        if (row.size() != primes.size())
            throw ValidationError("density row length differs from the prime window");
    for (size_t j = 0; j < primes.size(); ++j) {
        if (g[0][j] != 1) throw ValidationError("g of the empty set must be 1");
        for (size_t mask = 0; mask < masks; ++mask) {
            const mpq_class& v = g[mask][j];
            if (v < 0 || v > 1) throw ValidationError("density outside [0, 1]");
            for (int i = 0; i < n; ++i) {
                size_t up = mask | (size_t{1} << i);
                if (up != mask && g[up][j] > v)
                    throw ValidationError("density table not monotone under inclusion");
            }
        }
    }
    if (!weights.empty() && static_cast<int>(weights.size()) != n)
        throw ValidationError("need one weight per coordinate");
}

mpq_class RandomModelConfig::theta(int i, size_t prime_index) const {
    if (weights.empty()) return 1;
    const PrimeWeight& w = weights[i];
    uint64_t p = primes[prime_index];
    if (p <= w.bad_prime_cutoff) return 0;
    double v = w.evaluate(p);
    if (std::abs(v) > w.bound + 1e-15) throw ContractError("weight exceeds its stated bound");
    return mpq_class(v);
}

RandomModelConfig RandomModelConfig::omega_model(int n, uint64_t prime_bound,
                                                 const PrimeTable& table) {
    if (prime_bound > table.limit())
        throw CapacityError("omega_model: bound exceeds prime table limit");
    RandomModelConfig c;
    c.n = n;
    for (uint32_t p : table.primes()) {
        if (p > prime_bound) break;
        c.primes.push_back(p);
    }
    size_t masks = size_t{1} << n;
    c.g.assign(masks, {});
    for (size_t mask = 0; mask < masks; ++mask) {
        c.g[mask].reserve(c.primes.size());
        int bits = std::popcount(mask);
        for (uint64_t p : c.primes) {
            mpq_class v(1);
            for (int b = 0; b < bits; ++b) v /= static_cast<unsigned long>(p);
            c.g[mask].push_back(v);
        }
    }
    return c;
}

RandomModelConfig RandomModelConfig::fully_correlated_pair(uint64_t prime_bound,
                                                           const PrimeTable& table) {
    RandomModelConfig c = omega_model(1, prime_bound, table);
    RandomModelConfig out;
    out.n = 2;
    out.primes = c.primes;
    out.g.assign(4, {});
    for (size_t j = 0; j < c.primes.size(); ++j) {
        out.g[0].push_back(1);
        out.g[1].push_back(c.g[1][j]);
        out.g[2].push_back(c.g[1][j]);
        out.g[3].push_back(c.g[1][j]);
    }
    return out;
}

namespace {

// joint_atoms without the per-call config validation (hot loops validate once).
JointAtoms joint_atoms_unchecked(const RandomModelConfig& config, size_t prime_index) {
    size_t masks = size_t{1} << config.n;
    JointAtoms out;
    out.prob.assign(masks, 0);
    const mpq_class neg_tol(-1e-12);
    for (size_t A = 0; A < masks; ++A) {
        size_t comp = (masks - 1) ^ A;
        mpq_class atom = 0;
        size_t sub = comp;
        while (true) {
            int sign = (std::popcount(sub) % 2 == 0) ? 1 : -1;
            atom += sign * config.g[A | sub][prime_index];
            if (sub == 0) break;
            sub = (sub - 1) & comp;
        }
        if (atom < neg_tol)
            throw ValidationError("inconsistent density table: negative atom probability");
        if (atom < 0) {
            atom = 0;
            out.clamped = true;
        }
        out.prob[A] = atom;
    }
    if (out.clamped) {
        mpq_class total = 0;
        for (const auto& a : out.prob) total += a;
        if (total == 0) throw ValidationError("density table clamps to the zero measure");
        for (auto& a : out.prob) a /= total;
    }
    mpq_class total = 0;
    for (const auto& a : out.prob) total += a;
    if (total != 1) throw ContractError("joint atoms do not sum to 1");
    return out;
}

} // namespace

JointAtoms joint_atoms(const RandomModelConfig& config, size_t prime_index) {
    config.validate();
    if (prime_index >= config.primes.size())
        throw ValidationError("prime index outside the window");
    return joint_atoms_unchecked(config, prime_index);
}

MeanVariance exact_mean_variance(const RandomModelConfig& config) {
    config.validate();
    MeanVariance mv;
    mv.M.assign(config.n, 0);
    mv.V2.assign(config.n, 0);
    for (int i = 0; i < config.n; ++i) {
        size_t mask = size_t{1} << i;
        for (size_t j = 0; j < config.primes.size(); ++j) {
            mpq_class th = config.theta(i, j);
            const mpq_class& gi = config.g[mask][j];
            mv.M[i] += th * gi;
            mv.V2[i] += th * th * gi * (1 - gi);
        }
    }
    return mv;
}

QForm variance_Q(const std::vector<double>& t, const RandomModelConfig& config) {
    config.validate();
    if (static_cast<int>(t.size()) != config.n)
        throw ValidationError("variance_Q: vector dimension mismatch");
    MeanVariance mv = exact_mean_variance(config);
    std::vector<double> V(config.n);
    for (int i = 0; i < config.n; ++i) {
        if (mv.V2[i] == 0)
            throw ValidationError("degenerate coordinate: V_i = 0 over the window");
        V[i] = std::sqrt(mpq_get_d(mv.V2[i].get_mpq_t()));
    }
    QForm out;
    out.sigma.assign(config.n, std::vector<double>(config.n, 0));
    for (int i = 0; i < config.n; ++i) out.sigma[i][i] = 1;
    for (int i = 0; i < config.n; ++i) {
        for (int j = i + 1; j < config.n; ++j) {
            mpq_class cov = 0;
            size_t mij = (size_t{1} << i) | (size_t{1} << j);
            for (size_t jj = 0; jj < config.primes.size(); ++jj)
                cov += config.theta(i, jj) * config.theta(j, jj) *
                       (config.g[mij][jj] -
                        config.g[size_t{1} << i][jj] * config.g[size_t{1} << j][jj]);
            out.sigma[i][j] = out.sigma[j][i] = mpq_get_d(cov.get_mpq_t()) / (V[i] * V[j]);
        }
    }
    out.Q = 0;
    for (int i = 0; i < config.n; ++i) out.Q += t[i] * t[i];
    for (int i = 0; i < config.n; ++i)
        for (int j = i + 1; j < config.n; ++j) out.Q += 2 * out.sigma[i][j] * t[i] * t[j];
    if (out.Q < -1e-12) throw ContractError("Q(t) negative beyond tolerance");
    return out;
}

namespace {

// Linear indexing of multi-indices j with 0 <= j_i <= k_i.
struct TensorShape {
    std::vector<int> dims;    // k_i + 1
    std::vector<size_t> stride;
    size_t total = 1;

    explicit TensorShape(const std::vector<int>& k) {
        stride.resize(k.size());
        for (size_t i = 0; i < k.size(); ++i) {
            dims.push_back(k[i] + 1);
            stride[i] = total;
            total *= static_cast<size_t>(k[i] + 1);
        }
    }
    std::vector<int> decode(size_t idx) const {
        std::vector<int> j(dims.size());
        for (size_t i = 0; i < dims.size(); ++i) {
            j[i] = static_cast<int>(idx % dims[i]);
            idx /= dims[i];
        }
        return j;
    }
};

} // namespace

mpf_class exact_mixed_moment(const RandomModelConfig& config, const std::vector<int>& k) {
    config.validate();
    if (static_cast<int>(k.size()) != config.n)
        throw ValidationError("moment multi-index dimension mismatch");
    int total_order = 0;
    for (int ki : k) {
        if (ki < 0) throw ValidationError("moment multi-index must be nonnegative");
        total_order += ki;
    }
    if (total_order > 6) throw ValidationError("moment order |k| must be <= 6");
    if (total_order == 0) return mpf_class(1, kMomentPrec);
    size_t prime_budget = total_order <= 4 ? 20'000 : 2'000;
    if (config.primes.size() > prime_budget)
        throw CapacityError("exact_mixed_moment: prime window exceeds the moment budget");

    long binom[7][7];
    for (int a = 0; a <= 6; ++a)
        for (int b = 0; b <= 6; ++b)
            binom[a][b] = (b == 0 || b == a) ? 1
                          : (b > a)          ? 0
                                             : 0;
    for (int a = 1; a <= 6; ++a)
        for (int b = 1; b < a; ++b) binom[a][b] = binom[a - 1][b - 1] + binom[a - 1][b];

    TensorShape shape(k);
    std::vector<std::vector<int>> midx(shape.total);
    for (size_t idx = 0; idx < shape.total; ++idx) midx[idx] = shape.decode(idx);

    std::vector<mpf_class> M(shape.total, mpf_class(0, kMomentPrec));
    M[0] = 1;
    size_t masks = size_t{1} << config.n;

    std::vector<mpf_class> m(shape.total, mpf_class(0, kMomentPrec));
    std::vector<mpf_class> newM(shape.total, mpf_class(0, kMomentPrec));
    for (size_t pj = 0; pj < config.primes.size(); ++pj) {
        JointAtoms atoms = joint_atoms_unchecked(config, pj);
        // Per-prime centered moment tensor m[a] = E[prod_i (theta_i (X_i - g_i))^{a_i}].
        // Powers of the centered values per mask and coordinate, exact.
        std::vector<std::vector<std::vector<mpq_class>>> powers(masks);
        for (size_t mask = 0; mask < masks; ++mask) {
            powers[mask].resize(config.n);
            for (int i = 0; i < config.n; ++i) {
                mpq_class v = config.theta(i, pj) *
                              (mpq_class(static_cast<int>((mask >> i) & 1)) -
                               config.g[size_t{1} << i][pj]);
                powers[mask][i].assign(1, mpq_class(1));
                for (int e = 1; e <= k[i]; ++e)
                    powers[mask][i].push_back(powers[mask][i].back() * v);
            }
        }
        for (size_t idx = 0; idx < shape.total; ++idx) {
            mpq_class acc = 0;
            for (size_t mask = 0; mask < masks; ++mask) {
                if (atoms.prob[mask] == 0) continue;
                mpq_class term = atoms.prob[mask];
                for (int i = 0; i < config.n; ++i) term *= powers[mask][i][midx[idx][i]];
                acc += term;
            }
            m[idx] = mpf_class(acc, kMomentPrec);
        }
        // Convolve: E[(W + Y)^j] = sum_{a <= j} C(j, a) E[W^{j-a}] E[Y^a].
        for (size_t jdx = 0; jdx < shape.total; ++jdx) {
            const std::vector<int>& j = midx[jdx];
            mpf_class acc(0, kMomentPrec);
            for (size_t adx = 0; adx < shape.total; ++adx) {
                const std::vector<int>& a = midx[adx];
                bool ok = true;
                long coef = 1;
                size_t rest = 0;
                for (int i = 0; i < config.n && ok; ++i) {
                    if (a[i] > j[i]) {
                        ok = false;
                        break;
                    }
                    coef *= binom[j[i]][a[i]];
                    rest += static_cast<size_t>(j[i] - a[i]) * shape.stride[i];
                }
                if (!ok) continue;
                acc += coef * M[rest] * m[adx];
            }
            newM[jdx] = acc;
        }
        M.swap(newM);
    }
    return M[shape.total - 1];
}

std::vector<std::vector<double>> sample_model(const RandomModelConfig& config, uint64_t seed,
                                              uint64_t lo, uint64_t hi) {
    config.validate();
    if (lo > hi) throw ValidationError("sample range reversed");
    MeanVariance mv = exact_mean_variance(config);
    std::vector<double> M(config.n), V(config.n);
    for (int i = 0; i < config.n; ++i) {
        if (mv.V2[i] == 0)
            throw ValidationError("degenerate coordinate: V_i = 0 over the window");
        M[i] = mpq_get_d(mv.M[i].get_mpq_t());
        V[i] = std::sqrt(mpq_get_d(mv.V2[i].get_mpq_t()));
    }
    size_t masks = size_t{1} << config.n;
    size_t np = config.primes.size();
    // Per-prime atom CDF and per-prime weights, in doubles for the hot loop.
    std::vector<double> cdf(np * masks);
    std::vector<double> theta(np * static_cast<size_t>(config.n));
    for (size_t j = 0; j < np; ++j) {
        JointAtoms atoms = joint_atoms_unchecked(config, j);
        double run = 0;
        for (size_t mask = 0; mask < masks; ++mask) {
            run += mpq_get_d(atoms.prob[mask].get_mpq_t());
            cdf[j * masks + mask] = run;
        }
        cdf[j * masks + masks - 1] = 1.0;
        for (int i = 0; i < config.n; ++i)
            theta[j * config.n + i] = mpq_get_d(config.theta(i, j).get_mpq_t());
    }
    std::vector<std::vector<double>> out;
    out.reserve(hi - lo);
    std::vector<double> S(config.n);
    for (uint64_t s = lo; s < hi; ++s) {
        std::fill(S.begin(), S.end(), 0.0);
        for (size_t j = 0; j < np; ++j) {
            double u = u01(seed, j, s);
            const double* c = &cdf[j * masks];
            size_t mask = 0;
            while (u >= c[mask]) ++mask;
            for (int i = 0; i < config.n; ++i)
                if ((mask >> i) & 1) S[i] += theta[j * config.n + i];
        }
        std::vector<double> z(config.n);
        for (int i = 0; i < config.n; ++i) z[i] = (S[i] - M[i]) / V[i];
        out.push_back(std::move(z));
    }
    return out;
}

MomentReport moment_report(const RandomModelConfig& config, const std::vector<int>& k,
                           uint64_t N, uint64_t seed) {
    if (N < 1) throw ValidationError("moment_report: need at least one sample");
    MomentReport rep;
    rep.k = k;
    rep.sampleCount = N;
    mpf_class exact = exact_mixed_moment(config, k);
    MeanVariance mv = exact_mean_variance(config);
    double scale = 1;
    for (int i = 0; i < config.n; ++i)
        scale *= std::pow(std::sqrt(mpq_get_d(mv.V2[i].get_mpq_t())), k[i]);
    rep.exactValue = mpf_get_d(exact.get_mpf_t()) / scale;

    auto samples = sample_model(config, seed, 0, N);
    double sum = 0, sumsq = 0;
    for (const auto& z : samples) {
        double prod = 1;
        for (int i = 0; i < config.n; ++i)
            for (int e = 0; e < k[i]; ++e) prod *= z[i];
        sum += prod;
        sumsq += prod * prod;
    }
    rep.mcValue = sum / static_cast<double>(N);
    double var = (sumsq - static_cast<double>(N) * rep.mcValue * rep.mcValue) /
                 std::max<double>(1, static_cast<double>(N - 1));
    rep.mcStdErr = std::sqrt(std::max(var, 0.0) / static_cast<double>(N));
    return rep;
}

std::string moment_report_to_json(const MomentReport& report) {
    nlohmann::json j;
    j["k"] = report.k;
    j["exactValue"] = report.exactValue;
    j["mcValue"] = report.mcValue;
    j["mcStdErr"] = report.mcStdErr;
    j["sampleCount"] = report.sampleCount;
    return j.dump(2);
}

namespace {

std::string subset_key(size_t mask) {
    std::string key;
    for (int i = 0; mask >> i; ++i) {
        if (!((mask >> i) & 1)) continue;
        if (!key.empty()) key += ",";
        key += std::to_string(i + 1);
    }
    return key;
}

} // namespace

RandomModelConfig model_config_from_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("model config JSON parse error: ") + e.what());
    }
    RandomModelConfig c;
    try {
        c.n = j.at("n").get<int>();
        c.primes = j.at("primes").get<std::vector<uint64_t>>();
        if (c.n < 1 || c.n > 20) throw ValidationError("model dimension out of range");
        size_t masks = size_t{1} << c.n;
        c.g.assign(masks, std::vector<mpq_class>(c.primes.size(), 1));
        const auto& gs = j.at("gS");
        for (size_t mask = 1; mask < masks; ++mask) {
            std::string key = subset_key(mask);
            if (!gs.contains(key))
                throw ValidationError("model config missing density row for subset {" + key +
                                      "}");
            auto vals = gs.at(key).get<std::vector<double>>();
            if (vals.size() != c.primes.size())
                throw ValidationError("density row length differs from the prime window");
            for (size_t jj = 0; jj < vals.size(); ++jj) c.g[mask][jj] = mpq_class(vals[jj]);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("model config JSON shape error: ") + e.what());
    }
    c.validate();
    return c;
}

std::string model_config_to_json(const RandomModelConfig& config) {
    config.validate();
    nlohmann::json j;
    j["n"] = config.n;
    j["primes"] = config.primes;
    nlohmann::json gs = nlohmann::json::object();
    size_t masks = size_t{1} << config.n;
    for (size_t mask = 1; mask < masks; ++mask) {
        std::vector<double> vals;
        for (const auto& v : config.g[mask]) vals.push_back(mpq_get_d(v.get_mpq_t()));
        gs[subset_key(mask)] = vals;
    }
    j["gS"] = gs;
    return j.dump(2);
}

RandomModelConfig model_from_variety(const VarietySpec& v,
                                     const std::vector<DivisorSpec>& divisors,
                                     uint64_t prime_bound, const PrimeTable& table,
                                     uint64_t budget) {
    if (divisors.empty()) throw ValidationError("model_from_variety: no divisors");
    if (prime_bound > table.limit())
        throw CapacityError("model_from_variety: bound exceeds prime table limit");
    RandomModelConfig c;
    c.n = static_cast<int>(divisors.size());
    for (uint32_t p : table.primes()) {
        if (p > prime_bound) break;
        if (v.is_bad_prime(p)) continue;
        c.primes.push_back(p);
    }
    size_t masks = size_t{1} << c.n;
    c.g.assign(masks, {});
    for (size_t j = 0; j < c.primes.size(); ++j) {
        for (size_t mask = 0; mask < masks; ++mask) {
            std::vector<const DivisorSpec*> active;
            for (int i = 0; i < c.n; ++i)
                if ((mask >> i) & 1) active.push_back(&divisors[i]);
            c.g[mask].push_back(condition_density_mod_p(v, active, c.primes[j], budget));
        }
    }
    c.validate();
    return c;
}

} // namespace omegalab
