// Acceptance suite: twelve numbered criteria, one pass/fail line each.
// Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "omegalab/geometry.hpp"
#include "omegalab/probmodel.hpp"
#include "omegalab/stats.hpp"

using namespace omegalab;

namespace {

std::string config_path(const std::string& name) {
    return std::string(OMEGALAB_CONFIG_DIR) + "/" + name;
}

double q2d(const mpq_class& q) { return mpq_get_d(q.get_mpq_t()); }

struct Outcome {
    bool pass = false;
    std::string note;
};

using Clock = std::chrono::steady_clock;

VarietySpec affine_space(int dim, const std::string& name) {
    VarietySpec v;
    v.name = name;
    v.ambient = Ambient::Affine;
    v.dim = dim;
    return v;
}

bool matrix_close(const std::vector<std::vector<double>>& a,
                  const std::vector<std::vector<double>>& b, double tol) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[i].size(); ++j)
            if (std::abs(a[i][j] - b[i][j]) > tol) return false;
    return true;
}

// ---------------------------------------------------------------------------

Outcome criterion1(double& seconds) {
    auto t0 = Clock::now();
    auto c1 = load_variety_config_file(config_path("conic1.json"));
    auto c2 = load_variety_config_file(config_path("conic2.json"));
    auto c3 = load_variety_config_file(config_path("conic3.json"));
    auto p1 = predict_covariance(c1.variety, c1.divisors, CovMode::Exact);
    auto p2 = predict_covariance(c2.variety, c2.divisors, CovMode::Exact);
    auto p3 = predict_covariance(c3.variety, c3.divisors, CovMode::Exact);
    seconds = std::chrono::duration<double>(Clock::now() - t0).count();

    auto cmat = [](const CovariancePrediction& p) {
        std::vector<std::vector<long>> m;
        for (const auto& row : p.c) {
            std::vector<long> r;
            for (double v : row) r.push_back(std::lround(v));
            m.push_back(r);
        }
        return m;
    };
    bool ok = true;
    ok = ok && cmat(p1) == std::vector<std::vector<long>>{{2, 0, 0}, {0, 2, 0}, {0, 0, 1}};
    ok = ok && cmat(p2) == std::vector<std::vector<long>>{{2, 1, 1}, {1, 2, 1}, {1, 1, 2}};
    ok = ok && cmat(p3) == std::vector<std::vector<long>>{{1, 0, 1}, {0, 1, 1}, {1, 1, 2}};
    double r = 1.0 / std::sqrt(2.0);
    ok = ok && matrix_close(p1.sigma, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, 1e-15);
    ok = ok && matrix_close(p2.sigma, {{1, .5, .5}, {.5, 1, .5}, {.5, .5, 1}}, 1e-15);
    ok = ok && matrix_close(p3.sigma, {{1, 0, r}, {0, 1, r}, {r, r, 1}}, 1e-15);
    ok = ok && seconds < 1.0;
    std::ostringstream note;
    note << "three model conic matrices, exact integer c and sigma";
    return {ok, note.str()};
}

Outcome criterion2(double&) {
    auto c1 = load_variety_config_file(config_path("conic1.json"));
    auto c2 = load_variety_config_file(config_path("conic2.json"));
    auto c3 = load_variety_config_file(config_path("conic3.json"));
    auto p1 = predict_covariance(c1.variety, c1.divisors, CovMode::Exact);
    auto p2 = predict_covariance(c2.variety, c2.divisors, CovMode::Exact);
    auto p3 = predict_covariance(c3.variety, c3.divisors, CovMode::Exact);
    bool ok = p1.rank == 3 && p2.rank == 3 && p3.rank == 2;
    ok = ok && divisor_group_rank(c1.variety, c1.divisors) == 3;
    ok = ok && divisor_group_rank(c2.variety, c2.divisors) == 3;
    ok = ok && divisor_group_rank(c3.variety, c3.divisors) == 2;
    return {ok, "ranks 3, 3, 2 from the incidence matrix"};
}

Outcome criterion3(double& seconds) {
    auto t0 = Clock::now();
    std::mt19937_64 rng(314159);
    auto rnd = [&](int lo, int hi) {
        return lo + static_cast<int64_t>(rng() % static_cast<uint64_t>(hi - lo + 1));
    };
    std::vector<DivisorSpec> divs;
    for (int i = 0; i < 3; ++i)
        divs.push_back({"x" + std::to_string(i + 1), {IntPolynomial::variable(3, i)}});

    int bad = 0;
    for (int trial = 0; trial < 200; ++trial) {
        int64_t a = 0, b = 0, u = 0, v = 0, c = 0;
        do {
            a = rnd(-20, 20);
            b = rnd(-20, 20);
            u = rnd(1, 10);
            v = rnd(1, 10);
            c = -(a * u * u + b * v * v);
        } while (a == 0 || b == 0 || c == 0);
        VarietySpec conic;
        conic.name = "diag";
        conic.ambient = Ambient::Projective;
        conic.dim = 2;
        auto sq = [](int i) {
            auto x = IntPolynomial::variable(3, i);
            return x * x;
        };
        conic.equations.push_back(sq(0) * mpz_class(a) + sq(1) * mpz_class(b) +
                                  sq(2) * mpz_class(c));
        conic.enumerator = EnumeratorKind::ConicParametrization;
        conic.rational_point = canonicalize_projective({u, v, 1}).coords;
        auto pred = predict_covariance(conic, divs, CovMode::Exact);
        auto eig = symmetric_eigenvalues(pred.sigma);
        bool nonsingular = std::abs(eig.front()) > 1e-9 && pred.rank == 3;
        if (!nonsingular) ++bad;
    }
    for (int trial = 0; trial < 50; ++trial) {
        int64_t c = 0;
        do {
            c = rnd(-25, 25);
        } while (c == 0);
        VarietySpec conic;
        conic.name = "split";
        conic.ambient = Ambient::Projective;
        conic.dim = 2;
        auto x = [](int i) { return IntPolynomial::variable(3, i); };
        conic.equations.push_back(x(0) * x(1) - x(2) * x(2) * mpz_class(c));
        conic.enumerator = EnumeratorKind::ConicParametrization;
        conic.rational_point = std::vector<int64_t>{1, 0, 0};
        auto pred = predict_covariance(conic, divs, CovMode::Exact);
        auto eig = symmetric_eigenvalues(pred.sigma);
        bool singular = std::abs(eig.front()) <= 1e-9 && pred.rank == 2;
        if (!singular) ++bad;
    }
    seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    std::ostringstream note;
    note << "200 smooth diagonal conics nonsingular, 50 split conics singular, " << bad
         << " misclassified";
    return {bad == 0 && seconds < 60.0, note.str()};
}

Outcome criterion4(double& seconds, const PrimeTable& table) {
    auto t0 = Clock::now();
    struct Case {
        VarietySpec v;
        std::vector<DivisorSpec> divisors;
    };
    std::vector<Case> cases;
    {
        Case plane{affine_space(2, "A2"), {}};
        plane.divisors.push_back({"x1", {IntPolynomial::variable(2, 0)}});
        plane.divisors.push_back({"x2", {IntPolynomial::variable(2, 1)}});
        cases.push_back(plane);
    }
    {
        auto cfg = load_variety_config_file(config_path("pythagorean.json"));
        cases.push_back({cfg.variety, cfg.divisors});
    }
    {
        auto cfg = load_variety_config_file(config_path("det2_k1.json"));
        cases.push_back({cfg.variety, cfg.divisors});
    }

    uint64_t pairs = 0, failures = 0;
    for (const auto& cs : cases) {
        auto good_squarefree = [&](uint64_t m) {
            auto f = factorize(static_cast<int64_t>(m), table);
            for (const auto& [p, e] : f.factors)
                if (e > 1 || cs.v.is_bad_prime(p)) return false;
            return true;
        };
        size_t nd = cs.divisors.size();
        auto g1 = [&](size_t which, uint64_t m) {
            std::vector<uint64_t> d(nd, 1);
            d[which] = m;
            return density_g(cs.v, cs.divisors, d);
        };
        std::map<uint64_t, mpq_class> cache0;
        auto g0 = [&](uint64_t m) {
            auto it = cache0.find(m);
            if (it != cache0.end()) return it->second;
            return cache0[m] = g1(0, m);
        };
        for (uint64_t m = 2; m <= 450; ++m) {
            if (!good_squarefree(m)) continue;
            for (uint64_t m2 = 2; m * m2 <= 900; ++m2) {
                if (std::gcd(m, m2) != 1 || !good_squarefree(m2)) continue;
                ++pairs;
                // Same divisor at coprime moduli.
                if (g0(m) * g0(m2) != g0(m * m2)) ++failures;
                // Different divisors at coprime moduli.
                std::vector<uint64_t> d(nd, 1);
                d[0] = m;
                d[1] = m2;
                if (g1(0, m) * g1(1, m2) != density_g(cs.v, cs.divisors, d)) ++failures;
            }
        }
    }
    seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    std::ostringstream note;
    note << "g(d)g(d') = g(dd') over " << pairs
         << " coprime squarefree pairs per variety, lcm <= 900, " << failures << " failures";
    return {failures == 0 && seconds < 300.0, note.str()};
}

Outcome criterion5(double& seconds, const PrimeTable& table) {
    auto t0 = Clock::now();
    VarietySpec line = affine_space(1, "A1");
    DivisorSpec dx{"x", {parse_polynomial("x1", 1)}};
    DivisorSpec dxx{"x(x-1)", {parse_polynomial("x1^2 - x1", 1)}};
    auto fit1 = mertens_sum(line, dx, 1'000'000, table);
    auto fit2 = mertens_sum(line, dxx, 1'000'000, table);
    auto cfg3 = load_variety_config_file(config_path("conic3.json"));
    auto est = common_components_estimate(cfg3.variety, cfg3.divisor("x1"),
                                          cfg3.divisor("x3"), 10'000, table);
    seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    bool ok = fit1.c >= 0.95 && fit1.c <= 1.05 && fit2.c >= 1.9 && fit2.c <= 2.1 &&
              est.regression >= 0.8 && est.regression <= 1.2 && seconds < 600.0;
    std::ostringstream note;
    note.precision(4);
    note << "Mertens c(x)=" << fit1.c << ", c(x(x-1))=" << fit2.c
         << ", conic pair estimate=" << est.regression;
    return {ok, note.str()};
}

Outcome criterion6(double& seconds, const PrimeTable& table) {
    auto t0 = Clock::now();
    bool ok = true;
    double worst = 0;
    for (const char* name : {"conic1.json", "conic2.json", "conic3.json"}) {
        auto cfg = load_variety_config_file(config_path(name));
        auto exact = predict_covariance(cfg.variety, cfg.divisors, CovMode::Exact);
        CovOptions co;
        co.T = 10'000;
        co.table = &table;
        auto est = predict_covariance(cfg.variety, cfg.divisors, CovMode::Estimate, co);
        for (size_t i = 0; i < exact.sigma.size(); ++i)
            for (size_t j = 0; j < exact.sigma.size(); ++j)
                worst = std::max(worst, std::abs(exact.sigma[i][j] - est.sigma[i][j]));
        ok = ok && matrix_close(exact.sigma, est.sigma, 0.2);
    }
    seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    std::ostringstream note;
    note.precision(4);
    note << "exact vs estimate sigma at T=10^4, max entry deviation " << worst;
    return {ok, note.str()};
}

bool moments_vs_mc(const RandomModelConfig& config,
                   const std::vector<std::vector<int>>& ks, uint64_t N, uint64_t seed,
                   double& worst_z) {
    auto samples = sample_model(config, seed, N);
    auto mv = exact_mean_variance(config);
    bool ok = true;
    for (const auto& k : ks) {
        mpf_class ex = exact_mixed_moment(config, k);
        double scale = 1;
        for (int i = 0; i < config.n; ++i)
            scale *= std::pow(std::sqrt(q2d(mv.V2[i])), k[i]);
        double exact = mpf_get_d(ex.get_mpf_t()) / scale;
        double sum = 0, sumsq = 0;
        for (const auto& z : samples) {
            double prod = 1;
            for (int i = 0; i < config.n; ++i)
                for (int e = 0; e < k[i]; ++e) prod *= z[i];
            sum += prod;
            sumsq += prod * prod;
        }
        double mean = sum / static_cast<double>(N);
        double var = (sumsq - N * mean * mean) / static_cast<double>(N - 1);
        double se = std::sqrt(std::max(var, 0.0) / static_cast<double>(N));
        if (se == 0) se = 1e-300;
        double zscore = std::abs(exact - mean) / se;
        worst_z = std::max(worst_z, zscore);
        ok = ok && zscore < 4.0;
    }
    return ok;
}

Outcome criterion7(double& seconds, const PrimeTable& table) {
    auto t0 = Clock::now();
    double worst_z = 0;
    auto omega1 = RandomModelConfig::omega_model(1, 1'000, table);
    std::vector<std::vector<int>> ks1{{1}, {2}, {3}, {4}};
    bool ok = moments_vs_mc(omega1, ks1, 1'000'000, 20260823, worst_z);

    auto fc = RandomModelConfig::fully_correlated_pair(1'000, table);
    std::vector<std::vector<int>> ks2;
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; a + b <= 4; ++b)
            if (a + b >= 1) ks2.push_back({a, b});
    ok = moments_vs_mc(fc, ks2, 1'000'000, 20260824, worst_z) && ok;
    seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    std::ostringstream note;
    note.precision(3);
    note << "exact vs MC (N=10^6) for all |k| <= 4, worst |z| = " << worst_z;
    return {ok && seconds < 600.0, note.str()};
}

Outcome criterion8(double& seconds, const PrimeTable& table) {
    auto t0 = Clock::now();
    std::vector<uint64_t> cutoffs{100, 1'000, 10'000, 100'000};
    std::vector<double> ks_values;
    for (uint64_t cutoff : cutoffs) {
        auto model = RandomModelConfig::omega_model(1, cutoff, table);
        auto samples = sample_model(model, 20260825, 200'000);
        auto stat = projection_test(samples, {1.0}, 1.0);
        ks_values.push_back(stat.ks);
    }
    seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    bool monotone = ks_values[0] > ks_values[1] && ks_values[1] > ks_values[2] &&
                    ks_values[2] > ks_values[3];
    bool small = ks_values[3] < 0.03;
    std::ostringstream note;
    note.precision(4);
    note << "KS at cutoffs 10^2..10^5: ";
    for (double v : ks_values) note << v << " ";
    note << (monotone ? "(decreasing)" : "(NOT decreasing)") << ", final "
         << (small ? "< 0.03" : ">= 0.03");
    return {monotone && small, note.str()};
}

Outcome criterion9(double& seconds, const PrimeTable& table) {
    auto t0 = Clock::now();
    const uint64_t n = 10'000'000;
    std::vector<uint8_t> om(n + 2, 0);
    for (uint32_t p : table.primes()) {
        if (p > n) break;
        for (uint64_t m = p; m <= n + 1; m += p) ++om[m];
    }
    long double s1 = 0, s2 = 0;
    uint64_t cnt = 0;
    for (uint64_t m = 2; m <= n; ++m) {
        s1 += om[m];
        s2 += static_cast<long double>(om[m]) * om[m];
        ++cnt;
    }
    long double mean = s1 / cnt;
    long double var = s2 / cnt - mean * mean;
    long double cross = 0;
    for (uint64_t m = 2; m < n; ++m)
        cross += (om[m] - mean) * (om[m + 1] - mean);
    long double rho = (cross / (cnt - 1)) / var;
    double target = std::log(std::log(1e7));
    seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    bool ok = std::abs(static_cast<double>(var) - target) <= 0.25 * target &&
              std::abs(static_cast<double>(rho)) < 0.05 && seconds < 300.0;
    std::ostringstream note;
    note.precision(4);
    note << "Var(omega) = " << static_cast<double>(var) << " vs log log 10^7 = " << target
         << ", corr(omega(m), omega(m+1)) = " << static_cast<double>(rho);
    return {ok, note.str()};
}

Outcome criterion10(double& seconds, const PrimeTable& table) {
    auto t0 = Clock::now();
    auto cfg = load_variety_config_file(config_path("pythagorean.json"));
    auto points = enumerate_points(cfg.variety, 1'000'000);
    EmpiricalSummary sum(3, 0);
    for (const auto& pt : points) {
        // One canonical representative per primitive triple: positive
        // coordinates with the even leg in slot 2, as in the parametrization
        // (m^2 - k^2, 2mk, m^2 + k^2). This also drops the degenerate points.
        if (pt.coords[0] <= 0 || pt.coords[1] <= 0 || pt.coords[2] <= 0 ||
            pt.coords[1] % 2 != 0)
            continue;
        std::vector<double> om(3);
        for (int d = 0; d < 3; ++d)
            om[d] = omega_Z(pt, cfg.variety, cfg.divisors[d], table);
        sum.accumulate(om);
    }
    auto corr = sum.correlation();
    double worst = std::max({std::abs(corr[0][1]), std::abs(corr[0][2]), std::abs(corr[1][2])});
    seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    bool ok = worst < 0.15 && seconds < 600.0;
    std::ostringstream note;
    note.precision(4);
    note << sum.count() << " primitive triples to B=10^6, off-diagonal rho = (" << corr[0][1]
         << ", " << corr[0][2] << ", " << corr[1][2] << ")";
    return {ok, note.str()};
}

Outcome criterion11(double& seconds, const PrimeTable& table) {
    auto t0 = Clock::now();
    auto cfg = load_variety_config_file(config_path("det2_k1.json"));
    EnumOptions eo;
    eo.table = &table;
    auto r100 = check_equidistribution(cfg.variety, 5, 100, eo);
    auto r1000 = check_equidistribution(cfg.variety, 5, 1'000, eo);
    seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    bool ok = r1000.max_deviation <= 0.5 * r100.max_deviation;
    std::ostringstream note;
    note.precision(4);
    note << "SL2 mod 5 max deviation: " << r100.max_deviation << " at B=10^2, "
         << r1000.max_deviation << " at B=10^3";
    return {ok, note.str()};
}

Outcome criterion12(double& seconds) {
    auto t0 = Clock::now();
    std::string bin = OMEGALAB_BIN;
    std::string cfg = config_path("pythagorean.json");
    auto run = [&](const std::string& outfile, int workers) {
        std::string cmd = bin + " pipeline --config " + cfg +
                          " --B 2000 --seed 17 --workers " + std::to_string(workers) + " > " +
                          outfile + " 2>/dev/null";
        return std::system(cmd.c_str()) == 0;
    };
    auto slurp = [](const std::string& path) {
        std::ifstream f(path, std::ios::binary);
        std::stringstream ss;
        ss << f.rdbuf();
        return ss.str();
    };
    bool ok = run("/tmp/omegalab_acc_a.json", 1) && run("/tmp/omegalab_acc_b.json", 1) &&
              run("/tmp/omegalab_acc_c.json", 8);
    std::string a = slurp("/tmp/omegalab_acc_a.json");
    ok = ok && !a.empty() && a == slurp("/tmp/omegalab_acc_b.json") &&
         a == slurp("/tmp/omegalab_acc_c.json");
    seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return {ok, "pipeline rerun and workers 1 vs 8 byte-identical"};
}

} // namespace

int main() {
    std::cout.setf(std::ios::unitbuf);
    PrimeTable table = PrimeTable::build(10'000'000);
    int failures = 0;
    auto report = [&](int id, Outcome (*fn)(double&)) {
        double seconds = 0;
        Outcome o;
        try {
            o = fn(seconds);
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %2d: %s — %s (%.2f s)\n", id, o.pass ? "PASS" : "FAIL",
                    o.note.c_str(), seconds);
        if (!o.pass) ++failures;
    };
    auto report_t = [&](int id, Outcome (*fn)(double&, const PrimeTable&)) {
        double seconds = 0;
        Outcome o;
        try {
            o = fn(seconds, table);
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %2d: %s — %s (%.2f s)\n", id, o.pass ? "PASS" : "FAIL",
                    o.note.c_str(), seconds);
        if (!o.pass) ++failures;
    };

    report(1, criterion1);
    report(2, criterion2);
    report(3, criterion3);
    report_t(4, criterion4);
    report_t(5, criterion5);
    report_t(6, criterion6);
    report_t(7, criterion7);
    report_t(8, criterion8);
    report_t(9, criterion9);
    report_t(10, criterion10);
    report_t(11, criterion11);
    report(12, criterion12);

    if (failures) {
        std::printf("%d of 12 criteria failed\n", failures);
        return 1;
    }
    std::printf("all 12 criteria passed\n");
    return 0;
}
