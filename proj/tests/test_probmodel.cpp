#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <json.hpp>

#include "omegalab/probmodel.hpp"

using namespace omegalab;

namespace {

double q2d(const mpq_class& q) { return mpq_get_d(q.get_mpq_t()); }
double f2d(const mpf_class& f) { return mpf_get_d(f.get_mpf_t()); }

RandomModelConfig tiny_omega(const std::vector<uint64_t>& primes) {
    RandomModelConfig c;
    c.n = 1;
    c.primes = primes;
    c.g.assign(2, {});
    for (uint64_t p : primes) {
        c.g[0].push_back(1);
        c.g[1].push_back(mpq_class(1, static_cast<unsigned long>(p)));
    }
    return c;
}

} // namespace

TEST_CASE("joint atoms: single coordinate, independence, full correlation") {
    auto c1 = tiny_omega({5});
    auto a1 = joint_atoms(c1, 0);
    CHECK(a1.prob[0] == mpq_class(4, 5));
    CHECK(a1.prob[1] == mpq_class(1, 5));
    CHECK_FALSE(a1.clamped);

    // Independent pair: product measure.
    RandomModelConfig ind;
    ind.n = 2;
    ind.primes = {7};
    ind.g = {{1}, {mpq_class(1, 7)}, {mpq_class(2, 7)}, {mpq_class(2, 49)}};
    auto a2 = joint_atoms(ind, 0);
    CHECK(a2.prob[0] == mpq_class(6, 7) * mpq_class(5, 7));
    CHECK(a2.prob[1] == mpq_class(1, 7) * mpq_class(5, 7));
    CHECK(a2.prob[2] == mpq_class(6, 7) * mpq_class(2, 7));
    CHECK(a2.prob[3] == mpq_class(1, 7) * mpq_class(2, 7));

    // Fully-correlated pair: mass only on (0,0) and (1,1).
    auto table = PrimeTable::build(10);
    auto fc = RandomModelConfig::fully_correlated_pair(5, table);
    for (size_t j = 0; j < fc.primes.size(); ++j) {
        auto a = joint_atoms(fc, j);
        CHECK(a.prob[0] == 1 - mpq_class(1, static_cast<unsigned long>(fc.primes[j])));
        CHECK(a.prob[1] == 0);
        CHECK(a.prob[2] == 0);
        CHECK(a.prob[3] == mpq_class(1, static_cast<unsigned long>(fc.primes[j])));
    }
}

TEST_CASE("joint atoms: marginal consistency on random tables") {
    std::mt19937_64 rng(20260823);
    for (int trial = 0; trial < 1000; ++trial) {
        int n = 1 + static_cast<int>(rng() % 3);
        RandomModelConfig c;
        c.n = n;
        c.primes = {2};
        size_t masks = size_t{1} << n;
        // Random monotone table from a random measure on {0,1}^n:
        // g_S = Prob[X_i = 1 for all i in S] is automatically consistent.
        std::vector<mpq_class> atom(masks);
        mpq_class total = 0;
        for (size_t m = 0; m < masks; ++m) {
            atom[m] = mpq_class(static_cast<unsigned long>(rng() % 100 + 1), 1);
            total += atom[m];
        }
        for (auto& a : atom) a /= total;
        c.g.assign(masks, {mpq_class(0)});
        for (size_t S = 0; S < masks; ++S) {
            mpq_class gS = 0;
            for (size_t m = 0; m < masks; ++m)
                if ((m & S) == S) gS += atom[m];
            c.g[S][0] = gS;
        }
        auto a = joint_atoms(c, 0);
        CHECK_FALSE(a.clamped);
        for (size_t m = 0; m < masks; ++m) CHECK(a.prob[m] == atom[m]);
        // Marginals: Prob[X_i = 1] = g_{i}.
        for (int i = 0; i < n; ++i) {
            mpq_class marg = 0;
            for (size_t m = 0; m < masks; ++m)
                if ((m >> i) & 1) marg += a.prob[m];
            CHECK(marg == c.g[size_t{1} << i][0]);
        }
    }
}

TEST_CASE("inconsistent tables are rejected") {
    RandomModelConfig bad;
    bad.n = 2;
    bad.primes = {5};
    // g_12 far above min(g_1, g_2) violates monotonicity.
    bad.g = {{1}, {mpq_class(1, 5)}, {mpq_class(1, 5)}, {mpq_class(4, 5)}};
    CHECK_THROWS_AS(joint_atoms(bad, 0), ValidationError);

    // Monotone but atom-negative: g_12 > 0 forced negative atom for {1}^c part?
    // g_1 = g_2 = 1/2, g_12 = 0 gives atom(emptyset) = 1 - 1/2 - 1/2 + 0 = 0: fine.
    RandomModelConfig edge;
    edge.n = 2;
    edge.primes = {2};
    edge.g = {{1}, {mpq_class(1, 2)}, {mpq_class(1, 2)}, {mpq_class(0)}};
    auto a = joint_atoms(edge, 0);
    CHECK(a.prob[0] == 0);
    CHECK(a.prob[3] == 0);
}

TEST_CASE("exact mean and variance over small windows") {
    auto c = tiny_omega({2, 3, 5});
    auto mv = exact_mean_variance(c);
    CHECK(mv.M[0] == mpq_class(31, 30));
    CHECK(mv.V2[0] == mpq_class(569, 900));

    auto empty = tiny_omega({});
    auto mv0 = exact_mean_variance(empty);
    CHECK(mv0.M[0] == 0);
    CHECK(mv0.V2[0] == 0);
}

TEST_CASE("variance_Q: normalization, independence, correlation collapse") {
    auto table = PrimeTable::build(1'000);
    auto omega1 = RandomModelConfig::omega_model(1, 1'000, table);
    auto q1 = variance_Q({1.0}, omega1);
    CHECK(q1.Q == doctest::Approx(1.0).epsilon(1e-12));

    auto ind = RandomModelConfig::omega_model(2, 1'000, table);
    auto q2 = variance_Q({1.0, 1.0}, ind);
    CHECK(q2.sigma[0][1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(q2.Q == doctest::Approx(2.0).epsilon(1e-12));

    auto fc = RandomModelConfig::fully_correlated_pair(1'000, table);
    auto qfc = variance_Q({1.0, -1.0}, fc);
    CHECK(qfc.sigma[0][1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(qfc.Q) < 1e-9);

    RandomModelConfig degen;
    degen.n = 1;
    degen.primes = {3};
    degen.g = {{1}, {mpq_class(0)}};
    CHECK_THROWS_AS(variance_Q({1.0}, degen), ValidationError);
}

TEST_CASE("exact mixed moments: low orders against closed forms") {
    auto c = tiny_omega({2, 3, 5});
    CHECK(std::abs(f2d(exact_mixed_moment(c, {1}))) < 1e-100);
    CHECK(f2d(exact_mixed_moment(c, {2})) == doctest::Approx(569.0 / 900).epsilon(1e-14));

    // Third central moment of a sum of independent Bernoulli(g):
    // sum g(1-g)(1-2g).
    mpq_class m3 = 0;
    for (unsigned long p : {2ul, 3ul, 5ul}) {
        mpq_class g(1, p);
        m3 += g * (1 - g) * (1 - 2 * g);
    }
    CHECK(f2d(exact_mixed_moment(c, {3})) == doctest::Approx(q2d(m3)).epsilon(1e-14));

    // Covariance identity: k = (1,1) equals sum (g_12 - g_1 g_2).
    auto table = PrimeTable::build(100);
    auto fc = RandomModelConfig::fully_correlated_pair(50, table);
    mpq_class cov = 0;
    for (uint64_t p : fc.primes) {
        mpq_class g(1, static_cast<unsigned long>(p));
        cov += g - g * g;
    }
    CHECK(f2d(exact_mixed_moment(fc, {1, 1})) == doctest::Approx(q2d(cov)).epsilon(1e-14));

    // k = (2,0) equals V_1^2 of exact_mean_variance.
    auto mv = exact_mean_variance(fc);
    CHECK(f2d(exact_mixed_moment(fc, {2, 0})) == doctest::Approx(q2d(mv.V2[0])).epsilon(1e-14));

    CHECK_THROWS_AS(exact_mixed_moment(c, {7}), ValidationError);
    auto big = RandomModelConfig::omega_model(1, 40'000, PrimeTable::build(40'000));
    CHECK_THROWS_AS(exact_mixed_moment(big, {5}), CapacityError); // > 2000 primes
}

TEST_CASE("exact fourth moment matches Monte Carlo within 4 standard errors") {
    auto table = PrimeTable::build(1'000);
    auto c = RandomModelConfig::omega_model(1, 1'000, table);
    auto rep = moment_report(c, {4}, 200'000, 42);
    CHECK(rep.mcStdErr > 0);
    CHECK(std::abs(rep.exactValue - rep.mcValue) < 4 * rep.mcStdErr);
}

TEST_CASE("sampling: standardized moments and partition independence") {
    auto table = PrimeTable::build(1'000);
    auto c = RandomModelConfig::omega_model(1, 1'000, table);
    const uint64_t N = 50'000;
    auto all = sample_model(c, 7, N);
    double mean = 0, var = 0;
    for (const auto& z : all) mean += z[0];
    mean /= N;
    for (const auto& z : all) var += (z[0] - mean) * (z[0] - mean);
    var /= (N - 1);
    CHECK(std::abs(mean) < 3.0 / std::sqrt(static_cast<double>(N)) * 2);
    CHECK(std::abs(var - 1.0) < 0.02);

    // Partitioned sampling reproduces the same stream bit for bit.
    auto part1 = sample_model(c, 7, 0, 20'000);
    auto part2 = sample_model(c, 7, 20'000, N);
    part1.insert(part1.end(), part2.begin(), part2.end());
    CHECK(part1 == all);

    // Degenerate model: all-zero densities have V = 0.
    RandomModelConfig zero;
    zero.n = 1;
    zero.primes = {2};
    zero.g = {{1}, {mpq_class(0)}};
    CHECK_THROWS_AS(sample_model(zero, 1, 10), ValidationError);
}

TEST_CASE("fully-correlated pair samples agree coordinatewise") {
    auto table = PrimeTable::build(100);
    auto fc = RandomModelConfig::fully_correlated_pair(100, table);
    for (const auto& z : sample_model(fc, 11, 1'000)) CHECK(z[0] == z[1]);
}

TEST_CASE("Lindeberg-style bound on per-prime contributions") {
    auto table = PrimeTable::build(1'000);
    auto c = RandomModelConfig::omega_model(1, 1'000, table);
    auto mv = exact_mean_variance(c);
    double Vmin = std::sqrt(q2d(mv.V2[0]));
    // |Y_p| = |t (X - g)| / V <= |t| / V for every prime and both outcomes.
    for (size_t j = 0; j < c.primes.size(); ++j) {
        double g = q2d(c.g[1][j]);
        CHECK(std::max(g, 1 - g) / Vmin <= 1.0 / Vmin + 1e-15);
    }
}

TEST_CASE("moment growth: standardized |moment_k| <= k! L^k with small L") {
    auto table = PrimeTable::build(2'000);
    auto c = RandomModelConfig::omega_model(1, 1'000, table);
    auto mv = exact_mean_variance(c);
    double V = std::sqrt(q2d(mv.V2[0]));
    double fact = 1;
    for (int k = 1; k <= 6; ++k) {
        fact *= k;
        double mk = std::abs(f2d(exact_mixed_moment(c, {k}))) / std::pow(V, k);
        CHECK(mk <= fact * std::pow(2.0, k));
    }
}

TEST_CASE("model config JSON round trip and variety-derived tables") {
    std::string text = R"({
      "n": 2,
      "primes": [2, 3, 5],
      "gS": {
        "1": [0.5, 0.25, 0.2],
        "2": [0.5, 0.25, 0.2],
        "1,2": [0.25, 0.0625, 0.04]
      }
    })";
    auto c = model_config_from_json(text);
    CHECK(c.n == 2);
    CHECK(c.g[1][0] == mpq_class(1, 2));
    CHECK(c.g[3][2] == mpq_class(0.04)); // exact binary-double embedding
    auto c2 = model_config_from_json(model_config_to_json(c));
    CHECK(c2.g == c.g);
    CHECK(c2.primes == c.primes);

    CHECK_THROWS_AS(model_config_from_json("{\"n\": 1, \"primes\": [2], \"gS\": {}}"),
                    ValidationError);
    CHECK_THROWS_AS(model_config_from_json("not json"), ValidationError);

    // From the affine plane with coordinate divisors: g_1 = g_2 = 1/p,
    // g_12 = 1/p^2.
    VarietySpec plane;
    plane.name = "A2";
    plane.dim = 2;
    auto table = PrimeTable::build(100);
    std::vector<DivisorSpec> divs{{"x1", {IntPolynomial::variable(2, 0)}},
                                  {"x2", {IntPolynomial::variable(2, 1)}}};
    auto vm = model_from_variety(plane, divs, 50, table);
    for (size_t j = 0; j < vm.primes.size(); ++j) {
        unsigned long p = static_cast<unsigned long>(vm.primes[j]);
        CHECK(vm.g[1][j] == mpq_class(1, p));
        CHECK(vm.g[3][j] == mpq_class(1, p) * mpq_class(1, p));
    }
}

TEST_CASE("cutoff bookkeeping") {
    auto c = CutoffParams::from_height(1e6);
    CHECK(c.F == doctest::Approx(1e6));
    double ll = std::log(std::log(1e6));
    CHECK(c.eps == doctest::Approx(std::log(ll) / std::sqrt(ll)));
    CHECK(c.cutoff() == doctest::Approx(1e6));
    CHECK_THROWS_AS(CutoffParams::from_height(2.0), ValidationError);
    CHECK_THROWS_AS(CutoffParams::from_height(1e6, 1.0, 1.5), ValidationError);
}
