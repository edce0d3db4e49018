#include "omegalab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "omegalab/poly_factor.hpp"

namespace omegalab {

int omega_Z(const IntegralPoint& x, const VarietySpec& host, const DivisorSpec& Z,
            const PrimeTable& table) {
    if (Z.generators.empty()) throw ValidationError("omega_Z: divisor with no generators");
    if (static_cast<int>(x.coords.size()) != host.ncoords())
        throw ValidationError("omega_Z: coordinate count mismatch");
    std::vector<mpz_class> xv(x.coords.begin(), x.coords.end());
    mpz_class g = 0;
    for (const auto& gen : Z.generators) {
        mpz_class v = gen.evaluate(xv);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    }
    if (g == 0)
        throw ValidationError("omega_Z: point lies on the divisor (all generators vanish)");
    if (g == 1) return 0;
    return omega(g, table);
}

namespace {

bool is_conic_with_point(const VarietySpec& v) {
    return v.ambient == Ambient::Projective && v.dim == 2 && v.equations.size() == 1 &&
           v.equations[0].degree() == 2 && v.rational_point.has_value();
}

using ComponentSet = std::set<IntPolynomial>;

ComponentSet distinct_factors(const FactorList& fl) {
    ComponentSet out;
    for (const auto& [f, e] : fl.factors) {
        (void)e;
        out.insert(f);
    }
    return out;
}

ComponentSet intersect(const ComponentSet& a, const ComponentSet& b) {
    ComponentSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::inserter(out, out.begin()));
    return out;
}

// Distinct components of the zero locus of one polynomial constraint;
// nullopt when the constraint is trivial (zero polynomial).
std::optional<ComponentSet> constraint_components(const IntPolynomial& g, bool binary) {
    if (g.is_zero()) return std::nullopt;
    if (g.is_constant()) return ComponentSet{}; // nonzero constant: empty locus
    return distinct_factors(binary ? factor_binary_form(g) : factor_univariate(g));
}

} // namespace

std::vector<IntPolynomial> components_exact(const VarietySpec& host, const DivisorSpec& D) {
    host.validate();
    if (D.generators.empty()) throw ValidationError("divisor with no generators");

    std::vector<std::optional<ComponentSet>> per_gen;
    if (is_conic_with_point(host)) {
        std::vector<IntPolynomial> param = conic_parametrization(host);
        for (const auto& g : D.generators)
            per_gen.push_back(constraint_components(g.substitute(param), /*binary=*/true));
    } else if (host.equations.empty() && host.ambient == Ambient::Affine) {
        std::vector<int> vars;
        bool homogeneous = true;
        for (const auto& g : D.generators) {
            for (int v : g.support_vars())
                if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
            homogeneous = homogeneous && g.is_homogeneous();
        }
        if (vars.size() <= 1) {
            for (const auto& g : D.generators)
                per_gen.push_back(constraint_components(g, /*binary=*/false));
        } else if (vars.size() == 2 && homogeneous) {
            for (const auto& g : D.generators)
                per_gen.push_back(constraint_components(g, /*binary=*/true));
        } else {
            throw ValidationError(
                "divisor outside the exact-capable class; use the estimator mode");
        }
    } else {
        throw ValidationError("divisor outside the exact-capable class; use the estimator mode");
    }

    std::optional<ComponentSet> acc;
    for (const auto& cs : per_gen) {
        if (!cs) continue; // vanishing constraint: no condition
        acc = acc ? intersect(*acc, *cs) : *cs;
    }
    if (!acc)
        throw ValidationError("divisor equals the whole host (all generators vanish on it)");
    return std::vector<IntPolynomial>(acc->begin(), acc->end());
}

int common_components_exact(const VarietySpec& host, const DivisorSpec& D1,
                            const DivisorSpec& D2) {
    auto c1 = components_exact(host, D1);
    auto c2 = components_exact(host, D2);
    ComponentSet s1(c1.begin(), c1.end());
    int shared = 0;
    for (const auto& f : c2) shared += s1.count(f);
    return shared;
}

ComponentEstimate common_components_estimate(const VarietySpec& host, const DivisorSpec& D1,
                                             const DivisorSpec& D2, uint64_t T,
                                             const PrimeTable& table, uint64_t budget) {
    host.validate();
    if (T > table.limit())
        throw CapacityError("common_components_estimate: T exceeds prime table limit");
    int dimX = host.dim - static_cast<int>(host.equations.size());
    if (dimX < 1) throw ValidationError("estimator requires a positive-dimensional host");

    std::vector<const DivisorSpec*> active{&D1, &D2};
    long double sum = 0;
    long double sx = 0, sy = 0, sxx = 0, sxy = 0;
    long double dsum = 0, dsumsq = 0;
    uint64_t tail_n = 0;
    long double tail_start = std::sqrt(static_cast<long double>(T));

    ComponentEstimate out;
    for (uint32_t p : table.primes()) {
        if (p > T) break;
        if (host.is_bad_prime(p)) continue;
        uint64_t count = condition_count_mod_p(host, active, p, budget);
        mpq_class dens = condition_density_mod_p(host, active, p, budget);
        sum += static_cast<long double>(mpq_get_d(dens.get_mpq_t()));
        ++out.primes_used;
        if (static_cast<long double>(p) > tail_start) {
            long double x = std::log(std::log(static_cast<long double>(p)));
            sx += x;
            sy += sum;
            sxx += x * x;
            sxy += x * sum;
            long double direct =
                static_cast<long double>(count) /
                std::pow(static_cast<long double>(p), static_cast<long double>(dimX - 1));
            dsum += direct;
            dsumsq += direct * direct;
            ++tail_n;
        }
    }
    if (tail_n >= 2) {
        long double denom = tail_n * sxx - sx * sx;
        if (denom != 0) out.regression = static_cast<double>((tail_n * sxy - sx * sy) / denom);
        long double mean = dsum / tail_n;
        out.direct_mean = static_cast<double>(mean);
        long double var = (dsumsq - tail_n * mean * mean) / (tail_n - 1);
        out.direct_stderr = static_cast<double>(std::sqrt(std::max<long double>(var, 0) /
                                                          tail_n));
    } else if (tail_n == 1) {
        out.direct_mean = static_cast<double>(dsum);
    }
    return out;
}

std::vector<double> symmetric_eigenvalues(std::vector<std::vector<double>> m) {
    int n = static_cast<int>(m.size());
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += m[i][j] * m[i][j];
        if (off < 1e-24) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(m[p][q]) < 1e-300) continue;
                double theta = (m[q][q] - m[p][p]) / (2 * m[p][q]);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1));
                double c = 1 / std::sqrt(t * t + 1), s = t * c;
                for (int k = 0; k < n; ++k) {
                    double mkp = m[k][p], mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for (int k = 0; k < n; ++k) {
                    double mpk = m[p][k], mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (int i = 0; i < n; ++i) eig[i] = m[i][i];
    std::sort(eig.begin(), eig.end());
    return eig;
}

namespace {

int incidence_rank(const std::vector<std::vector<IntPolynomial>>& decomps) {
    std::set<IntPolynomial> all;
    for (const auto& d : decomps) all.insert(d.begin(), d.end());
    std::vector<IntPolynomial> cols(all.begin(), all.end());
    std::vector<std::vector<mpq_class>> m;
    for (const auto& d : decomps) {
        std::set<IntPolynomial> s(d.begin(), d.end());
        std::vector<mpq_class> row;
        for (const auto& c : cols) row.emplace_back(s.count(c) ? 1 : 0);
        m.push_back(std::move(row));
    }
    // Exact Gaussian elimination over Q.
    int rank = 0;
    size_t rows = m.size(), colsn = cols.size();
    size_t r = 0;
    for (size_t c = 0; c < colsn && r < rows; ++c) {
        size_t piv = r;
        while (piv < rows && m[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[r]);
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            mpq_class f = m[i][c] / m[r][c];
            for (size_t j = c; j < colsn; ++j) m[i][j] -= f * m[r][j];
        }
        ++r;
        ++rank;
    }
    return rank;
}

} // namespace

int divisor_group_rank(const VarietySpec& host, const std::vector<DivisorSpec>& divisors) {
    std::vector<std::vector<IntPolynomial>> decomps;
    for (const auto& d : divisors) decomps.push_back(components_exact(host, d));
    return incidence_rank(decomps);
}

CovariancePrediction predict_covariance(const VarietySpec& host,
                                        const std::vector<DivisorSpec>& divisors, CovMode mode,
                                        const CovOptions& opts) {
    if (divisors.empty()) throw ValidationError("predict_covariance: no divisors");
    size_t n = divisors.size();
    CovariancePrediction pred;
    pred.mode = mode;
    for (const auto& d : divisors) pred.labels.push_back(d.label);
    pred.c.assign(n, std::vector<double>(n, 0));
    pred.sigma.assign(n, std::vector<double>(n, 0));

    if (mode == CovMode::Exact) {
        std::vector<std::vector<IntPolynomial>> decomps;
        for (const auto& d : divisors) {
            decomps.push_back(components_exact(host, d));
            if (decomps.back().empty())
                throw ValidationError("divisor \"" + d.label +
                                      "\" has no components after reduction");
        }
        for (size_t i = 0; i < n; ++i) {
            ComponentSet si(decomps[i].begin(), decomps[i].end());
            for (size_t j = i; j < n; ++j) {
                int shared = 0;
                for (const auto& f : decomps[j]) shared += si.count(f);
                pred.c[i][j] = pred.c[j][i] = shared;
            }
        }
        pred.rank = incidence_rank(decomps);
    } else {
        PrimeTable own = opts.table ? PrimeTable::build(2) : PrimeTable::build(opts.T);
        const PrimeTable& table = opts.table ? *opts.table : own;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i; j < n; ++j) {
                ComponentEstimate est = common_components_estimate(
                    host, divisors[i], divisors[j], opts.T, table, opts.budget);
                pred.c[i][j] = pred.c[j][i] = est.regression;
            }
        for (size_t i = 0; i < n; ++i)
            if (pred.c[i][i] <= 0)
                throw ValidationError("estimated c_{i,i} <= 0 for divisor \"" +
                                      divisors[i].label + "\"");
    }

    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            pred.sigma[i][j] = (i == j) ? 1.0
                                        : pred.c[i][j] / std::sqrt(pred.c[i][i] * pred.c[j][j]);

    if (mode == CovMode::Estimate) {
        // PSD repair: shrink toward the identity just enough to clear noise-
        // induced negative eigenvalues, preserving the unit diagonal.
        auto eig = symmetric_eigenvalues(pred.sigma);
        if (eig.front() < -1e-9) {
            double delta = -eig.front() * (1 + 1e-12);
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j)
                    pred.sigma[i][j] = (pred.sigma[i][j] + (i == j ? delta : 0)) / (1 + delta);
        }
        auto eig2 = symmetric_eigenvalues(pred.sigma);
        double tol = 1e-9 * std::max(std::abs(eig2.front()), std::abs(eig2.back()));
        pred.rank = 0;
        for (double e : eig2)
            if (std::abs(e) > tol) ++pred.rank;
    }
    return pred;
}

std::string covariance_to_json(const CovariancePrediction& pred) {
    nlohmann::json j;
    j["labels"] = pred.labels;
    if (pred.mode == CovMode::Exact) {
        std::vector<std::vector<long>> ci;
        for (const auto& row : pred.c) {
            std::vector<long> r;
            for (double v : row) r.push_back(std::lround(v));
            ci.push_back(std::move(r));
        }
        j["c"] = ci;
    } else {
        j["c"] = pred.c;
    }
    j["sigma"] = pred.sigma;
    j["rank"] = pred.rank;
    j["mode"] = pred.mode == CovMode::Exact ? "exact" : "estimate";
    return j.dump(2);
}

} // namespace omegalab
