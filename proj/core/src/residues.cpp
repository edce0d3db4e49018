#include "omegalab/residues.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>

#include "omegalab/poly_factor.hpp"

namespace omegalab {

namespace {

using u128 = unsigned __int128;

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t p) {
    return static_cast<uint64_t>(static_cast<u128>(a) * b % p);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t p) {
    uint64_t r = 1;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

uint64_t invmod(uint64_t a, uint64_t p) { return powmod(a % p, p - 2, p); }

std::vector<uint64_t> factor_squarefree_modulus(uint64_t Q) {
    if (Q == 0) throw ValidationError("modulus must be positive");
    std::vector<uint64_t> primes;
    uint64_t v = Q;
    for (uint64_t p = 2; p * p <= v; ++p) {
        if (v % p) continue;
        v /= p;
        if (v % p == 0) throw ValidationError("modulus " + std::to_string(Q) + " not squarefree");
        primes.push_back(p);
    }
    if (v > 1) primes.push_back(v);
    return primes;
}

// Polynomial with coefficients reduced mod p, for tight evaluation loops.
struct ModPoly {
    std::vector<std::pair<Exponents, uint64_t>> terms;
    int nvars;

    static ModPoly from(const IntPolynomial& f, uint64_t p) {
        ModPoly out;
        out.nvars = f.nvars();
        for (const auto& [e, c] : f.terms()) {
            mpz_class r = c % static_cast<unsigned long>(p);
            if (r < 0) r += static_cast<unsigned long>(p);
            uint64_t cc = r.get_ui();
            if (cc) out.terms.emplace_back(e, cc);
        }
        return out;
    }

    bool is_zero() const { return terms.empty(); }

    uint64_t eval(const std::vector<uint64_t>& x, uint64_t p) const {
        uint64_t s = 0;
        for (const auto& [e, c] : terms) {
            uint64_t t = c;
            for (int v = 0; v < nvars; ++v)
                for (uint32_t i = 0; i < e[v]; ++i) t = mulmod(t, x[v], p);
            s += t;
            if (s >= p) s -= p;
        }
        return s;
    }
};

std::vector<IntPolynomial> active_generators(const std::vector<const DivisorSpec*>& active) {
    std::vector<IntPolynomial> gens;
    for (const DivisorSpec* d : active)
        for (const auto& g : d->generators) gens.push_back(g);
    return gens;
}

// ---- host classification --------------------------------------------------

bool is_affine_space(const VarietySpec& v) {
    return v.ambient == Ambient::Affine && v.equations.empty();
}

std::optional<int64_t> det2_constant(const VarietySpec& v) {
    if (v.ambient != Ambient::Affine || v.dim != 4 || v.equations.size() != 1)
        return std::nullopt;
    const IntPolynomial& f = v.equations[0];
    int64_t k = 0;
    bool saw_ad = false, saw_bc = false;
    for (const auto& [e, c] : f.terms()) {
        uint32_t total = e[0] + e[1] + e[2] + e[3];
        if (total == 0) {
            if (!c.fits_slong_p()) return std::nullopt;
            k = -c.get_si();
        } else if (e == Exponents{1, 0, 0, 1} && c == 1) {
            saw_ad = true;
        } else if (e == Exponents{0, 1, 1, 0} && c == -1) {
            saw_bc = true;
        } else {
            return std::nullopt;
        }
    }
    if (!saw_ad || !saw_bc) return std::nullopt;
    return k;
}

struct ConicData {
    std::vector<IntPolynomial> param; // x_i(u, v), binary forms of degree 2
    mpz_class disc;                   // det of the symmetric Gram matrix
    int t;                            // reference coordinate (line x_t = 0)
    int64_t Pt;
};

std::optional<ConicData> conic_data(const VarietySpec& v) {
    if (v.ambient != Ambient::Projective || v.dim != 2 || v.equations.size() != 1 ||
        v.equations[0].degree() != 2 || !v.rational_point)
        return std::nullopt;
    const IntPolynomial& f = v.equations[0];
    // Symmetric Gram matrix M with x^T M x = 2 Q(x).
    mpz_class M[3][3] = {};
    for (const auto& [e, c] : f.terms()) {
        int i = -1, j = -1;
        for (int k = 0; k < 3; ++k) {
            if (e[k] == 2) i = j = k;
            if (e[k] == 1) (i < 0 ? i : j) = k;
        }
        if (i == j) M[i][i] = 2 * c;
        else M[i][j] = M[j][i] = c;
    }
    ConicData out;
    out.disc = M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
               M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
               M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
    const std::vector<int64_t>& P = *v.rational_point;
    out.t = 0;
    for (int i = 0; i < 3; ++i)
        if (std::abs(P[i]) > std::abs(P[out.t])) out.t = i;
    out.Pt = P[out.t];
    int a = -1, b = -1;
    for (int i = 0; i < 3; ++i) {
        if (i == out.t) continue;
        (a < 0 ? a : b) = i;
    }
    // x(u, v) = Q(y) P - (2B(P, y)) y with y = u e_a + v e_b.
    IntPolynomial u = IntPolynomial::variable(2, 0), w = IntPolynomial::variable(2, 1);
    std::vector<IntPolynomial> y(3, IntPolynomial(2));
    y[a] = u;
    y[b] = w;
    std::vector<IntPolynomial> Ppoly;
    for (int i = 0; i < 3; ++i) Ppoly.push_back(IntPolynomial::constant(2, P[i]));
    IntPolynomial Qy = f.substitute(y);
    // 2B(P, y) = Q(P + y) - Q(P) - Q(y) = Q(P + y) - Q(y).
    std::vector<IntPolynomial> Py(3, IntPolynomial(2));
    for (int i = 0; i < 3; ++i) Py[i] = Ppoly[i] + y[i];
    IntPolynomial pol = f.substitute(Py) - Qy;
    for (int i = 0; i < 3; ++i) out.param.push_back(Qy * Ppoly[i] - pol * y[i]);
    return out;
}

bool conic_good_prime(const ConicData& cd, uint64_t p) {
    if (p == 2) return false;
    if (mpz_divisible_ui_p(cd.disc.get_mpz_t(), static_cast<unsigned long>(p))) return false;
    int64_t pt = cd.Pt % static_cast<int64_t>(p);
    return pt != 0;
}

// ---- brute-force counting -------------------------------------------------

// Calls fn(coords) for every affine tuple in (F_p)^d.
template <typename Fn>
void for_each_affine(uint64_t p, int d, uint64_t budget, Fn&& fn) {
    double total = std::pow(static_cast<double>(p), d);
    if (total > static_cast<double>(budget))
        throw CapacityError("residue brute force: p^d exceeds budget");
    std::vector<uint64_t> x(d, 0);
    while (true) {
        fn(x);
        int i = d - 1;
        while (i >= 0 && x[i] == p - 1) {
            x[i] = 0;
            --i;
        }
        if (i < 0) break;
        ++x[i];
    }
}

// Calls fn(coords) for every canonical projective representative in P^{d-1}(F_p):
// first nonzero coordinate scaled to 1.
template <typename Fn>
void for_each_projective(uint64_t p, int d, uint64_t budget, Fn&& fn) {
    double total = std::pow(static_cast<double>(p), d - 1) * 1.2;
    if (total > static_cast<double>(budget))
        throw CapacityError("residue brute force: projective space exceeds budget");
    for (int lead = 0; lead < d; ++lead) {
        std::vector<uint64_t> x(d, 0);
        x[lead] = 1;
        int free = d - lead - 1;
        std::vector<uint64_t> rest(free, 0);
        while (true) {
            for (int i = 0; i < free; ++i) x[lead + 1 + i] = rest[i];
            fn(x);
            int i = free - 1;
            while (i >= 0 && rest[i] == p - 1) {
                rest[i] = 0;
                --i;
            }
            if (i < 0) break;
            ++rest[i];
        }
    }
}

uint64_t brute_count_mod_p(const VarietySpec& v, const std::vector<IntPolynomial>& gens,
                           uint64_t p, uint64_t budget) {
    int d = v.ncoords();
    std::vector<ModPoly> eqs, conds;
    for (const auto& f : v.equations) eqs.push_back(ModPoly::from(f, p));
    for (const auto& g : gens) conds.push_back(ModPoly::from(g, p));
    uint64_t count = 0;
    auto check = [&](const std::vector<uint64_t>& x) {
        for (const auto& f : eqs)
            if (f.eval(x, p) != 0) return;
        for (const auto& g : conds)
            if (g.eval(x, p) != 0) return;
        ++count;
    };
    if (v.ambient == Ambient::Affine) for_each_affine(p, d, budget, check);
    else for_each_projective(p, d, budget, check);
    return count;
}

// ---- structured fast paths ------------------------------------------------

// #{(x, y) in F_p^2 : x*y = m} under optional zero-constraints.
uint64_t pair_product_count(uint64_t m, bool x_zero, bool y_zero, uint64_t p) {
    if (x_zero && y_zero) return m == 0 ? 1 : 0;
    if (x_zero || y_zero) return m == 0 ? p : 0;
    return m == 0 ? 2 * p - 1 : p - 1;
}

uint64_t det2_count_mod_p(int64_t k, const std::array<bool, 4>& zero, uint64_t p) {
    uint64_t kp = static_cast<uint64_t>(((k % static_cast<int64_t>(p)) + static_cast<int64_t>(p)) %
                                        static_cast<int64_t>(p));
    uint64_t total = 0;
    for (uint64_t m = 0; m < p; ++m) {
        // x1*x4 = m and x2*x3 = m - k.
        uint64_t m2 = (m + p - kp) % p;
        total += pair_product_count(m, zero[0], zero[3], p) *
                 pair_product_count(m2, zero[1], zero[2], p);
    }
    return total;
}

// If every generator is a single coordinate variable, returns the zero-mask.
std::optional<std::array<bool, 4>> coordinate_mask(const std::vector<IntPolynomial>& gens) {
    std::array<bool, 4> mask{false, false, false, false};
    for (const auto& g : gens) {
        bool matched = false;
        for (int i = 0; i < 4; ++i) {
            if (g == IntPolynomial::variable(g.nvars(), i)) {
                mask[i] = true;
                matched = true;
                break;
            }
        }
        if (!matched) return std::nullopt;
    }
    return mask;
}

// Affine space: densities split over coordinates when every generator is
// univariate. Returns nullopt when some generator mixes variables.
std::optional<uint64_t> affine_space_condition_count(const VarietySpec& v,
                                                     const std::vector<IntPolynomial>& gens,
                                                     uint64_t p) {
    int d = v.ncoords();
    std::vector<std::vector<UniPoly>> by_var(d);
    for (const auto& g : gens) {
        auto vars = g.support_vars();
        if (vars.size() > 1) return std::nullopt;
        if (vars.empty()) {
            // Constant generator: p | c means no constraint, else empty.
            mpz_class c = g.is_zero() ? mpz_class(0) : g.terms().begin()->second;
            if (!mpz_divisible_ui_p(c.get_mpz_t(), static_cast<unsigned long>(p)) && c != 0)
                return 0;
            continue;
        }
        by_var[vars[0]].push_back(UniPoly::from(g, vars[0]));
    }
    uint64_t count = 1;
    for (int i = 0; i < d; ++i) {
        if (by_var[i].empty()) count *= p;
        else count *= static_cast<uint64_t>(count_common_roots_mod_p(by_var[i], p));
    }
    return count;
}

uint64_t count_x_mod_p(const VarietySpec& v, uint64_t p, uint64_t budget) {
    if (is_affine_space(v)) {
        uint64_t c = 1;
        for (int i = 0; i < v.ncoords(); ++i) c *= p;
        return c;
    }
    if (auto k = det2_constant(v)) return det2_count_mod_p(*k, {false, false, false, false}, p);
    if (auto cd = conic_data(v); cd && conic_good_prime(*cd, p)) return p + 1;
    return brute_count_mod_p(v, {}, p, budget);
}

uint64_t count_condition_mod_p(const VarietySpec& v, const std::vector<IntPolynomial>& gens,
                               uint64_t p, uint64_t budget) {
    if (gens.empty()) return count_x_mod_p(v, p, budget);
    if (is_affine_space(v)) {
        if (auto c = affine_space_condition_count(v, gens, p)) return *c;
        return brute_count_mod_p(v, gens, p, budget);
    }
    if (auto k = det2_constant(v)) {
        if (auto mask = coordinate_mask(gens)) return det2_count_mod_p(*k, *mask, p);
        return brute_count_mod_p(v, gens, p, budget);
    }
    if (auto cd = conic_data(v); cd && conic_good_prime(*cd, p)) {
        std::vector<IntPolynomial> pullbacks;
        for (const auto& g : gens) pullbacks.push_back(g.substitute(cd->param));
        return static_cast<uint64_t>(count_common_projective_roots_binary(pullbacks, p));
    }
    return brute_count_mod_p(v, gens, p, budget);
}

int64_t crt_pair(int64_t r1, uint64_t m1, int64_t r2, uint64_t m2) {
    // x = r1 (mod m1), x = r2 (mod m2), coprime moduli.
    uint64_t inv = invmod(m1 % m2, m2);
    uint64_t diff = static_cast<uint64_t>(((r2 - r1) % static_cast<int64_t>(m2) +
                                           static_cast<int64_t>(m2)) %
                                          static_cast<int64_t>(m2));
    return r1 + static_cast<int64_t>(m1 * mulmod(diff, inv, m2));
}

} // namespace

std::vector<IntPolynomial> conic_parametrization(const VarietySpec& v) {
    auto cd = conic_data(v);
    if (!cd)
        throw ValidationError("conic parametrization requires a plane conic with a rational point");
    return cd->param;
}

uint64_t count_points_mod(const VarietySpec& v, uint64_t Q, uint64_t budget) {
    v.validate();
    uint64_t count = 1;
    for (uint64_t p : factor_squarefree_modulus(Q)) count *= count_x_mod_p(v, p, budget);
    return count;
}

ResidueClassSet materialize_residues(const VarietySpec& v, uint64_t Q, uint64_t budget) {
    v.validate();
    ResidueClassSet out;
    out.modulus = Q;
    out.members = {std::vector<int64_t>(v.ncoords(), 0)};
    uint64_t prev_mod = 1;
    for (uint64_t p : factor_squarefree_modulus(Q)) {
        // Members mod p.
        std::vector<std::vector<int64_t>> mp;
        std::vector<ModPoly> eqs;
        for (const auto& f : v.equations) eqs.push_back(ModPoly::from(f, p));
        auto check = [&](const std::vector<uint64_t>& x) {
            for (const auto& f : eqs)
                if (f.eval(x, p) != 0) return;
            mp.emplace_back(x.begin(), x.end());
        };
        if (v.ambient == Ambient::Affine) for_each_affine(p, v.ncoords(), budget, check);
        else for_each_projective(p, v.ncoords(), budget, check);

        // CRT-combine with what we have so far.
        std::vector<std::vector<int64_t>> combined;
        if (static_cast<double>(out.members.size()) * mp.size() > static_cast<double>(budget))
            throw CapacityError("materialize_residues: class count exceeds budget");
        combined.reserve(out.members.size() * mp.size());
        for (const auto& a : out.members)
            for (const auto& b : mp) {
                std::vector<int64_t> c(v.ncoords());
                for (int i = 0; i < v.ncoords(); ++i)
                    c[i] = prev_mod == 1 ? b[i] : crt_pair(a[i], prev_mod, b[i], p);
                combined.push_back(std::move(c));
            }
        out.members = std::move(combined);
        prev_mod *= p;
    }
    std::sort(out.members.begin(), out.members.end());
    return out;
}

std::vector<int64_t> reduce_point_mod(const VarietySpec& v, const IntegralPoint& x, uint64_t Q) {
    auto primes = factor_squarefree_modulus(Q);
    int d = v.ncoords();
    std::vector<int64_t> out(d, 0);
    uint64_t mod_so_far = 1;
    for (uint64_t p : primes) {
        std::vector<int64_t> rp(d);
        for (int i = 0; i < d; ++i) {
            int64_t r = x.coords[i] % static_cast<int64_t>(p);
            if (r < 0) r += static_cast<int64_t>(p);
            rp[i] = r;
        }
        if (v.ambient == Ambient::Projective) {
            int lead = -1;
            for (int i = 0; i < d; ++i)
                if (rp[i] != 0) {
                    lead = i;
                    break;
                }
            if (lead < 0)
                throw ValidationError("point reduces to zero mod " + std::to_string(p) +
                                      " (not primitive)");
            uint64_t inv = invmod(static_cast<uint64_t>(rp[lead]), p);
            for (int i = 0; i < d; ++i)
                rp[i] = static_cast<int64_t>(mulmod(static_cast<uint64_t>(rp[i]), inv, p));
        }
        for (int i = 0; i < d; ++i)
            out[i] = mod_so_far == 1 ? rp[i] : crt_pair(out[i], mod_so_far, rp[i], p);
        mod_so_far *= p;
    }
    return out;
}

uint64_t condition_count_mod_p(const VarietySpec& v,
                               const std::vector<const DivisorSpec*>& active, uint64_t p,
                               uint64_t budget) {
    return count_condition_mod_p(v, active_generators(active), p, budget);
}

mpq_class condition_density_mod_p(const VarietySpec& v,
                                  const std::vector<const DivisorSpec*>& active, uint64_t p,
                                  uint64_t budget) {
    uint64_t num = condition_count_mod_p(v, active, p, budget);
    uint64_t den = count_x_mod_p(v, p, budget);
    if (den == 0) throw ValidationError("variety has no points mod " + std::to_string(p));
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

mpq_class density_g(const VarietySpec& v, const std::vector<DivisorSpec>& divisors,
                    const std::vector<uint64_t>& d, uint64_t budget) {
    v.validate();
    if (divisors.size() != d.size())
        throw ValidationError("density_g: one modulus per divisor required");
    std::vector<uint64_t> all_primes;
    for (uint64_t di : d)
        for (uint64_t p : factor_squarefree_modulus(di)) {
            if (v.is_bad_prime(p))
                throw ValidationError("density_g: bad prime " + std::to_string(p));
            if (std::find(all_primes.begin(), all_primes.end(), p) == all_primes.end())
                all_primes.push_back(p);
        }
    std::sort(all_primes.begin(), all_primes.end());
    mpq_class out(1);
    for (uint64_t p : all_primes) {
        std::vector<const DivisorSpec*> active;
        for (size_t i = 0; i < divisors.size(); ++i)
            if (d[i] % p == 0) active.push_back(&divisors[i]);
        out *= condition_density_mod_p(v, active, p, budget);
    }
    return out;
}

EquidistReport check_equidistribution(const VarietySpec& v, uint64_t Q, int64_t B,
                                      const EnumOptions& opts) {
    v.validate();
    EquidistReport report;
    report.Q = Q;
    std::vector<IntegralPoint> points = enumerate_points(v, B, opts);
    report.point_count = points.size();
    if (Q == 1) {
        report.class_count = 1;
        report.deviations = {0.0};
        return report;
    }
    ResidueClassSet classes = materialize_residues(v, Q);
    report.class_count = classes.members.size();
    if (report.class_count == 0) throw ValidationError("no residue classes mod Q");
    std::map<std::vector<int64_t>, size_t> index;
    for (size_t i = 0; i < classes.members.size(); ++i) index[classes.members[i]] = i;
    std::vector<uint64_t> counts(classes.members.size(), 0);
    for (const auto& pt : points) {
        auto r = reduce_point_mod(v, pt, Q);
        auto it = index.find(r);
        if (it == index.end())
            throw ContractError("enumerated point reduces outside X(Z/QZ)");
        ++counts[it->second];
    }
    double uniform = 1.0 / static_cast<double>(report.class_count);
    double n = static_cast<double>(std::max<uint64_t>(report.point_count, 1));
    double l2 = 0;
    for (uint64_t c : counts) {
        double dev = static_cast<double>(c) / n - uniform;
        report.deviations.push_back(dev);
        report.max_deviation = std::max(report.max_deviation, std::abs(dev));
        l2 += dev * dev;
    }
    report.l2_deviation = std::sqrt(l2);
    return report;
}

MertensFit mertens_sum(const VarietySpec& v, const DivisorSpec& divisor, uint64_t T,
                       const PrimeTable& table, uint64_t budget) {
    v.validate();
    if (T > table.limit()) throw CapacityError("mertens_sum: T exceeds prime table limit");
    MertensFit fit;
    fit.T = T;
    long double sum = 0;
    std::vector<const DivisorSpec*> active{&divisor};

    // Least-squares accumulators over the tail p in (sqrt(T), T].
    long double sx = 0, sy = 0, sxx = 0, sxy = 0;
    uint64_t tail_n = 0;
    long double tail_start = std::sqrt(static_cast<long double>(T));

    size_t nprimes = 0;
    for (uint32_t p : table.primes()) {
        if (p > T) break;
        ++nprimes;
    }
    size_t stride = std::max<size_t>(1, nprimes / 512);

    size_t idx = 0;
    for (uint32_t p : table.primes()) {
        if (p > T) break;
        if (!v.is_bad_prime(p)) {
            mpq_class g = condition_density_mod_p(v, active, p, budget);
            sum += static_cast<long double>(mpq_get_d(g.get_mpq_t()));
        }
        if (idx % stride == 0 || idx + 1 == nprimes)
            fit.partial_sums.emplace_back(p, static_cast<double>(sum));
        if (static_cast<long double>(p) > tail_start) {
            long double x = std::log(std::log(static_cast<long double>(p)));
            sx += x;
            sy += sum;
            sxx += x * x;
            sxy += x * sum;
            ++tail_n;
        }
        ++idx;
    }
    if (tail_n >= 2) {
        long double denom = tail_n * sxx - sx * sx;
        if (denom != 0) {
            fit.c = static_cast<double>((tail_n * sxy - sx * sy) / denom);
            fit.cprime = static_cast<double>((sy - fit.c * sx) / tail_n);
        } else {
            fit.cprime = static_cast<double>(sy / tail_n);
        }
    } else if (tail_n == 1) {
        fit.cprime = static_cast<double>(sy);
    }
    return fit;
}

} // namespace omegalab
