#include "omegalab/poly_factor.hpp"

#include <algorithm>
#include <cstdint>
#include <random>

#include "omegalab/arith.hpp"

namespace omegalab {

namespace {

// ---- pseudo-division / primitive PRS over Z ----

// lc(b)^(deg a - deg b + 1) * a = q*b + r with deg r < deg b.
UniPoly uni_prem(const UniPoly& a, const UniPoly& b) {
    UniPoly r = a;
    int db = b.degree();
    while (!r.is_zero() && r.degree() >= db) {
        int shift = r.degree() - db;
        mpz_class coef = r.lc();
        // r = lc(b)*r - coef * x^shift * b
        UniPoly nr;
        nr.c.assign(r.c.size(), 0);
        for (size_t i = 0; i < r.c.size(); ++i) nr.c[i] = r.c[i] * b.lc();
        for (int j = 0; j <= db; ++j) nr.c[j + shift] -= coef * b.c[j];
        nr.normalize();
        r = std::move(nr);
    }
    return r;
}

} // namespace

UniPoly uni_gcd(const UniPoly& a0, const UniPoly& b0) {
    UniPoly a = uni_primitive(a0), b = uni_primitive(b0);
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.degree() < b.degree()) std::swap(a, b);
    while (!b.is_zero()) {
        UniPoly r = uni_primitive(uni_prem(a, b));
        a = std::move(b);
        b = std::move(r);
    }
    return uni_primitive(a);
}

namespace {

// ---- arithmetic in F_p[x], p < 2^62 ----

struct Fp {
    uint64_t p;
    uint64_t add(uint64_t a, uint64_t b) const {
        uint64_t s = a + b;
        return s >= p ? s - p : s;
    }
    uint64_t sub(uint64_t a, uint64_t b) const { return a >= b ? a - b : a + p - b; }
    uint64_t mul(uint64_t a, uint64_t b) const {
        return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
    }
    uint64_t pow(uint64_t a, uint64_t e) const {
        uint64_t r = 1;
        a %= p;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    uint64_t inv(uint64_t a) const { return pow(a, p - 2); }
};

using FpPoly = std::vector<uint64_t>; // c[i] coeff of x^i, trimmed

void fp_trim(FpPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

int fp_deg(const FpPoly& f) { return static_cast<int>(f.size()) - 1; }

FpPoly fp_from(const UniPoly& f, const Fp& F) {
    FpPoly r(f.c.size());
    for (size_t i = 0; i < f.c.size(); ++i) {
        mpz_class m = f.c[i] % static_cast<unsigned long>(F.p);
        if (m < 0) m += static_cast<unsigned long>(F.p);
        r[i] = m.get_ui();
    }
    fp_trim(r);
    return r;
}

FpPoly fp_mul(const FpPoly& a, const FpPoly& b, const Fp& F) {
    if (a.empty() || b.empty()) return {};
    FpPoly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
    }
    fp_trim(r);
    return r;
}

// Remainder of a modulo monic-izable b.
FpPoly fp_mod(FpPoly a, const FpPoly& b, const Fp& F) {
    int db = fp_deg(b);
    uint64_t lcinv = F.inv(b.back());
    while (fp_deg(a) >= db) {
        uint64_t q = F.mul(a.back(), lcinv);
        int shift = fp_deg(a) - db;
        for (int j = 0; j <= db; ++j) a[j + shift] = F.sub(a[j + shift], F.mul(q, b[j]));
        fp_trim(a);
    }
    return a;
}

FpPoly fp_mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& m, const Fp& F) {
    return fp_mod(fp_mul(a, b, F), m, F);
}

FpPoly fp_gcd(FpPoly a, FpPoly b, const Fp& F) {
    while (!b.empty()) {
        FpPoly r = fp_mod(std::move(a), b, F);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty() && a.back() != 1) {
        uint64_t inv = F.inv(a.back());
        for (auto& x : a) x = F.mul(x, inv);
    }
    return a;
}

FpPoly fp_monic(FpPoly f, const Fp& F) {
    if (f.empty() || f.back() == 1) return f;
    uint64_t inv = F.inv(f.back());
    for (auto& x : f) x = F.mul(x, inv);
    return f;
}

// x^(p^k) mod m, computed by iterating the Frobenius power.
FpPoly fp_frobenius(const FpPoly& start, const FpPoly& m, const Fp& F) {
    // start^p mod m by square-and-multiply over the exponent p.
    FpPoly result = {1};
    FpPoly base = start;
    uint64_t e = F.p;
    while (e) {
        if (e & 1) result = fp_mulmod(result, base, m, F);
        base = fp_mulmod(base, base, m, F);
        e >>= 1;
    }
    return result;
}

// a^e mod m with arbitrary-precision exponent.
FpPoly fp_powmod_mpz(FpPoly a, mpz_class e, const FpPoly& m, const Fp& F) {
    FpPoly result = {1};
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) result = fp_mulmod(result, a, m, F);
        a = fp_mulmod(a, a, m, F);
        e >>= 1;
    }
    return result;
}

// Exact division in F_p[x] (assumes g | f).
FpPoly fp_divexact(const FpPoly& f, const FpPoly& g, const Fp& F) {
    FpPoly rem = f;
    int dg = fp_deg(g);
    FpPoly q(f.size() - g.size() + 1, 0);
    uint64_t lcinv = F.inv(g.back());
    while (fp_deg(rem) >= dg) {
        uint64_t qq = F.mul(rem.back(), lcinv);
        int shift = fp_deg(rem) - dg;
        q[shift] = qq;
        for (int j = 0; j <= dg; ++j) rem[j + shift] = F.sub(rem[j + shift], F.mul(qq, g[j]));
        fp_trim(rem);
    }
    fp_trim(q);
    return q;
}

// Equal-degree splitting (Cantor-Zassenhaus, p odd), f monic squarefree with
// all irreducible factors of degree d.
void fp_equal_degree(const FpPoly& f, int d, const Fp& F, std::mt19937_64& rng,
                     std::vector<FpPoly>& out) {
    int n = fp_deg(f);
    if (n == d) {
        out.push_back(f);
        return;
    }
    mpz_class pd;
    mpz_ui_pow_ui(pd.get_mpz_t(), static_cast<unsigned long>(F.p), static_cast<unsigned long>(d));
    mpz_class e = (pd - 1) / 2;
    while (true) {
        FpPoly a(n);
        for (int i = 0; i < n; ++i) a[i] = rng() % F.p;
        fp_trim(a);
        if (fp_deg(a) < 1) continue;
        FpPoly g = fp_gcd(f, a, F);
        if (!(fp_deg(g) > 0 && fp_deg(g) < n)) {
            FpPoly b = fp_powmod_mpz(a, e, f, F);
            if (b.empty()) continue;
            b[0] = F.sub(b[0], 1);
            fp_trim(b);
            g = fp_gcd(f, b, F);
        }
        if (fp_deg(g) > 0 && fp_deg(g) < n) {
            fp_equal_degree(fp_monic(g, F), d, F, rng, out);
            fp_equal_degree(fp_monic(fp_divexact(f, g, F), F), d, F, rng, out);
            return;
        }
    }
}

// Factor a monic squarefree polynomial over F_p (p odd) into monic irreducibles.
std::vector<FpPoly> fp_factor_squarefree(FpPoly f, const Fp& F) {
    std::vector<FpPoly> out;
    std::mt19937_64 rng(0x5eed1234abcdULL);
    FpPoly x = {0, 1};
    FpPoly h = fp_mod(x, f, F); // x mod f
    int d = 0;
    while (fp_deg(f) > 0) {
        ++d;
        if (2 * d > fp_deg(f)) {
            out.push_back(fp_monic(f, F));
            break;
        }
        h = fp_frobenius(h, f, F); // x^(p^d) mod f
        FpPoly hx = h;
        if (hx.empty()) hx = {0};
        if (hx.size() < 2) hx.resize(2, 0);
        hx[1] = F.sub(hx[1], 1); // h - x
        fp_trim(hx);
        FpPoly g = fp_gcd(f, hx, F);
        if (fp_deg(g) > 0) {
            fp_equal_degree(g, d, F, rng, out);
            // f = f / g; recompute h mod new f
            FpPoly rem = f;
            int dg = fp_deg(g);
            FpPoly q(f.size() - g.size() + 1, 0);
            uint64_t lcinv = F.inv(g.back());
            while (fp_deg(rem) >= dg) {
                uint64_t qq = F.mul(rem.back(), lcinv);
                int shift = fp_deg(rem) - dg;
                q[shift] = qq;
                for (int j = 0; j <= dg; ++j)
                    rem[j + shift] = F.sub(rem[j + shift], F.mul(qq, g[j]));
                fp_trim(rem);
            }
            fp_trim(q);
            f = std::move(q);
            if (fp_deg(f) > 0) h = fp_mod(h, f, F);
        }
    }
    return out;
}

// ---- Zassenhaus with a single large prime ----

mpz_class uni_norm2_ceil(const UniPoly& f) {
    mpz_class s = 0;
    for (const auto& c : f.c) s += c * c;
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), s.get_mpz_t());
    return r + 1;
}

mpz_class symmetric_rep(uint64_t v, uint64_t p) {
    if (v > p / 2) return mpz_class(static_cast<unsigned long>(v)) -
                          mpz_class(static_cast<unsigned long>(p));
    return mpz_class(static_cast<unsigned long>(v));
}

// Factor a primitive squarefree polynomial of degree >= 2 over Z.
std::vector<UniPoly> zassenhaus_squarefree(const UniPoly& f) {
    int n = f.degree();
    // Coefficient bound for lc(f) * (any monic-normalized true factor).
    mpz_class bound = uni_norm2_ceil(f);
    mpz_class lcabs = abs(f.lc());
    bound = bound * lcabs;
    mpz_class two_n;
    mpz_ui_pow_ui(two_n.get_mpz_t(), 2, static_cast<unsigned long>(n + 1));
    bound *= two_n;
    mpz_class pmin = 2 * bound + 1;
    if (!pmin.fits_ulong_p() || pmin.get_ui() > (1ULL << 62))
        throw CapacityError("factor_univariate: coefficient bound exceeds modular budget");

    // Pick a prime above the bound for which f stays squarefree with full degree.
    uint64_t p = pmin.get_ui() | 1;
    UniPoly fd = uni_derivative(f);
    Fp F{0};
    FpPoly fp;
    while (true) {
        while (!is_prime_u64(p)) p += 2;
        F.p = p;
        if (mpz_class(f.lc() % static_cast<unsigned long>(p)) != 0) {
            fp = fp_from(f, F);
            FpPoly fdp = fp_from(fd, F);
            FpPoly g = fp_gcd(fp, fdp, F);
            if (fp_deg(g) == 0) break;
        }
        p += 2;
    }

    std::vector<FpPoly> modular = fp_factor_squarefree(fp_monic(fp, F), F);
    std::sort(modular.begin(), modular.end());

    std::vector<UniPoly> result;
    UniPoly remaining = f;
    std::vector<bool> used(modular.size(), false);
    size_t unused = modular.size();

    // Try subsets of modular factors by increasing cardinality.
    for (size_t take = 1; take <= unused && 2 * take <= modular.size(); ++take) {
        bool progress = true;
        while (progress && 2 * take <= unused) {
            progress = false;
            std::vector<size_t> avail;
            for (size_t i = 0; i < modular.size(); ++i)
                if (!used[i]) avail.push_back(i);
            std::vector<size_t> idx(take);
            // iterate combinations of `avail` of size `take`
            std::vector<size_t> comb(take);
            for (size_t i = 0; i < take; ++i) comb[i] = i;
            while (true) {
                // build candidate = lc(remaining) * prod modular[comb] in symmetric range
                FpPoly prod = {
                    static_cast<uint64_t>(mpz_class(abs(remaining.lc()) %
                                                    static_cast<unsigned long>(p)).get_ui())};
                for (size_t i = 0; i < take; ++i) prod = fp_mul(prod, modular[avail[comb[i]]], F);
                UniPoly cand;
                cand.c.resize(prod.size());
                for (size_t i = 0; i < prod.size(); ++i) cand.c[i] = symmetric_rep(prod[i], p);
                cand.normalize();
                cand = uni_primitive(cand);
                if (cand.degree() >= 1 && uni_divides(cand, remaining)) {
                    result.push_back(cand);
                    remaining = uni_divexact(remaining, cand);
                    remaining = uni_primitive(remaining);
                    for (size_t i = 0; i < take; ++i) used[avail[comb[i]]] = true;
                    unused -= take;
                    progress = true;
                    break;
                }
                // next combination
                size_t k = take;
                while (k > 0) {
                    --k;
                    if (comb[k] + (take - k) <= avail.size() - 1) {
                        ++comb[k];
                        for (size_t j = k + 1; j < take; ++j) comb[j] = comb[j - 1] + 1;
                        k = take + 1;
                        break;
                    }
                }
                if (k != take + 1) break;
            }
        }
    }
    if (remaining.degree() >= 1) result.push_back(uni_primitive(remaining));
    return result;
}

// Yun's squarefree decomposition of a primitive polynomial (char 0).
// Returns (squarefree part, multiplicity) pairs.
std::vector<std::pair<UniPoly, int>> yun_squarefree(const UniPoly& f) {
    std::vector<std::pair<UniPoly, int>> out;
    UniPoly fd = uni_derivative(f);
    UniPoly g = uni_gcd(f, fd);
    if (g.degree() == 0) {
        out.emplace_back(uni_primitive(f), 1);
        return out;
    }
    UniPoly w = uni_divexact(f, g);
    UniPoly y = uni_divexact(fd, g);
    UniPoly z = uni_sub(y, uni_derivative(w));
    int i = 1;
    while (w.degree() > 0) {
        UniPoly gi = uni_gcd(w, z);
        if (gi.degree() > 0) out.emplace_back(uni_primitive(gi), i);
        w = uni_divexact(w, gi);
        y = uni_divexact(z, gi);
        z = uni_sub(y, uni_derivative(w));
        ++i;
    }
    return out;
}

} // namespace

FactorList factor_univariate(const IntPolynomial& f) {
    if (f.is_zero()) throw ValidationError("factor_univariate: zero polynomial");
    auto vars = f.support_vars();
    if (vars.size() > 1) throw ValidationError("factor_univariate: polynomial is multivariate");
    int var = vars.empty() ? 0 : vars[0];
    int nvars = f.nvars();
    UniPoly u = UniPoly::from(f, var);
    if (u.degree() < 1)
        throw ValidationError("factor_univariate: constant polynomial");
    if (u.degree() > kMaxFactorDegree)
        throw ValidationError("factor_univariate: degree " + std::to_string(u.degree()) +
                              " above supported bound " + std::to_string(kMaxFactorDegree));

    FactorList out;
    mpz_class cont = uni_content(u);
    if (u.lc() < 0) cont = -cont;
    out.unit = mpq_class(cont);
    if (u.degree() <= 0) return out;
    UniPoly prim = uni_primitive(u);

    for (auto& [sqf, mult] : yun_squarefree(prim)) {
        if (sqf.degree() == 1) {
            out.factors.emplace_back(sqf.to_polynomial(nvars, var), mult);
        } else if (sqf.degree() >= 2) {
            for (auto& irr : zassenhaus_squarefree(sqf))
                out.factors.emplace_back(irr.to_polynomial(nvars, var), mult);
        }
    }
    std::sort(out.factors.begin(), out.factors.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

FactorList factor_binary_form(const IntPolynomial& f) {
    if (f.is_zero()) throw ValidationError("factor_binary_form: zero polynomial");
    if (!f.is_homogeneous()) throw ValidationError("factor_binary_form: input not homogeneous");
    auto vars = f.support_vars();
    if (vars.size() > 2) throw ValidationError("factor_binary_form: more than two variables");
    int nvars = f.nvars();
    int u_var = nvars >= 2 ? 0 : 0, v_var = nvars >= 2 ? 1 : 0;
    if (vars.size() == 2) {
        u_var = vars[0];
        v_var = vars[1];
    } else if (vars.size() == 1) {
        u_var = vars[0];
        v_var = (u_var + 1) % std::max(nvars, 2);
    }
    if (nvars < 2) throw ValidationError("factor_binary_form: ring needs >= 2 variables");

    int d = f.degree();
    // Multiplicity of v_var as a factor = min exponent of v_var over the terms.
    uint32_t v_mult = std::numeric_limits<uint32_t>::max();
    for (const auto& [e, c] : f.terms()) v_mult = std::min(v_mult, e[v_var]);

    // Dehomogenize at v_var = 1.
    UniPoly g;
    g.c.assign(static_cast<size_t>(d + 1), 0);
    for (const auto& [e, c] : f.terms()) g.c[e[u_var]] += c;
    g.normalize();
    if (g.degree() > kMaxFactorDegree)
        throw ValidationError("factor_binary_form: degree above supported bound");

    FactorList uni = factor_univariate(g.to_polynomial(nvars, u_var));
    FactorList out;
    out.unit = uni.unit;
    if (v_mult > 0)
        out.factors.emplace_back(IntPolynomial::variable(nvars, v_var),
                                 static_cast<int>(v_mult));
    for (auto& [fac, mult] : uni.factors) {
        // Homogenize fac(u) of degree e to v^e * fac(u/v).
        UniPoly fu = UniPoly::from(fac, u_var);
        int e = fu.degree();
        IntPolynomial h(nvars);
        for (int i = 0; i <= e; ++i) {
            if (fu.c[i] == 0) continue;
            Exponents ex(nvars, 0);
            ex[u_var] = static_cast<uint32_t>(i);
            ex[v_var] = static_cast<uint32_t>(e - i);
            h.add_term(ex, fu.c[i]);
        }
        out.factors.emplace_back(h.normalized(), mult);
    }
    std::sort(out.factors.begin(), out.factors.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

IntPolynomial gcd_univariate(const IntPolynomial& f, const IntPolynomial& g) {
    if (f.is_zero() && g.is_zero()) throw ValidationError("gcd of two zero polynomials");
    auto vf = f.support_vars();
    auto vg = g.support_vars();
    int var = 0;
    if (!vf.empty()) var = vf[0];
    if (!vg.empty()) var = vg[0];
    if (vf.size() > 1 || vg.size() > 1 ||
        (!vf.empty() && !vg.empty() && vf[0] != vg[0]))
        throw ValidationError("gcd_univariate: inputs must share a single variable");
    UniPoly a = UniPoly::from(f, var), b = UniPoly::from(g, var);
    if (a.is_zero()) return uni_primitive(b).to_polynomial(f.nvars(), var);
    if (b.is_zero()) return uni_primitive(a).to_polynomial(f.nvars(), var);
    UniPoly d = uni_gcd(a, b);
    if (d.is_zero() || d.degree() == 0) return IntPolynomial::constant(f.nvars(), 1);
    return d.to_polynomial(f.nvars(), var);
}

int count_roots_mod_p(const UniPoly& f, uint64_t p) {
    Fp F{p};
    FpPoly fp = fp_from(f, F);
    if (fp.empty()) return static_cast<int>(p); // f vanishes identically mod p
    if (fp_deg(fp) == 0) return 0;
    fp = fp_monic(fp, F);
    // gcd(f, x^p - x) via x^p mod f
    FpPoly x = fp_mod(FpPoly{0, 1}, fp, F);
    FpPoly xp = fp_frobenius(x, fp, F);
    if (xp.size() < 2) xp.resize(2, 0);
    xp[1] = F.sub(xp[1], 1);
    fp_trim(xp);
    FpPoly g = fp_gcd(fp, xp, F);
    return std::max(0, fp_deg(g));
}

int count_common_roots_mod_p(const UniPoly& f, const UniPoly& g, uint64_t p) {
    Fp F{p};
    FpPoly a = fp_from(f, F), b = fp_from(g, F);
    if (a.empty() && b.empty()) return static_cast<int>(p);
    if (a.empty()) return count_roots_mod_p(g, p);
    if (b.empty()) return count_roots_mod_p(f, p);
    FpPoly d = fp_gcd(a, b, F);
    if (fp_deg(d) <= 0) return 0;
    UniPoly du;
    du.c.resize(d.size());
    for (size_t i = 0; i < d.size(); ++i) du.c[i] = static_cast<unsigned long>(d[i]);
    du.normalize();
    return count_roots_mod_p(du, p);
}

int count_common_roots_mod_p(const std::vector<UniPoly>& fs, uint64_t p) {
    Fp F{p};
    FpPoly d; // gcd of the nonzero reductions
    bool any = false;
    for (const auto& f : fs) {
        FpPoly a = fp_from(f, F);
        if (a.empty()) continue; // vanishes identically: no constraint
        d = any ? fp_gcd(d, a, F) : a;
        any = true;
        if (fp_deg(d) == 0) return 0;
    }
    if (!any) return static_cast<int>(p);
    UniPoly du;
    du.c.resize(d.size());
    for (size_t i = 0; i < d.size(); ++i) du.c[i] = static_cast<unsigned long>(d[i]);
    du.normalize();
    return count_roots_mod_p(du, p);
}

namespace {

// Fix a shared (u, v) pair for a family of binary forms: the two smallest
// variables occurring in any of them (defaulting to the first two of the ring).
std::pair<int, int> binary_pair(const std::vector<IntPolynomial>& forms) {
    std::vector<int> all;
    for (const auto& f : forms) {
        if (!f.is_homogeneous()) throw ValidationError("expected a binary form");
        for (int v : f.support_vars())
            if (std::find(all.begin(), all.end(), v) == all.end()) all.push_back(v);
    }
    std::sort(all.begin(), all.end());
    if (all.size() > 2) throw ValidationError("expected binary forms in a shared variable pair");
    int u = all.size() > 0 ? all[0] : 0;
    int v = all.size() > 1 ? all[1] : u + 1;
    return {u, v};
}

// Dehomogenized coefficients (at v = 1) of a binary form in (u_var, v_var);
// also reports whether the top u-degree coefficient vanishes mod p (a root at
// (1:0)).
UniPoly dehomogenize_binary(const IntPolynomial& form, int u_var, bool& top_vanishes,
                            uint64_t p) {
    int d = form.degree();
    UniPoly g;
    g.c.assign(static_cast<size_t>(d + 1), 0);
    mpz_class top = 0;
    for (const auto& [e, c] : form.terms()) {
        g.c[e[u_var]] += c;
        if (static_cast<int>(e[u_var]) == d) top += c;
    }
    g.normalize();
    top_vanishes = mpz_divisible_ui_p(top.get_mpz_t(), static_cast<unsigned long>(p)) != 0;
    return g;
}

} // namespace

int count_common_projective_roots_binary(const std::vector<IntPolynomial>& forms, uint64_t p) {
    if (forms.empty()) return static_cast<int>(p) + 1;
    auto [u_var, v_var] = binary_pair(forms);
    (void)v_var;
    std::vector<UniPoly> dehoms;
    bool at_infinity = true; // all forms vanish at (1:0)?
    bool all_zero = true;
    for (const auto& f : forms) {
        bool top = false;
        UniPoly g = dehomogenize_binary(f, u_var, top, p);
        // Identically-zero reductions impose no constraint at all.
        Fp F{p};
        if (!fp_from(g, F).empty() || !top) all_zero = false;
        if (!top) at_infinity = false;
        dehoms.push_back(std::move(g));
    }
    if (all_zero) return static_cast<int>(p) + 1;
    int affine = count_common_roots_mod_p(dehoms, p);
    if (affine > static_cast<int>(p)) affine = static_cast<int>(p);
    return affine + (at_infinity ? 1 : 0);
}

int count_projective_roots_binary(const IntPolynomial& form, uint64_t p) {
    return count_common_projective_roots_binary(std::vector<IntPolynomial>{form}, p);
}

int count_common_projective_roots_binary(const IntPolynomial& f, const IntPolynomial& g,
                                         uint64_t p) {
    return count_common_projective_roots_binary(std::vector<IntPolynomial>{f, g}, p);
}

} // namespace omegalab
