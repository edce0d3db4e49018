#include "omegalab/variety.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace omegalab {

std::string enumerator_name(EnumeratorKind k) {
    switch (k) {
        case EnumeratorKind::BoxScan: return "box-scan";
        case EnumeratorKind::ConicParametrization: return "conic-parametrization";
        case EnumeratorKind::Pythagorean: return "pythagorean";
        case EnumeratorKind::Det2Parametrization: return "det2-parametrization";
        case EnumeratorKind::GenericLastVariableSolve: return "generic-last-variable-solve";
    }
    throw ValidationError("unknown enumerator kind");
}

EnumeratorKind enumerator_from_name(const std::string& name) {
    for (EnumeratorKind k :
         {EnumeratorKind::BoxScan, EnumeratorKind::ConicParametrization,
          EnumeratorKind::Pythagorean, EnumeratorKind::Det2Parametrization,
          EnumeratorKind::GenericLastVariableSolve}) {
        if (enumerator_name(k) == name) return k;
    }
    throw ValidationError("unknown enumerator \"" + name + "\"");
}

bool VarietySpec::is_bad_prime(uint64_t p) const {
    return std::find(bad_primes.begin(), bad_primes.end(), p) != bad_primes.end();
}

namespace {

using i128 = __int128;

int64_t narrow_i128(i128 v, const char* what) {
    if (v > INT64_MAX || v < INT64_MIN) throw CapacityError(std::string(what) + ": overflow");
    return static_cast<int64_t>(v);
}

int64_t isqrt_i64(int64_t n) {
    if (n < 0) throw ValidationError("isqrt of negative");
    int64_t r = static_cast<int64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// The Pythagorean strategy is pinned to this exact equation.
bool is_pythagorean_equation(const IntPolynomial& f) {
    return f.nvars() == 3 && f == parse_polynomial("x1^2 + x2^2 - x3^2", 3);
}

// det2 equation shape x1*x4 - x2*x3 - k; returns k if it matches.
std::optional<int64_t> det2_constant(const IntPolynomial& f) {
    if (f.nvars() != 4) return std::nullopt;
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

// Gram data of a ternary quadratic form: q[i][j] holds the coefficient of
// x_i*x_j for i <= j (so q[i][i] is the square coefficient).
struct QuadForm {
    int n;
    std::vector<std::vector<int64_t>> q;

    static QuadForm from(const IntPolynomial& f) {
        int n = f.nvars();
        QuadForm out{n, std::vector<std::vector<int64_t>>(n, std::vector<int64_t>(n, 0))};
        for (const auto& [e, c] : f.terms()) {
            int i = -1, j = -1;
            uint32_t total = 0;
            for (int v = 0; v < n; ++v) {
                total += e[v];
                if (e[v] == 2) i = j = v;
                if (e[v] == 1) (i < 0 ? i : j) = v;
            }
            if (total != 2) throw ValidationError("quadratic form: degree != 2 term");
            if (!c.fits_slong_p()) throw CapacityError("quadratic form coefficient too large");
            out.q[std::min(i, j)][std::max(i, j)] = c.get_si();
        }
        return out;
    }

    i128 eval(const std::vector<int64_t>& x) const {
        i128 s = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) s += static_cast<i128>(q[i][j]) * x[i] * x[j];
        return s;
    }

    // 2*B(x,y) with Q(x+y) = Q(x) + 2B(x,y) + Q(y); integral by construction.
    i128 polar(const std::vector<int64_t>& x, const std::vector<int64_t>& y) const {
        i128 s = 0;
        for (int i = 0; i < n; ++i) {
            s += 2 * static_cast<i128>(q[i][i]) * x[i] * y[i];
            for (int j = i + 1; j < n; ++j)
                s += static_cast<i128>(q[i][j]) * (static_cast<i128>(x[i]) * y[j] +
                                                   static_cast<i128>(x[j]) * y[i]);
        }
        return s;
    }
};

bool mask_ok(const std::vector<bool>& mask, const std::vector<int64_t>& coords) {
    if (mask.empty()) return true;
    for (size_t i = 0; i < coords.size() && i < mask.size(); ++i)
        if (mask[i] && coords[i] == 0) return false;
    return true;
}

bool in_range(const std::optional<std::pair<int64_t, int64_t>>& range, int64_t v) {
    return !range || (v >= range->first && v <= range->second);
}

} // namespace

void VarietySpec::validate() const {
    if (dim < 1) throw ValidationError("variety: ambient dimension must be >= 1");
    int d = ncoords();
    for (const auto& f : equations) {
        if (f.is_zero()) throw ValidationError("variety: zero equation");
        if (f.nvars() != d)
            throw ValidationError("variety: equation variable count != coordinate count");
        if (ambient == Ambient::Projective && !f.is_homogeneous())
            throw ValidationError("variety: projective equations must be homogeneous");
    }
    switch (enumerator) {
        case EnumeratorKind::BoxScan:
            break;
        case EnumeratorKind::Pythagorean:
            if (ambient != Ambient::Projective || dim != 2 || equations.size() != 1 ||
                !is_pythagorean_equation(equations[0]))
                throw ValidationError("pythagorean enumerator requires x1^2+x2^2-x3^2 in P^2");
            break;
        case EnumeratorKind::ConicParametrization: {
            if (ambient != Ambient::Projective || dim != 2 || equations.size() != 1 ||
                equations[0].degree() != 2)
                throw ValidationError("conic parametrization requires one quadric in P^2");
            if (!rational_point || rational_point->size() != 3)
                throw ValidationError("conic parametrization requires a rational point");
            std::vector<mpz_class> p(3);
            int64_t g = 0;
            for (int i = 0; i < 3; ++i) {
                p[i] = static_cast<long>((*rational_point)[i]);
                g = std::gcd(g, (*rational_point)[i]);
            }
            if (g != 1) throw ValidationError("conic rational point must be primitive");
            if (equations[0].evaluate(p) != 0)
                throw ValidationError("rational point does not lie on the conic");
            break;
        }
        case EnumeratorKind::Det2Parametrization:
            if (ambient != Ambient::Affine || dim != 4 || equations.size() != 1 ||
                !det2_constant(equations[0]))
                throw ValidationError("det2 enumerator requires x1*x4 - x2*x3 = k on A^4");
            break;
        case EnumeratorKind::GenericLastVariableSolve: {
            if (ambient != Ambient::Affine || equations.size() != 1)
                throw ValidationError("last-variable solve requires one affine equation");
            int deg = equations[0].degree_in(d - 1);
            if (deg < 1 || deg > 2)
                throw ValidationError("last-variable solve needs degree 1 or 2 in x" +
                                      std::to_string(d));
            break;
        }
    }
}

IntegralPoint canonicalize_projective(std::vector<int64_t> coords) {
    int64_t g = 0;
    for (int64_t c : coords) g = std::gcd(g, c);
    if (g == 0) throw ValidationError("projective point: all coordinates zero");
    for (auto& c : coords) c /= g;
    for (int64_t c : coords) {
        if (c > 0) break;
        if (c < 0) {
            for (auto& x : coords) x = -x;
            break;
        }
    }
    return IntegralPoint{std::move(coords)};
}

namespace {

struct Emitter {
    const VarietySpec& v;
    int64_t B;
    const EnumOptions& opts;
    std::vector<IntegralPoint> out;
    uint64_t ops = 0;

    void charge(uint64_t n = 1) {
        ops += n;
        if (ops > opts.budget)
            throw PartialEnumerationError(
                "enumeration budget exceeded on " + v.name, std::move(out));
    }

    bool height_ok(const std::vector<int64_t>& coords) const {
        for (int64_t c : coords)
            if (c > B || c < -B) return false;
        return true;
    }

    void emit(std::vector<int64_t> coords) {
        if (!height_ok(coords) || !mask_ok(opts.nonzero_mask, coords)) return;
        out.push_back(IntegralPoint{std::move(coords)});
    }
};

void enumerate_pythagorean(Emitter& em) {
    // Euclid parametrization: primitive triples (m^2-n^2, 2mn, m^2+n^2) with
    // m > n >= 0, gcd(m,n)=1, opposite parity; closed under the sign and swap
    // symmetry of the conic, with canonical projective representatives.
    int64_t mmax = isqrt_i64(em.B);
    for (int64_t m = 1; m <= mmax; ++m) {
        if (!in_range(em.opts.range, m)) continue;
        for (int64_t n = 0; n < m; ++n) {
            em.charge();
            if (std::gcd(m, n) != 1 || ((m ^ n) & 1) == 0) continue;
            int64_t c = m * m + n * n;
            if (c > em.B) break;
            int64_t a = m * m - n * n, b = 2 * m * n;
            for (int swap = 0; swap < 2; ++swap) {
                int64_t x = swap ? b : a, y = swap ? a : b;
                for (int sy : {1, -1}) {
                    if (y == 0 && sy < 0) continue;
                    for (int sc : {1, -1}) {
                        if (x == 0) {
                            // Canonical form starts at the first nonzero coordinate.
                            if (sy < 0) continue;
                            em.emit({0, y, sc * c});
                        } else {
                            em.emit({x, sy * y, sc * c});
                        }
                    }
                }
            }
        }
    }
}

void enumerate_conic(Emitter& em) {
    const VarietySpec& v = em.v;
    QuadForm Q = QuadForm::from(v.equations[0]);
    std::vector<int64_t> P = *v.rational_point;
    // Reference line {x_t = 0} avoiding P; project from P onto it.
    int t = 0;
    for (int i = 0; i < 3; ++i)
        if (std::abs(P[i]) > std::abs(P[t])) t = i;
    int a = -1, b = -1;
    for (int i = 0; i < 3; ++i) {
        if (i == t) continue;
        (a < 0 ? a : b) = i;
    }
    // Any point x with H <= B projects to (u, v) = (x_t P_a - P_t x_a, x_t P_b - P_t x_b),
    // so |u|, |v| <= B * (|P_a| + |P_t|) etc.; the point P itself is reached at
    // the direction annihilating the polar form, whose coefficients also bound C.
    int64_t maxP = std::max({std::abs(P[0]), std::abs(P[1]), std::abs(P[2])});
    std::vector<int64_t> ea(3, 0), eb(3, 0);
    ea[a] = 1;
    eb[b] = 1;
    int64_t polar_a = narrow_i128(Q.polar(P, ea), "conic polar");
    int64_t polar_b = narrow_i128(Q.polar(P, eb), "conic polar");
    int64_t C = std::max(2 * em.B * maxP, std::max(std::abs(polar_a), std::abs(polar_b)));

    std::vector<int64_t> y(3, 0), x(3, 0);
    // Canonical (u:v): u > 0, or (u,v) = (0,1); the parametrization is a
    // bijection with the conic, so partitions by u are disjoint.
    for (int64_t u = 0; u <= C; ++u) {
        if (!in_range(em.opts.range, u)) continue;
        int64_t vlo = (u == 0) ? 1 : -C, vhi = (u == 0) ? 1 : C;
        for (int64_t vv = vlo; vv <= vhi; ++vv) {
            em.charge();
            if (std::gcd(u, vv) != 1) continue;
            y[a] = u;
            y[b] = vv;
            y[t] = 0;
            i128 qy = Q.eval(y);
            i128 pol = Q.polar(P, y);
            bool zero = true, overflow = false;
            for (int i = 0; i < 3; ++i) {
                i128 xi = qy * P[i] - pol * y[i];
                if (xi > INT64_MAX || xi < INT64_MIN) {
                    overflow = true;
                    break;
                }
                x[i] = static_cast<int64_t>(xi);
                if (x[i] != 0) zero = false;
            }
            if (overflow || zero) continue;
            IntegralPoint pt = canonicalize_projective(x);
            if (!em.height_ok(pt.coords)) continue;
            em.emit(std::move(pt.coords));
        }
    }
}

void enumerate_det2(Emitter& em) {
    int64_t k = *det2_constant(em.v.equations[0]);
    const PrimeTable* table = em.opts.table;
    std::optional<PrimeTable> own;
    uint64_t need = static_cast<uint64_t>(em.B) * em.B + std::abs(k);
    if (!table || table->limit() < need) {
        own = PrimeTable::build(std::max<uint64_t>(need, 2));
        table = &*own;
    }
    for (int64_t a = -em.B; a <= em.B; ++a) {
        if (!in_range(em.opts.range, a)) continue;
        for (int64_t d = -em.B; d <= em.B; ++d) {
            em.charge();
            int64_t N = a * d - k; // x2*x3
            if (N == 0) {
                for (int64_t c = -em.B; c <= em.B; ++c) em.emit({a, 0, c, d});
                for (int64_t bb = -em.B; bb <= em.B; ++bb)
                    if (bb != 0) em.emit({a, bb, 0, d});
                continue;
            }
            // Divisors of |N| from the factorization, with both signs.
            Factorization f = factorize(N, *table);
            std::vector<int64_t> divs{1};
            for (const auto& [p, e] : f.factors) {
                size_t cur = divs.size();
                int64_t pe = 1;
                for (uint32_t i = 1; i <= e; ++i) {
                    pe *= static_cast<int64_t>(p);
                    for (size_t j = 0; j < cur; ++j) divs.push_back(divs[j] * pe);
                }
            }
            std::sort(divs.begin(), divs.end());
            em.charge(divs.size());
            for (int64_t e : divs) {
                int64_t q = N / e;
                for (int s : {1, -1}) em.emit({a, s * e, s * q, d});
            }
        }
    }
}

void enumerate_last_var(Emitter& em) {
    const VarietySpec& v = em.v;
    int d = v.ncoords();
    int last = d - 1;
    // f = c2 * x_d^2 + c1 * x_d + c0 with c_i in the remaining variables.
    IntPolynomial c0(std::max(d - 1, 1)), c1(std::max(d - 1, 1)), c2(std::max(d - 1, 1));
    for (const auto& [e, coef] : v.equations[0].terms()) {
        Exponents rest(e.begin(), e.end() - 1);
        if (rest.empty()) rest = {0};
        if (e[last] == 0) c0.add_term(rest, coef);
        else if (e[last] == 1) c1.add_term(rest, coef);
        else if (e[last] == 2) c2.add_term(rest, coef);
        else throw ValidationError("last-variable solve: degree too high");
    }
    std::vector<int64_t> x(std::max(d - 1, 1), 0);
    std::vector<int64_t> probe(d, 0);

    auto solve_at = [&](std::vector<int64_t>& xs) {
        em.charge();
        int64_t a2 = c2.evaluate_i64(xs), a1 = c1.evaluate_i64(xs), a0 = c0.evaluate_i64(xs);
        auto emit_with = [&](int64_t z) {
            std::vector<int64_t> full(xs.begin(), xs.begin() + (d - 1));
            full.push_back(z);
            em.emit(std::move(full));
        };
        if (a2 == 0 && a1 == 0) {
            if (a0 == 0)
                for (int64_t z = -em.B; z <= em.B; ++z) emit_with(z);
            return;
        }
        if (a2 == 0) {
            if (a0 % a1 == 0) emit_with(-a0 / a1);
            return;
        }
        i128 disc = static_cast<i128>(a1) * a1 - 4 * static_cast<i128>(a2) * a0;
        if (disc < 0) return;
        if (disc > INT64_MAX) throw CapacityError("last-variable solve: discriminant overflow");
        int64_t s = isqrt_i64(static_cast<int64_t>(disc));
        if (static_cast<i128>(s) * s != disc) return;
        for (int sgn : {1, -1}) {
            if (s == 0 && sgn < 0) continue;
            i128 num = -static_cast<i128>(a1) + sgn * static_cast<i128>(s);
            if (num % (2 * static_cast<i128>(a2)) == 0)
                emit_with(narrow_i128(num / (2 * a2), "last-variable solve"));
        }
    };

    // Odometer over the first d-1 coordinates, partitioned on x1.
    std::vector<int64_t> xs(d - 1, -em.B);
    if (d == 1) {
        std::vector<int64_t> empty{0};
        solve_at(empty);
        return;
    }
    while (true) {
        if (in_range(em.opts.range, xs[0])) solve_at(xs);
        else em.charge();
        int i = d - 2;
        while (i >= 0 && xs[i] == em.B) {
            xs[i] = -em.B;
            --i;
        }
        if (i < 0) break;
        ++xs[i];
    }
}

void enumerate_box(Emitter& em) {
    const VarietySpec& v = em.v;
    int d = v.ncoords();
    auto satisfies = [&](const std::vector<int64_t>& xs) {
        for (const auto& f : v.equations)
            if (f.evaluate_i64(xs) != 0) return false;
        return true;
    };
    if (v.ambient == Ambient::Affine) {
        std::vector<int64_t> xs(d, -em.B);
        while (true) {
            em.charge();
            if (in_range(em.opts.range, xs[0]) && satisfies(xs)) em.emit(xs);
            int i = d - 1;
            while (i >= 0 && xs[i] == em.B) {
                xs[i] = -em.B;
                --i;
            }
            if (i < 0) break;
            ++xs[i];
        }
        return;
    }
    // Projective: canonical representatives only — first nonzero coordinate
    // positive and gcd 1; enumerated by first-nonzero index.
    for (int lead = 0; lead < d; ++lead) {
        std::vector<int64_t> xs(d, 0);
        // x1-partition semantics: lead > 0 means x1 = 0; lead == 0 covers x1 >= 1.
        std::vector<int64_t> rest(d - lead - 1, -em.B);
        for (int64_t v0 = 1; v0 <= em.B; ++v0) {
            xs[lead] = v0;
            if (lead == 0 && !in_range(em.opts.range, v0)) continue;
            if (lead > 0 && !in_range(em.opts.range, 0)) continue;
            std::fill(rest.begin(), rest.end(), -em.B);
            while (true) {
                em.charge();
                for (size_t i = 0; i < rest.size(); ++i) xs[lead + 1 + i] = rest[i];
                int64_t g = v0;
                for (int64_t c : rest) g = std::gcd(g, c);
                if (g == 1 && satisfies(xs)) em.emit(xs);
                if (rest.empty()) break;
                int i = static_cast<int>(rest.size()) - 1;
                while (i >= 0 && rest[i] == em.B) {
                    rest[i] = -em.B;
                    --i;
                }
                if (i < 0) break;
                ++rest[i];
            }
            if (rest.empty() && d - lead == 1) break; // single coordinate (1)
        }
    }
}

} // namespace

std::pair<int64_t, int64_t> enumeration_domain(const VarietySpec& v, int64_t B) {
    switch (v.enumerator) {
        case EnumeratorKind::Pythagorean: return {1, isqrt_i64(B)};
        case EnumeratorKind::ConicParametrization: {
            int64_t maxP = 1;
            for (int64_t c : *v.rational_point) maxP = std::max(maxP, std::abs(c));
            QuadForm Q = QuadForm::from(v.equations[0]);
            int64_t cmax = 0;
            for (const auto& row : Q.q)
                for (int64_t c : row) cmax = std::max(cmax, std::abs(c));
            return {0, std::max(2 * B * maxP, 6 * cmax * maxP)};
        }
        default: return {-B, B};
    }
}

std::vector<IntegralPoint> enumerate_points(const VarietySpec& v, int64_t B,
                                            const EnumOptions& opts) {
    v.validate();
    if (B < 0) throw ValidationError("enumerate_points: negative height bound");
    Emitter em{v, B, opts, {}, 0};
    if (B == 0) return {};
    switch (v.enumerator) {
        case EnumeratorKind::Pythagorean: enumerate_pythagorean(em); break;
        case EnumeratorKind::ConicParametrization: enumerate_conic(em); break;
        case EnumeratorKind::Det2Parametrization: enumerate_det2(em); break;
        case EnumeratorKind::GenericLastVariableSolve: enumerate_last_var(em); break;
        case EnumeratorKind::BoxScan: enumerate_box(em); break;
    }
    return std::move(em.out);
}

std::string points_to_csv(const std::vector<IntegralPoint>& points, int ncoords) {
    std::ostringstream os;
    for (int i = 0; i < ncoords; ++i) os << (i ? "," : "") << "x" << (i + 1);
    os << "\n";
    for (const auto& p : points) {
        for (int i = 0; i < ncoords; ++i) os << (i ? "," : "") << p.coords[i];
        os << "\n";
    }
    return os.str();
}

const DivisorSpec& VarietyConfig::divisor(const std::string& label) const {
    for (const auto& d : divisors)
        if (d.label == label) return d;
    throw ValidationError("unknown divisor label \"" + label + "\"");
}

VarietyConfig load_variety_config(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("config JSON parse error: ") + e.what());
    }
    try {
        VarietyConfig out;
        VarietySpec& v = out.variety;
        v.name = j.at("name").get<std::string>();
        const auto& amb = j.at("ambient");
        std::string type = amb.at("type").get<std::string>();
        if (type == "affine") v.ambient = Ambient::Affine;
        else if (type == "projective") v.ambient = Ambient::Projective;
        else throw ValidationError("ambient type must be affine or projective");
        v.dim = amb.at("dim").get<int>();
        if (v.dim < 1) throw ValidationError("ambient dim must be >= 1");
        int d = v.ncoords();
        for (const auto& eq : j.at("equations"))
            v.equations.push_back(parse_polynomial(eq.get<std::string>(), d));
        v.enumerator = enumerator_from_name(j.at("enumerator").get<std::string>());
        if (j.contains("badPrimes"))
            for (const auto& p : j["badPrimes"]) v.bad_primes.push_back(p.get<uint64_t>());
        if (j.contains("rationalPoint"))
            v.rational_point = j["rationalPoint"].get<std::vector<int64_t>>();
        if (j.contains("divisors")) {
            for (const auto& dj : j["divisors"]) {
                DivisorSpec ds;
                ds.label = dj.at("label").get<std::string>();
                for (const auto& g : dj.at("generators"))
                    ds.generators.push_back(parse_polynomial(g.get<std::string>(), d));
                if (ds.generators.empty()) throw ValidationError("divisor with no generators");
                out.divisors.push_back(std::move(ds));
            }
        }
        v.validate();
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("config JSON shape error: ") + e.what());
    }
}

VarietyConfig load_variety_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_variety_config(ss.str());
}

std::string variety_config_to_json(const VarietyConfig& config) {
    nlohmann::json j;
    const VarietySpec& v = config.variety;
    j["name"] = v.name;
    j["ambient"] = {{"type", v.ambient == Ambient::Affine ? "affine" : "projective"},
                    {"dim", v.dim}};
    j["equations"] = nlohmann::json::array();
    for (const auto& f : v.equations) j["equations"].push_back(f.to_string());
    j["enumerator"] = enumerator_name(v.enumerator);
    j["badPrimes"] = v.bad_primes;
    if (v.rational_point) j["rationalPoint"] = *v.rational_point;
    j["divisors"] = nlohmann::json::array();
    for (const auto& d : config.divisors) {
        nlohmann::json dj;
        dj["label"] = d.label;
        dj["generators"] = nlohmann::json::array();
        for (const auto& g : d.generators) dj["generators"].push_back(g.to_string());
        j["divisors"].push_back(dj);
    }
    return j.dump(2);
}

} // namespace omegalab
