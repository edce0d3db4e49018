#include "omegalab/poly.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <numeric>
#include <sstream>

namespace omegalab {

bool GrlexGreater::operator()(const Exponents& a, const Exponents& b) const {
    uint64_t da = std::accumulate(a.begin(), a.end(), uint64_t{0});
    uint64_t db = std::accumulate(b.begin(), b.end(), uint64_t{0});
    if (da != db) return da > db;
    return a > b; // lex within a degree block
}

IntPolynomial IntPolynomial::constant(int nvars, const mpz_class& c) {
    IntPolynomial f(nvars);
    if (c != 0) f.terms_.emplace(Exponents(nvars, 0), c);
    return f;
}

IntPolynomial IntPolynomial::variable(int nvars, int index) {
    if (index < 0 || index >= nvars) throw ValidationError("variable index out of range");
    IntPolynomial f(nvars);
    Exponents e(nvars, 0);
    e[index] = 1;
    f.terms_.emplace(e, 1);
    return f;
}

int IntPolynomial::degree() const {
    if (terms_.empty()) return -1;
    const Exponents& e = terms_.begin()->first;
    return static_cast<int>(std::accumulate(e.begin(), e.end(), uint64_t{0}));
}

int IntPolynomial::degree_in(int var) const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, static_cast<int>(e[var]));
    return terms_.empty() ? -1 : d;
}

bool IntPolynomial::is_homogeneous() const {
    if (terms_.empty()) return true;
    uint64_t d0 = std::accumulate(terms_.begin()->first.begin(), terms_.begin()->first.end(),
                                  uint64_t{0});
    for (const auto& [e, c] : terms_) {
        if (std::accumulate(e.begin(), e.end(), uint64_t{0}) != d0) return false;
    }
    return true;
}

std::vector<int> IntPolynomial::support_vars() const {
    std::vector<int> vars;
    for (int v = 0; v < nvars_; ++v) {
        for (const auto& [e, c] : terms_) {
            if (e[v] > 0) {
                vars.push_back(v);
                break;
            }
        }
    }
    return vars;
}

const mpz_class& IntPolynomial::leading_coefficient() const {
    if (terms_.empty()) throw ValidationError("zero polynomial has no leading coefficient");
    return terms_.begin()->second;
}

void IntPolynomial::add_term(const Exponents& e, const mpz_class& c) {
    if (static_cast<int>(e.size()) != nvars_) throw ValidationError("exponent arity mismatch");
    if (c == 0) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

IntPolynomial IntPolynomial::operator-() const {
    IntPolynomial r(nvars_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

IntPolynomial IntPolynomial::operator+(const IntPolynomial& o) const {
    if (nvars_ != o.nvars_) throw ValidationError("polynomial arity mismatch");
    IntPolynomial r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

IntPolynomial IntPolynomial::operator-(const IntPolynomial& o) const { return *this + (-o); }

IntPolynomial IntPolynomial::operator*(const IntPolynomial& o) const {
    if (nvars_ != o.nvars_) throw ValidationError("polynomial arity mismatch");
    IntPolynomial r(nvars_);
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : o.terms_) {
            Exponents e(nvars_);
            for (int i = 0; i < nvars_; ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

IntPolynomial IntPolynomial::operator*(const mpz_class& c) const {
    IntPolynomial r(nvars_);
    if (c == 0) return r;
    for (const auto& [e, coef] : terms_) r.terms_.emplace(e, coef * c);
    return r;
}

bool IntPolynomial::operator==(const IntPolynomial& o) const {
    return nvars_ == o.nvars_ && terms_ == o.terms_;
}

bool IntPolynomial::operator<(const IntPolynomial& o) const {
    if (nvars_ != o.nvars_) return nvars_ < o.nvars_;
    auto a = terms_.begin();
    auto b = o.terms_.begin();
    GrlexGreater gt;
    for (; a != terms_.end() && b != o.terms_.end(); ++a, ++b) {
        if (gt(a->first, b->first)) return false;
        if (gt(b->first, a->first)) return true;
        int c = cmp(a->second, b->second);
        if (c != 0) return c < 0;
    }
    return a == terms_.end() && b != o.terms_.end();
}

mpz_class IntPolynomial::evaluate(const std::vector<mpz_class>& x) const {
    if (static_cast<int>(x.size()) != nvars_) throw ValidationError("evaluate: dimension mismatch");
    mpz_class acc = 0;
    mpz_class term, pw;
    for (const auto& [e, c] : terms_) {
        term = c;
        for (int i = 0; i < nvars_; ++i) {
            if (e[i] == 0) continue;
            mpz_pow_ui(pw.get_mpz_t(), x[i].get_mpz_t(), e[i]);
            term *= pw;
        }
        acc += term;
    }
    return acc;
}

int64_t IntPolynomial::evaluate_i64(const std::vector<int64_t>& x) const {
    std::vector<mpz_class> xv(x.size());
    for (size_t i = 0; i < x.size(); ++i) xv[i] = static_cast<long>(x[i]);
    mpz_class v = evaluate(xv);
    if (!v.fits_slong_p()) throw CapacityError("evaluate_i64: result overflows int64");
    return v.get_si();
}

IntPolynomial IntPolynomial::substitute(const std::vector<IntPolynomial>& subs) const {
    if (static_cast<int>(subs.size()) != nvars_)
        throw ValidationError("substitute: need one polynomial per variable");
    int target_nvars = subs.empty() ? 1 : subs[0].nvars();
    IntPolynomial acc(target_nvars);
    for (const auto& [e, c] : terms_) {
        IntPolynomial term = IntPolynomial::constant(target_nvars, c);
        for (int i = 0; i < nvars_; ++i) {
            for (uint32_t k = 0; k < e[i]; ++k) term = term * subs[i];
        }
        acc = acc + term;
    }
    return acc;
}

mpz_class IntPolynomial::content() const {
    if (terms_.empty()) throw ValidationError("content of zero polynomial");
    mpz_class g = 0;
    for (const auto& [e, c] : terms_) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}

std::pair<mpz_class, IntPolynomial> IntPolynomial::content_and_primitive() const {
    mpz_class g = content();
    // Content carries the sign of the leading coefficient.
    if (leading_coefficient() < 0) g = -g;
    IntPolynomial prim(nvars_);
    for (const auto& [e, c] : terms_) {
        mpz_class q;
        mpz_divexact(q.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
        prim.terms_.emplace(e, q);
    }
    return {g, prim};
}

IntPolynomial IntPolynomial::normalized() const { return content_and_primitive().second; }

std::string IntPolynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        mpz_class a = c;
        if (first) {
            if (a < 0) {
                os << "-";
                a = -a;
            }
        } else {
            os << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        bool has_var = std::any_of(e.begin(), e.end(), [](uint32_t x) { return x > 0; });
        bool coeff_shown = false;
        if (a != 1 || !has_var) {
            os << a.get_str();
            coeff_shown = true;
        }
        for (int i = 0; i < nvars_; ++i) {
            if (e[i] == 0) continue;
            if (coeff_shown) os << "*";
            os << "x" << (i + 1);
            if (e[i] > 1) os << "^" << e[i];
            coeff_shown = true;
        }
        first = false;
    }
    return os.str();
}

namespace {

struct Parser {
    const std::string& s;
    size_t pos = 0;
    int nvars;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }

    mpz_class parse_integer() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) throw ValidationError("polynomial parse: expected integer at " +
                                                std::to_string(start));
        return mpz_class(s.substr(start, pos - start));
    }

    // term := [int] ( '*'? var )*  with var := x<k> ['^' int]
    void parse_term(IntPolynomial& out, int sign) {
        mpz_class coeff = 1;
        Exponents e(nvars, 0);
        bool any = false;
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            coeff = parse_integer();
            any = true;
        }
        while (true) {
            char c = peek();
            if (c == '*') {
                ++pos;
                c = peek();
            }
            if (c != 'x') break;
            ++pos;
            mpz_class idx = parse_integer();
            long vi = idx.get_si();
            if (vi < 1 || vi > nvars)
                throw ValidationError("polynomial parse: variable x" + idx.get_str() +
                                      " out of range (nvars=" + std::to_string(nvars) + ")");
            uint32_t exp = 1;
            if (peek() == '^') {
                ++pos;
                mpz_class ev = parse_integer();
                exp = static_cast<uint32_t>(ev.get_ui());
            }
            e[vi - 1] += exp;
            any = true;
        }
        if (!any) throw ValidationError("polynomial parse: empty term at " + std::to_string(pos));
        out.add_term(e, sign < 0 ? -coeff : coeff);
    }

    IntPolynomial parse() {
        IntPolynomial out(nvars);
        int sign = 1;
        char c = peek();
        if (c == '+' || c == '-') {
            sign = (c == '-') ? -1 : 1;
            ++pos;
        }
        parse_term(out, sign);
        while (!eof()) {
            c = peek();
            if (c == '+' || c == '-') {
                sign = (c == '-') ? -1 : 1;
                ++pos;
                parse_term(out, sign);
            } else {
                throw ValidationError("polynomial parse: unexpected character '" +
                                      std::string(1, c) + "' at " + std::to_string(pos));
            }
        }
        return out;
    }
};

} // namespace

IntPolynomial parse_polynomial(const std::string& text, int nvars) {
    Parser p{text, 0, nvars};
    if (p.eof()) throw ValidationError("polynomial parse: empty input");
    return p.parse();
}

IntPolynomial FactorList::reconstruct(int nvars) const {
    IntPolynomial r = IntPolynomial::constant(nvars, unit.get_num());
    for (const auto& [f, mult] : factors) {
        for (int i = 0; i < mult; ++i) r = r * f;
    }
    if (unit.get_den() != 1) {
        auto [cont, prim] = r.content_and_primitive();
        mpz_class q;
        mpz_divexact(q.get_mpz_t(), cont.get_mpz_t(), unit.get_den().get_mpz_t());
        r = prim * q;
    }
    return r;
}

// ---- dense univariate ----

void UniPoly::normalize() {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

UniPoly UniPoly::from(const IntPolynomial& f, int var) {
    if (var < 0) {
        auto vars = f.support_vars();
        if (vars.size() > 1) throw ValidationError("polynomial is not univariate");
        var = vars.empty() ? 0 : vars[0];
    }
    UniPoly u;
    u.c.assign(static_cast<size_t>(std::max(0, f.degree_in(var)) + 1), 0);
    for (const auto& [e, coef] : f.terms()) {
        for (size_t i = 0; i < e.size(); ++i) {
            if (static_cast<int>(i) != var && e[i] != 0)
                throw ValidationError("polynomial is not univariate in the requested variable");
        }
        u.c[e[var]] = coef;
    }
    u.normalize();
    return u;
}

IntPolynomial UniPoly::to_polynomial(int nvars, int var) const {
    IntPolynomial f(nvars);
    for (size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0) continue;
        Exponents e(nvars, 0);
        e[var] = static_cast<uint32_t>(i);
        f.add_term(e, c[i]);
    }
    return f;
}

UniPoly uni_mul(const UniPoly& a, const UniPoly& b) {
    UniPoly r;
    if (a.is_zero() || b.is_zero()) return r;
    r.c.assign(a.c.size() + b.c.size() - 1, 0);
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    r.normalize();
    return r;
}

UniPoly uni_add(const UniPoly& a, const UniPoly& b) {
    UniPoly r;
    r.c.assign(std::max(a.c.size(), b.c.size()), 0);
    for (size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
    r.normalize();
    return r;
}

UniPoly uni_sub(const UniPoly& a, const UniPoly& b) {
    UniPoly r;
    r.c.assign(std::max(a.c.size(), b.c.size()), 0);
    for (size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r.c[i] -= b.c[i];
    r.normalize();
    return r;
}

UniPoly uni_derivative(const UniPoly& a) {
    UniPoly r;
    if (a.c.size() <= 1) return r;
    r.c.resize(a.c.size() - 1);
    for (size_t i = 1; i < a.c.size(); ++i) r.c[i - 1] = a.c[i] * static_cast<long>(i);
    r.normalize();
    return r;
}

mpz_class uni_content(const UniPoly& a) {
    mpz_class g = 0;
    for (const auto& x : a.c) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    return g;
}

UniPoly uni_primitive(const UniPoly& a) {
    if (a.is_zero()) return a;
    mpz_class g = uni_content(a);
    if (a.lc() < 0) g = -g;
    UniPoly r;
    r.c.resize(a.c.size());
    for (size_t i = 0; i < a.c.size(); ++i)
        mpz_divexact(r.c[i].get_mpz_t(), a.c[i].get_mpz_t(), g.get_mpz_t());
    return r;
}

UniPoly uni_divexact(const UniPoly& a, const UniPoly& b) {
    if (b.is_zero()) throw ValidationError("division by zero polynomial");
    UniPoly rem = a;
    UniPoly q;
    if (a.degree() < b.degree()) {
        if (a.is_zero()) return q;
        throw ValidationError("uni_divexact: not divisible");
    }
    q.c.assign(a.c.size() - b.c.size() + 1, 0);
    for (int i = rem.degree(); i >= b.degree();) {
        mpz_class qq, r2;
        mpz_tdiv_qr(qq.get_mpz_t(), r2.get_mpz_t(), rem.c[i].get_mpz_t(), b.lc().get_mpz_t());
        if (r2 != 0) throw ValidationError("uni_divexact: not divisible");
        int shift = i - b.degree();
        q.c[shift] = qq;
        for (int j = 0; j <= b.degree(); ++j) rem.c[j + shift] -= qq * b.c[j];
        rem.normalize();
        i = rem.degree();
    }
    if (!rem.is_zero()) throw ValidationError("uni_divexact: not divisible");
    return q;
}

bool uni_divides(const UniPoly& b, const UniPoly& a) {
    if (b.is_zero()) return a.is_zero();
    if (a.is_zero()) return true;
    UniPoly pa = uni_primitive(a), pb = uni_primitive(b);
    if (pb.degree() > pa.degree()) return false;
    try {
        (void)uni_divexact(pa, pb);
        return true;
    } catch (const ValidationError&) {
        return false;
    }
}

} // namespace omegalab
