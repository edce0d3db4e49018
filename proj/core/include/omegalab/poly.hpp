#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "omegalab/errors.hpp"

namespace omegalab {

using Exponents = std::vector<uint32_t>;

// Graded lexicographic, descending (leading term first).
struct GrlexGreater {
    bool operator()(const Exponents& a, const Exponents& b) const;
};

// Sparse multivariate polynomial with exact integer coefficients.
// Terms are kept in canonical graded-lex order with no zero coefficients.
class IntPolynomial {
  public:
    IntPolynomial() = default;
    explicit IntPolynomial(int nvars) : nvars_(nvars) {
        if (nvars < 1) throw ValidationError("polynomial needs >= 1 variable");
    }
    static IntPolynomial constant(int nvars, const mpz_class& c);
    static IntPolynomial variable(int nvars, int index); // x_{index}, 0-based

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    int degree() const; // total degree; -1 for the zero polynomial
    int degree_in(int var) const;
    bool is_homogeneous() const;
    bool is_constant() const { return degree() <= 0; }

    // Variables that actually occur.
    std::vector<int> support_vars() const;

    const std::map<Exponents, mpz_class, GrlexGreater>& terms() const { return terms_; }
    const mpz_class& leading_coefficient() const;

    void add_term(const Exponents& e, const mpz_class& c);

    IntPolynomial operator-() const;
    IntPolynomial operator+(const IntPolynomial& o) const;
    IntPolynomial operator-(const IntPolynomial& o) const;
    IntPolynomial operator*(const IntPolynomial& o) const;
    IntPolynomial operator*(const mpz_class& c) const;
    bool operator==(const IntPolynomial& o) const;
    bool operator!=(const IntPolynomial& o) const { return !(*this == o); }
    bool operator<(const IntPolynomial& o) const; // arbitrary total order for containers

    mpz_class evaluate(const std::vector<mpz_class>& x) const;
    int64_t evaluate_i64(const std::vector<int64_t>& x) const; // overflow-checked narrowing

    // Substitute each variable by a polynomial (all in the same new ring).
    IntPolynomial substitute(const std::vector<IntPolynomial>& subs) const;

    // gcd of coefficients (positive); content of zero polynomial is an error.
    mpz_class content() const;
    std::pair<mpz_class, IntPolynomial> content_and_primitive() const;

    // Sign-normalized primitive part: content 1, leading coefficient > 0.
    IntPolynomial normalized() const;

    std::string to_string() const;

  private:
    int nvars_ = 1;
    std::map<Exponents, mpz_class, GrlexGreater> terms_;
};

// Text format: sparse sum of terms over variables x1..xn, e.g.
//   "x1^2 + 2*x1*x2 - x3^2"
// Round-trips with IntPolynomial::to_string().
IntPolynomial parse_polynomial(const std::string& text, int nvars);

struct FactorList {
    mpq_class unit;
    std::vector<std::pair<IntPolynomial, int>> factors; // (irreducible primitive, multiplicity)

    IntPolynomial reconstruct(int nvars) const;
    int distinct_count() const { return static_cast<int>(factors.size()); }
};

// ---- dense univariate helpers (used by the factorizer and root counting) ----

// Dense univariate polynomial over Z; c[i] is the coefficient of x^i.
struct UniPoly {
    std::vector<mpz_class> c;

    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    void normalize();
    const mpz_class& lc() const { return c.back(); }

    static UniPoly from(const IntPolynomial& f, int var = -1);
    IntPolynomial to_polynomial(int nvars, int var) const;
};

UniPoly uni_mul(const UniPoly& a, const UniPoly& b);
UniPoly uni_add(const UniPoly& a, const UniPoly& b);
UniPoly uni_sub(const UniPoly& a, const UniPoly& b);
UniPoly uni_derivative(const UniPoly& a);
mpz_class uni_content(const UniPoly& a);
UniPoly uni_primitive(const UniPoly& a); // primitive, lc > 0
// Exact division; throws if the division is not exact.
UniPoly uni_divexact(const UniPoly& a, const UniPoly& b);
bool uni_divides(const UniPoly& b, const UniPoly& a); // b | a over Q (primitive parts)

} // namespace omegalab
