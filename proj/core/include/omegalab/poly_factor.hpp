#pragma once

#include "omegalab/poly.hpp"

namespace omegalab {

// Degrees above this are refused (unsupported-degree error).
inline constexpr int kMaxFactorDegree = 12;

// Full factorization over Q of a univariate polynomial with integer
// coefficients. Factors are primitive, irreducible, sign-normalized.
FactorList factor_univariate(const IntPolynomial& f);

// Factorization of a homogeneous binary form; every factor is homogeneous.
FactorList factor_binary_form(const IntPolynomial& f);

// Primitive sign-normalized gcd via the primitive PRS.
IntPolynomial gcd_univariate(const IntPolynomial& f, const IntPolynomial& g);

UniPoly uni_gcd(const UniPoly& a, const UniPoly& b);

// Number of distinct roots of f in F_p (degree of gcd(f, x^p - x) mod p).
int count_roots_mod_p(const UniPoly& f, uint64_t p);

// Number of common distinct roots of f and g in F_p.
int count_common_roots_mod_p(const UniPoly& f, const UniPoly& g, uint64_t p);
// Common roots of a family; identically-zero reductions impose no constraint.
int count_common_roots_mod_p(const std::vector<UniPoly>& fs, uint64_t p);

// Roots of a homogeneous binary form in P^1(F_p), distinct, including (1:0).
int count_projective_roots_binary(const IntPolynomial& form, uint64_t p);
int count_common_projective_roots_binary(const IntPolynomial& f, const IntPolynomial& g,
                                         uint64_t p);
int count_common_projective_roots_binary(const std::vector<IntPolynomial>& forms, uint64_t p);

} // namespace omegalab
