#pragma once

#include <optional>
#include <string>
#include <vector>

#include "omegalab/arith.hpp"
#include "omegalab/poly.hpp"

namespace omegalab {

enum class Ambient { Affine, Projective };

enum class EnumeratorKind {
    BoxScan,
    ConicParametrization,
    Pythagorean,
    Det2Parametrization,
    GenericLastVariableSolve,
};

std::string enumerator_name(EnumeratorKind k);
EnumeratorKind enumerator_from_name(const std::string& name);

// Closed subscheme of the host model, given by ideal generators.
struct DivisorSpec {
    std::string label;
    std::vector<IntPolynomial> generators;
};

struct VarietySpec {
    std::string name;
    Ambient ambient = Ambient::Affine;
    int dim = 1; // ambient dimension; coordinates = dim (affine) or dim+1 (projective)
    std::vector<IntPolynomial> equations;
    EnumeratorKind enumerator = EnumeratorKind::BoxScan;
    std::vector<uint64_t> bad_primes;
    // Required by the conic parametrization: a primitive integral point.
    std::optional<std::vector<int64_t>> rational_point;

    int ncoords() const { return ambient == Ambient::Affine ? dim : dim + 1; }
    bool is_bad_prime(uint64_t p) const;

    // Throws ValidationError if invariants fail or the enumerator does not
    // apply to the equations.
    void validate() const;
};

struct VarietyConfig {
    VarietySpec variety;
    std::vector<DivisorSpec> divisors;

    const DivisorSpec& divisor(const std::string& label) const;
};

VarietyConfig load_variety_config(const std::string& json_text);
VarietyConfig load_variety_config_file(const std::string& path);
std::string variety_config_to_json(const VarietyConfig& config);

struct IntegralPoint {
    std::vector<int64_t> coords;

    bool operator==(const IntegralPoint& o) const { return coords == o.coords; }
    bool operator<(const IntegralPoint& o) const { return coords < o.coords; }
};

// gcd division + first-nonzero-positive sign rule; all-zero input is an error.
IntegralPoint canonicalize_projective(std::vector<int64_t> coords);

// Thrown when an enumeration budget runs out; carries the partial stream.
class PartialEnumerationError : public CapacityError {
  public:
    PartialEnumerationError(const std::string& what, std::vector<IntegralPoint> partial)
        : CapacityError(what), points(std::move(partial)) {}
    std::vector<IntegralPoint> points;
};

struct EnumOptions {
    // Coordinates that must be nonzero (empty mask = no constraint).
    std::vector<bool> nonzero_mask;
    // Operation budget for scan-type strategies.
    uint64_t budget = 2'000'000'000ULL;
    // Restriction of the strategy's leading parameter; enumerations over a
    // disjoint cover of the domain emit disjoint point sets whose union is the
    // unrestricted enumeration.
    std::optional<std::pair<int64_t, int64_t>> range;
    // Factorization table (required by the det2 strategy).
    const PrimeTable* table = nullptr;
};

// Inclusive domain of the leading parameter at height bound B.
std::pair<int64_t, int64_t> enumeration_domain(const VarietySpec& v, int64_t B);

std::vector<IntegralPoint> enumerate_points(const VarietySpec& v, int64_t B,
                                            const EnumOptions& opts = {});

std::string points_to_csv(const std::vector<IntegralPoint>& points, int ncoords);

} // namespace omegalab
