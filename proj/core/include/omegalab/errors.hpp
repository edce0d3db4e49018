#pragma once

#include <stdexcept>
#include <string>

namespace omegalab {

// Error taxonomy shared by all modules. The CLI maps these onto exit codes:
// validation errors -> 2, budget/capacity errors -> 3.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct CapacityError : std::runtime_error {
    explicit CapacityError(const std::string& msg) : std::runtime_error(msg) {}
};

// A factorization request that the prime table cannot certify.
struct InsufficientTableError : std::runtime_error {
    explicit InsufficientTableError(const std::string& msg) : std::runtime_error(msg) {}
};

// A caller-supplied callback broke its stated contract (e.g. a prime weight
// exceeding its declared bound).
struct ContractError : std::runtime_error {
    explicit ContractError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace omegalab
