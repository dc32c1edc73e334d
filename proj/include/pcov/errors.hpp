#ifndef PCOV_ERRORS_HPP
#define PCOV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pcov {

// Base class for all engine errors.
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// A predicate (zero test, valuation, p-power test) cannot be decided at the
// current precision, or an iteration budget ran out before a loop settled.
struct precision_error : error {
    explicit precision_error(const std::string& msg) : error(msg) {}
};

// The input violates the ramification-index-1 hypothesis: a normalization
// step ran into a pi-exponent not divisible by p.
struct ramification_error : error {
    explicit ramification_error(const std::string& msg) : error(msg) {}
};

// A closed-form formula was queried outside its stated hypotheses
// (named inequality violated, non-integral genus, ...).
struct hypothesis_error : error {
    explicit hypothesis_error(const std::string& msg) : error(msg) {}
};

// Structural or constraint failure in degeneration-data validation.
struct validation_error : error {
    explicit validation_error(const std::string& msg) : error(msg) {}
};

// Malformed input (bad JSON payload, mismatched arity, mixed rings, ...).
struct schema_error : error {
    explicit schema_error(const std::string& msg) : error(msg) {}
};

} // namespace pcov

#endif
