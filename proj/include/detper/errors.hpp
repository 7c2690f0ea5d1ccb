#pragma once

#include <stdexcept>
#include <string>

namespace detper {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Inversion was requested for a residue divisible by p.
struct NonUnit : Error {
    explicit NonUnit(const std::string& msg) : Error(msg) {}
};

// Division by an exact zero in a field.
struct DivisionByZero : Error {
    explicit DivisionByZero(const std::string& msg) : Error(msg) {}
};

// Order finding was asked for an element outside the norm-one subgroup.
struct NotNormOne : Error {
    explicit NotNormOne(const std::string& msg) : Error(msg) {}
};

// Trial-division factoring refuses inputs beyond the desk-scale cap.
struct FactorizationBudgetExceeded : Error {
    explicit FactorizationBudgetExceeded(const std::string& msg) : Error(msg) {}
};

// A construction or check was requested for a prime outside its congruence class.
struct BadCongruenceClass : Error {
    explicit BadCongruenceClass(const std::string& msg) : Error(msg) {}
};

// The working precision was consumed before the requested digits were resolved.
struct PrecisionExhausted : Error {
    explicit PrecisionExhausted(const std::string& msg) : Error(msg) {}
};

// A permanent was requested beyond the configured Ryser dimension cap.
struct RyserBudgetExceeded : Error {
    explicit RyserBudgetExceeded(const std::string& msg) : Error(msg) {}
};

// A result field was read at a precision the computation cannot certify.
struct PrecisionUnderflow : Error {
    explicit PrecisionUnderflow(const std::string& msg) : Error(msg) {}
};

// An unrecognized check identifier was passed to the dispatcher.
struct UnknownCheckId : Error {
    explicit UnknownCheckId(const std::string& msg) : Error(msg) {}
};

}  // namespace detper
