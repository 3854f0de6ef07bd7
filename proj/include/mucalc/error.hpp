#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mucalc {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Lexical or syntactic problem in formula / dump / model text.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t pos)
        : Error(msg + " at position " + std::to_string(pos)), position(pos) {}
    std::size_t position;
};

// A bound variable occurs under an odd number of negations inside its binder.
class NegativeBoundVariable : public Error {
public:
    explicit NegativeBoundVariable(const std::string& var)
        : Error("bound variable '" + var + "' occurs negatively"), variable(var) {}
    std::string variable;
};

// Input violates a documented precondition (not NNF, generalized automaton, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

// A size guard was exceeded (state cap, enumeration bound).
class ResourceError : public Error {
public:
    using Error::Error;
};

}  // namespace mucalc
