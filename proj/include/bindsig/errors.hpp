#pragma once

#include <stdexcept>
#include <string>

namespace bindsig {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A de Bruijn index fell outside its context, or a named variable
// could not be resolved.
struct ScopeError : Error {
    using Error::Error;
};

// An operation was applied to the wrong number of arguments, or an
// argument lives in the wrong context for its binding slot.
struct ArityError : Error {
    using Error::Error;
};

// Malformed signature-level data: unknown operation names, clashing
// declarations, a quotient rule attached to an operation of the wrong
// shape, a morphism that fails to preserve arities.
struct SignatureError : Error {
    using Error::Error;
};

// Rejected input file (JSON signature or translation mapping).
struct SchemaError : Error {
    using Error::Error;
};

// Rejected concrete syntax (s-expression terms).
struct ParseError : Error {
    using Error::Error;
};

// A configured limit was exceeded: normalization budget, permutation
// search width, generator that cannot make progress.
struct ConfigError : Error {
    using Error::Error;
};

// A model failed a precondition it was asked to satisfy, such as the
// sampled respect check before folding through a quotient or the shared
// agreement check when gluing two models.
struct ModelError : Error {
    using Error::Error;
};

} // namespace bindsig
