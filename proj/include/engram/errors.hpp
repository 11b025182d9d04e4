#pragma once

#include <stdexcept>
#include <string>

namespace engram {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Unknown field, value overflow, or a word that does not conform to its schema.
struct SchemaError : Error {
    using Error::Error;
};

/// Malformed nanocode assembly or scenario text. Messages carry line numbers.
struct ParseError : Error {
    using Error::Error;
};

/// A nanocode program failed the FM/TO disjointness or range check at a gate
/// that requires a verified program.
struct VerifyError : Error {
    using Error::Error;
};

/// Attempt to overwrite or mutate a committed long-term-memory word.
struct WriteOnceViolation : Error {
    using Error::Error;
};

/// An arithmetic-fact lookup matched more than one committed fact.
struct FactTableError : Error {
    using Error::Error;
};

/// deliver() called on a NoRecall outcome, or an argmax over an empty match set.
struct DeliveryError : Error {
    using Error::Error;
};

} // namespace engram
