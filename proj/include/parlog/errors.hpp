#ifndef PARLOG_ERRORS_HPP
#define PARLOG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace parlog {

// Base for all library errors.  Negative verdicts (not unifiable, not
// projective, rule not admissible, ...) are ordinary return values; only
// misuse, resource caps and broken internal invariants throw.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad input text: tokenizer/grammar failures, unknown atoms under an
// explicit signature, sort clashes.
struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error("parse error: " + msg) {}
};

// Structurally invalid Kripke model (not rooted, persistence violation,
// cycle outside reflexivity, malformed model file).
struct ValidationError : Error {
    explicit ValidationError(const std::string& msg) : Error("invalid model: " + msg) {}
};

// A configured resource cap was hit (bank size, enumeration width,
// variable count for the unifier ladder, ...).  Callers may retry with
// larger limits.
struct LimitError : Error {
    explicit LimitError(const std::string& msg) : Error("limit exceeded: " + msg) {}
};

// A guaranteed postcondition failed to verify.  Never expected; indicates
// a bug, so callers should not catch this.
struct InternalError : Error {
    explicit InternalError(const std::string& msg) : Error("internal invariant broken: " + msg) {}
};

// No fresh atom name is available (every candidate collides with an atom of
// the input formulas).  Callers must extend the signature.
struct SignatureExhausted : Error {
    explicit SignatureExhausted(const std::string& msg) : Error("signature exhausted: " + msg) {}
};

} // namespace parlog

#endif
