#pragma once

#include <stdexcept>
#include <string>

namespace crosscam {

// Error hierarchy. Everything thrown by the library derives from Error so
// callers can catch one type at the CLI boundary.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A point maps to (or too close to) the line at infinity under a homography.
struct DegeneratePoint : Error {
    using Error::Error;
};

// Homography (or a product of homographies) is not invertible.
struct Singular : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

// Malformed input file; message carries the line number.
struct ParseError : Error {
    using Error::Error;
};

// Structurally valid file whose content violates the schema.
struct SchemaError : Error {
    using Error::Error;
};

struct EmptyMatrix : Error {
    using Error::Error;
};

struct MissingHomography : Error {
    using Error::Error;
};

struct InvalidAgreement : Error {
    using Error::Error;
};

struct OutOfRange : Error {
    using Error::Error;
};

struct MissingInput : Error {
    using Error::Error;
};

struct EmptyInput : Error {
    using Error::Error;
};

// Bad scenario configuration; message carries the offending field path.
struct ConfigError : Error {
    using Error::Error;
};

// Inconsistent run setup detected by the server.
struct ScenarioError : Error {
    using Error::Error;
};

}  // namespace crosscam
