#pragma once

#include <stdexcept>
#include <string>

namespace wri {

// Base class for everything this library throws.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class EmptySeriesError : public Error {
public:
    using Error::Error;
};

class NonFiniteError : public Error {
public:
    using Error::Error;
};

class EmptyInputError : public Error {
public:
    using Error::Error;
};

class InvalidSnapshotError : public Error {
public:
    using Error::Error;
};

class NoPositiveIndicatorsError : public Error {
public:
    using Error::Error;
};

class DegenerateIndexError : public Error {
public:
    using Error::Error;
};

class KOutOfRangeError : public Error {
public:
    using Error::Error;
};

class MismatchedUniverseError : public Error {
public:
    using Error::Error;
};

// File content could not be parsed; message carries row/column context.
class ParseError : public Error {
public:
    using Error::Error;
};

// Structurally valid file referencing unknown indicators or missing columns.
class SchemaError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Network-level failure (connect, timeout, cassette miss in replay mode).
class FetchError : public Error {
public:
    using Error::Error;
};

// A response arrived but the extraction rule could not produce a value.
class ExtractError : public Error {
public:
    using Error::Error;
};

class AllProbesFailedError : public Error {
public:
    using Error::Error;
};

} // namespace wri
