#pragma once

#include <stdexcept>
#include <string>

namespace afm {

// Base class for every error the library raises.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidConfig : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

// A tokenizer vocabulary or other external asset could not be loaded.
class AssetLoadError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

// A model reply did not contain the token we asked for (label, verdict).
class ParseError : public Error {
public:
    using Error::Error;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

class EmptyResults : public Error {
public:
    using Error::Error;
};

// Gateway failures. None of them are retried.
class GatewayError : public Error {
public:
    using Error::Error;
};

class GatewayConfigError : public GatewayError {
public:
    using GatewayError::GatewayError;
};

class NetworkError : public GatewayError {
public:
    using GatewayError::GatewayError;
};

class HttpStatusError : public GatewayError {
public:
    HttpStatusError(int status, const std::string& body)
        : GatewayError("HTTP " + std::to_string(status) + ": " + body), status_(status) {}

    int status() const { return status_; }

private:
    int status_;
};

class DecodeError : public GatewayError {
public:
    using GatewayError::GatewayError;
};

}  // namespace afm
