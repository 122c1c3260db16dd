#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ndec {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside its admissible numeric range.
class RangeError : public Error {
public:
    using Error::Error;
};

// Vector or matrix shapes that do not line up.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Requested enumeration or table exceeds a hard size bound.
class CapacityError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class ConstructionError : public Error {
public:
    using Error::Error;
};

class InvariantViolation : public Error {
public:
    using Error::Error;
};

class ContractViolation : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class CorruptModel : public Error {
public:
    using Error::Error;
};

// NaN or Inf observed at a layer boundary.
class NumericFault : public Error {
public:
    NumericFault(std::size_t layer, const std::string& what)
        : Error("numeric fault at layer " + std::to_string(layer) + ": " + what), layer_(layer) {}

    std::size_t layer() const noexcept { return layer_; }

private:
    std::size_t layer_;
};

}  // namespace ndec
