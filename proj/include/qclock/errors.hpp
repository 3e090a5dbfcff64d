#pragma once

#include <stdexcept>
#include <string>

namespace qclock {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

class ConfigurationError : public Error {
public:
    using Error::Error;
};

// Eigenvalue pair of the effective generator too close to the imaginary axis.
class SingularGenerator : public Error {
public:
    using Error::Error;
};

class NonTickingClock : public Error {
public:
    using Error::Error;
};

class OptimizationFailed : public Error {
public:
    using Error::Error;
};

class GridRefinementError : public Error {
public:
    using Error::Error;
};

}  // namespace qclock
