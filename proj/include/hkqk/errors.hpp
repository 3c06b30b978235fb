#pragma once

#include <stdexcept>
#include <string>

namespace hkqk {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Metric (or a pivot of it) is numerically singular.
class DegenerateMetric : public Error {
public:
    using Error::Error;
};

// A rank-4 covariant tensor is not antisymmetric in (1,2) and (3,4).
class PairAntisymmetryViolated : public Error {
public:
    using Error::Error;
};

class NotSkewAdjoint : public Error {
public:
    using Error::Error;
};

class AdjointnessViolated : public Error {
public:
    using Error::Error;
};

// A point (or a finite-difference sample around it) lies outside f_Z > 0.
class DomainViolation : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace hkqk
