#pragma once

#include <stdexcept>
#include <string>

namespace cndisc {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument does not hold (bad degree, bad probability, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// The left or right support of an interstitial window runs past the series ends.
class WindowOutOfBounds : public Error {
public:
    using Error::Error;
};

/// The series admits no interstitial point with full left and right support.
class SeriesTooShort : public Error {
public:
    using Error::Error;
};

class RankDeficient : public Error {
public:
    using Error::Error;
};

/// Condition number of the reduced design matrix exceeded the configured limit.
class IllConditioned : public Error {
public:
    IllConditioned(const std::string& what, double condition)
        : Error(what), condition_(condition) {}

    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

class NotPositiveSemidefinite : public Error {
public:
    using Error::Error;
};

/// A knot placement leaves some B-spline basis function without samples.
class InadmissibleKnots : public Error {
public:
    using Error::Error;
};

class OutOfRange : public Error {
public:
    using Error::Error;
};

}  // namespace cndisc
