#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pivotgrowth {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A pivot a^{(k)}_{k,k} was exactly zero. `step()` is 1-based.
class ZeroPivot : public Error {
public:
    explicit ZeroPivot(std::size_t step)
        : Error("zero pivot at elimination step " + std::to_string(step)), step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

class Singular : public Error {
public:
    explicit Singular(std::size_t step)
        : Error("matrix is singular: no nonzero pivot at step " + std::to_string(step)),
          step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// An input was required to satisfy a pivoting predicate and does not.
class NotPivoted : public Error {
public:
    using Error::Error;
};

class SlackTooLarge : public Error {
public:
    using Error::Error;
};

class NotNormalized : public Error {
public:
    using Error::Error;
};

class MissingEntries : public Error {
public:
    using Error::Error;
};

class Divergent : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class SearchFailed : public Error {
public:
    using Error::Error;
};

class VerificationFailed : public Error {
public:
    using Error::Error;
};

/// A ledger update that does not strictly improve the stored growth.
class RejectedNotBetter : public Error {
public:
    using Error::Error;
};

} // namespace pivotgrowth
