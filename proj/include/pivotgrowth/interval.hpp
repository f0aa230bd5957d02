#pragma once

#include "pivotgrowth/rational.hpp"

#include <mpfr.h>

#include <string>

namespace pivotgrowth {

/// Closed real interval [lo, hi] with MPFR endpoints rounded outward.
/// Every operation returns an enclosure of the exact result.
class Interval {
public:
    explicit Interval(mpfr_prec_t precision = 128);
    Interval(const Rational& value, mpfr_prec_t precision);
    Interval(long value, mpfr_prec_t precision);
    Interval(const Interval& other);
    Interval(Interval&& other) noexcept;
    Interval& operator=(const Interval& other);
    Interval& operator=(Interval&& other) noexcept;
    ~Interval();

    mpfr_prec_t precision() const noexcept { return prec_; }

    Rational lower() const;
    Rational upper() const;
    double lower_double() const;
    double upper_double() const;
    double mid() const;

    /// Endpoints printed with `digits` significant decimal digits, rounded outward.
    std::string lower_string(int digits = 20) const;
    std::string upper_string(int digits = 20) const;

    bool contains(const Rational& value) const;
    bool certainly_positive() const;

    friend Interval operator+(const Interval& a, const Interval& b);
    friend Interval operator-(const Interval& a, const Interval& b);
    friend Interval operator*(const Interval& a, const Interval& b);
    /// Throws Error if b straddles zero.
    friend Interval operator/(const Interval& a, const Interval& b);
    Interval operator-() const;

    friend Interval log(const Interval& x);
    friend Interval exp(const Interval& x);
    friend Interval sqrt(const Interval& x);
    /// x^y for x > 0.
    friend Interval pow(const Interval& x, const Interval& y);
    friend Interval min(const Interval& a, const Interval& b);
    friend Interval max(const Interval& a, const Interval& b);
    /// Smallest interval containing both.
    friend Interval hull(const Interval& a, const Interval& b);

    mpfr_srcptr lo() const noexcept { return lo_; }
    mpfr_srcptr hi() const noexcept { return hi_; }

private:
    mpfr_prec_t prec_;
    mpfr_t lo_;
    mpfr_t hi_;
};

} // namespace pivotgrowth
