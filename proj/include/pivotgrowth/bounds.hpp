#pragma once

#include "pivotgrowth/elimination.hpp"
#include "pivotgrowth/interval.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>

namespace pivotgrowth {

inline constexpr mpfr_prec_t kDefaultPrecision = 128;

/// sqrt(n * 2 * 3^(1/2) * ... * n^(1/(n-1))), the Hadamard-inequality bound for
/// complete pivoting, in product form.
Interval wilkinson_bound(std::size_t n, mpfr_prec_t precision = kDefaultPrecision);

/// (3/2) n^(3 ln(n) / 4), the rook pivoting bound.
Interval foster_rook_bound(std::size_t n, mpfr_prec_t precision = kDefaultPrecision);

/// prod_{i<terms} (1 - a q^i). Requires |a| <= 1 and 0 <= q < 1.
Interval q_pochhammer(const Rational& a, const Rational& q, std::size_t terms,
                      mpfr_prec_t precision = kDefaultPrecision);

/// The infinite product, truncated once the tail factor is within `tolerance`
/// of 1. The lower endpoint accounts for the tail, so it bounds the infinite
/// product from below. Throws Divergent when q >= 1.
Interval q_pochhammer_infinite(const Rational& a, const Rational& q,
                               const Rational& tolerance = Rational(1, 1000000000000UL),
                               mpfr_prec_t precision = kDefaultPrecision);

inline constexpr const char* kSourceLocal = "local-search";
inline constexpr const char* kSourceImported = "imported";
inline constexpr const char* kSourcePaper = "paper-reported";

struct LowerBoundEntry {
    Rational value;
    std::string source = kSourceLocal;
};

/// Lower bounds on the maximal growth per dimension for one strategy.
struct LowerBoundTable {
    PivotStrategy strategy = PivotStrategy::Complete;
    std::map<std::size_t, LowerBoundEntry> entries;

    void set(std::size_t n, Rational value, std::string source = kSourceLocal) {
        entries[n] = LowerBoundEntry{std::move(value), std::move(source)};
    }
    std::optional<Rational> at(std::size_t n) const;
    /// Copy keeping only entries backed by certificates.
    LowerBoundTable certified_only() const;
    bool empty() const { return entries.empty(); }
};

/// Published complete pivoting lower bounds, n = 1..75 and 100.
LowerBoundTable published_complete_table();
/// Published rook pivoting lower bound at n = 48.
LowerBoundTable published_rook_table();

struct LinearExtrapolation {
    std::size_t k = 0;
    Rational base_constant;      // min lb(n)/n over [k, 2k)
    std::size_t argmin = 0;
    Interval pochhammer;         // (1/k; 1/2)_inf
    Rational constant;           // rounded down; g(n) >= constant * n for n >= k
};

/// Throws MissingEntries naming each absent n in [k, 2k).
LinearExtrapolation extrapolate_linear_constant(const LowerBoundTable& table, std::size_t k,
                                                mpfr_prec_t precision = kDefaultPrecision);

struct LimsupBound {
    Rational ratio;  // max lb(n)/n
    std::size_t n = 0;
};

/// Throws Error on an empty table.
LimsupBound doubling_limsup(const LowerBoundTable& table);

struct PowerLawBound {
    std::size_t k = 0;
    Rational exponent;  // rounded down
    Rational constant;  // rounded down; g(n) >= constant * n^exponent for all n
};

PowerLawBound rook_exponent(const LowerBoundTable& table, mpfr_prec_t precision = kDefaultPrecision);

/// Assumed upper bound g(n) on the maximal growth used by the mantissa requirement.
struct GrowthModel {
    enum class Kind { Linear3n, HalfSquare, Wilkinson, Custom } kind = Kind::Linear3n;
    std::function<Interval(std::size_t, mpfr_prec_t)> custom;

    static GrowthModel linear() { return {Kind::Linear3n, {}}; }
    static GrowthModel half_square() { return {Kind::HalfSquare, {}}; }
    static GrowthModel wilkinson() { return {Kind::Wilkinson, {}}; }
    std::string name() const;
};

/// Smallest t with beta^(t-1) >= (1+C)(4+5C)/C * sum_{m<n} g(m) * sum_{l<=n-m} g(l).
std::uint64_t mantissa_requirement(std::uint64_t n, const GrowthModel& model, const Rational& C,
                                   unsigned beta = 2, mpfr_prec_t precision = kDefaultPrecision);

/// Largest n with mantissa_requirement(n) <= t.
std::uint64_t max_n_for_mantissa(std::uint64_t t, const GrowthModel& model, const Rational& C,
                                 unsigned beta = 2, mpfr_prec_t precision = kDefaultPrecision);

struct BoundReport {
    std::size_t n = 0;
    PivotStrategy strategy = PivotStrategy::Complete;
    Interval wilkinson_upper;
    Interval foster_upper;
    std::optional<Rational> best_known_lower;
    std::string best_known_source;
    Rational extrapolated_lower;
    std::string derivation;
};

/// Combines the bounds for one n. Lower bounds use `table`; the extrapolation
/// chains bordering, doubling (complete) or Kronecker products (rook).
BoundReport bound_report(std::size_t n, PivotStrategy strategy, const LowerBoundTable& table,
                         mpfr_prec_t precision = kDefaultPrecision);

} // namespace pivotgrowth
