#include "pivotgrowth/interval.hpp"

#include "pivotgrowth/errors.hpp"

#include <algorithm>
#include <vector>

namespace pivotgrowth {

Interval::Interval(mpfr_prec_t precision) : prec_(precision) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
}

Interval::Interval(const Rational& value, mpfr_prec_t precision) : Interval(precision) {
    mpfr_set_q(lo_, value.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(hi_, value.get_mpq_t(), MPFR_RNDU);
}

Interval::Interval(long value, mpfr_prec_t precision) : Interval(precision) {
    mpfr_set_si(lo_, value, MPFR_RNDD);
    mpfr_set_si(hi_, value, MPFR_RNDU);
}

Interval::Interval(const Interval& other) : Interval(other.prec_) {
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& other) noexcept : Interval(other) {}

Interval& Interval::operator=(const Interval& other) {
    if (this == &other) return *this;
    if (prec_ != other.prec_) {
        prec_ = other.prec_;
        mpfr_set_prec(lo_, prec_);
        mpfr_set_prec(hi_, prec_);
    }
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
    return *this;
}

Interval& Interval::operator=(Interval&& other) noexcept {
    if (this != &other) {
        mpfr_swap(lo_, other.lo_);
        mpfr_swap(hi_, other.hi_);
        std::swap(prec_, other.prec_);
    }
    return *this;
}

Interval::~Interval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
}

Rational Interval::lower() const {
    Rational out;
    mpfr_get_q(out.get_mpq_t(), lo_);
    return out;
}

Rational Interval::upper() const {
    Rational out;
    mpfr_get_q(out.get_mpq_t(), hi_);
    return out;
}

double Interval::lower_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double Interval::upper_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }

double Interval::mid() const {
    mpfr_t m;
    mpfr_init2(m, prec_ + 1);
    mpfr_add(m, lo_, hi_, MPFR_RNDN);
    mpfr_div_2ui(m, m, 1, MPFR_RNDN);
    const double d = mpfr_get_d(m, MPFR_RNDN);
    mpfr_clear(m);
    return d;
}

namespace {

std::string format(mpfr_srcptr x, int digits, mpfr_rnd_t rnd) {
    const std::string fmt = "%." + std::to_string(digits) + "R" + (rnd == MPFR_RNDD ? "D" : "U") + "g";
    char* buf = nullptr;
    mpfr_asprintf(&buf, fmt.c_str(), x);
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
}

mpfr_prec_t joint(const Interval& a, const Interval& b) { return std::max(a.precision(), b.precision()); }

} // namespace

std::string Interval::lower_string(int digits) const { return format(lo_, digits, MPFR_RNDD); }
std::string Interval::upper_string(int digits) const { return format(hi_, digits, MPFR_RNDU); }

bool Interval::contains(const Rational& value) const {
    return mpfr_cmp_q(lo_, value.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, value.get_mpq_t()) >= 0;
}

bool Interval::certainly_positive() const { return mpfr_sgn(lo_) > 0; }

Interval operator+(const Interval& a, const Interval& b) {
    Interval out(joint(a, b));
    mpfr_add(out.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_add(out.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return out;
}

Interval operator-(const Interval& a, const Interval& b) {
    Interval out(joint(a, b));
    mpfr_sub(out.lo_, a.lo_, b.hi_, MPFR_RNDD);
    mpfr_sub(out.hi_, a.hi_, b.lo_, MPFR_RNDU);
    return out;
}

Interval Interval::operator-() const {
    Interval out(prec_);
    mpfr_neg(out.lo_, hi_, MPFR_RNDD);
    mpfr_neg(out.hi_, lo_, MPFR_RNDU);
    return out;
}

Interval operator*(const Interval& a, const Interval& b) {
    const mpfr_prec_t p = joint(a, b);
    Interval out(p);
    mpfr_t t;
    mpfr_init2(t, p);
    mpfr_srcptr xs[2] = {a.lo_, a.hi_};
    mpfr_srcptr ys[2] = {b.lo_, b.hi_};
    bool first = true;
    for (auto x : xs)
        for (auto y : ys) {
            mpfr_mul(t, x, y, MPFR_RNDD);
            if (first || mpfr_less_p(t, out.lo_)) mpfr_set(out.lo_, t, MPFR_RNDD);
            mpfr_mul(t, x, y, MPFR_RNDU);
            if (first || mpfr_greater_p(t, out.hi_)) mpfr_set(out.hi_, t, MPFR_RNDU);
            first = false;
        }
    mpfr_clear(t);
    return out;
}

Interval operator/(const Interval& a, const Interval& b) {
    if (mpfr_sgn(b.lo_) <= 0 && mpfr_sgn(b.hi_) >= 0) throw Error("interval division by a range containing 0");
    const mpfr_prec_t p = joint(a, b);
    Interval out(p);
    mpfr_t t;
    mpfr_init2(t, p);
    mpfr_srcptr xs[2] = {a.lo_, a.hi_};
    mpfr_srcptr ys[2] = {b.lo_, b.hi_};
    bool first = true;
    for (auto x : xs)
        for (auto y : ys) {
            mpfr_div(t, x, y, MPFR_RNDD);
            if (first || mpfr_less_p(t, out.lo_)) mpfr_set(out.lo_, t, MPFR_RNDD);
            mpfr_div(t, x, y, MPFR_RNDU);
            if (first || mpfr_greater_p(t, out.hi_)) mpfr_set(out.hi_, t, MPFR_RNDU);
            first = false;
        }
    mpfr_clear(t);
    return out;
}

Interval log(const Interval& x) {
    if (mpfr_sgn(x.lo_) <= 0) throw Error("interval log of a nonpositive range");
    Interval out(x.prec_);
    mpfr_log(out.lo_, x.lo_, MPFR_RNDD);
    mpfr_log(out.hi_, x.hi_, MPFR_RNDU);
    return out;
}

Interval exp(const Interval& x) {
    Interval out(x.prec_);
    mpfr_exp(out.lo_, x.lo_, MPFR_RNDD);
    mpfr_exp(out.hi_, x.hi_, MPFR_RNDU);
    return out;
}

Interval sqrt(const Interval& x) {
    if (mpfr_sgn(x.lo_) < 0) throw Error("interval sqrt of a negative range");
    Interval out(x.prec_);
    mpfr_sqrt(out.lo_, x.lo_, MPFR_RNDD);
    mpfr_sqrt(out.hi_, x.hi_, MPFR_RNDU);
    return out;
}

Interval pow(const Interval& x, const Interval& y) { return exp(y * log(x)); }

Interval min(const Interval& a, const Interval& b) {
    Interval out(joint(a, b));
    mpfr_min(out.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_min(out.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return out;
}

Interval max(const Interval& a, const Interval& b) {
    Interval out(joint(a, b));
    mpfr_max(out.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_max(out.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return out;
}

Interval hull(const Interval& a, const Interval& b) {
    Interval out(joint(a, b));
    mpfr_min(out.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_max(out.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return out;
}

} // namespace pivotgrowth
