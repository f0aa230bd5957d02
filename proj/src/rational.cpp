#include "pivotgrowth/rational.hpp"

#include "pivotgrowth/errors.hpp"

#include <cctype>
#include <cmath>
#include <string>

namespace pivotgrowth {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

Integer parse_integer(std::string_view s, std::string_view whole) {
    if (s.empty()) throw ParseError("empty integer in '" + std::string(whole) + "'");
    std::size_t i = (s.front() == '-' || s.front() == '+') ? 1 : 0;
    if (i == s.size()) throw ParseError("malformed integer in '" + std::string(whole) + "'");
    for (std::size_t j = i; j < s.size(); ++j)
        if (!std::isdigit(static_cast<unsigned char>(s[j])))
            throw ParseError("malformed integer in '" + std::string(whole) + "'");
    std::string digits(s.front() == '+' ? s.substr(1) : s);
    return Integer(digits, 10);
}

} // namespace

Rational parse_rational(std::string_view text) {
    const std::string_view s = trim(text);
    if (s.empty()) throw ParseError("empty rational");

    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        Integer num = parse_integer(trim(s.substr(0, slash)), s);
        Integer den = parse_integer(trim(s.substr(slash + 1)), s);
        if (den == 0) throw ParseError("zero denominator in '" + std::string(s) + "'");
        Rational out(num, den);
        out.canonicalize();
        return out;
    }

    // [sign] digits [. digits] [(e|E) [sign] digits]
    std::size_t i = 0;
    bool negative = false;
    if (s[i] == '+' || s[i] == '-') negative = (s[i++] == '-');
    std::string mantissa;
    long frac_digits = 0;
    bool seen_digit = false;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        mantissa.push_back(s[i++]);
        seen_digit = true;
    }
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            mantissa.push_back(s[i++]);
            ++frac_digits;
            seen_digit = true;
        }
    }
    if (!seen_digit) throw ParseError("malformed number '" + std::string(s) + "'");
    long exponent = 0;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        Integer e = parse_integer(s.substr(i), s);
        if (!e.fits_slong_p()) throw ParseError("exponent out of range in '" + std::string(s) + "'");
        exponent = e.get_si();
        i = s.size();
    }
    if (i != s.size()) throw ParseError("malformed number '" + std::string(s) + "'");

    Rational out{Integer(mantissa, 10)};
    const long shift = exponent - frac_digits;
    const Integer scale = ipow(10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
    if (shift < 0)
        out /= scale;
    else
        out *= scale;
    out.canonicalize();
    return negative ? Rational(-out) : out;
}

std::string to_string(const Rational& value) {
    Rational v = value;
    v.canonicalize();
    if (v.get_den() == 1) return v.get_num().get_str();
    return v.get_num().get_str() + "/" + v.get_den().get_str();
}

std::string to_decimal(const Rational& value, int digits) {
    const Integer scale = ipow(10, static_cast<unsigned long>(digits));
    Rational scaled = abs(value) * scale;
    Integer q = scaled.get_num() / scaled.get_den();
    Integer r = scaled.get_num() - q * scaled.get_den();
    if (2 * r >= scaled.get_den()) q += 1;
    std::string s = q.get_str();
    if (digits > 0) {
        if (s.size() <= static_cast<std::size_t>(digits)) s.insert(0, digits + 1 - s.size(), '0');
        s.insert(s.size() - digits, ".");
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.pop_back();
    }
    if (value < 0 && s != "0") s.insert(0, "-");
    return s;
}

Rational from_double(double value) {
    if (!std::isfinite(value)) throw ParseError("non-finite floating value");
    Rational out;
    mpq_set_d(out.get_mpq_t(), value);
    return out;
}

Rational pow2(long exponent) {
    Integer p = 1;
    const unsigned long e = static_cast<unsigned long>(exponent < 0 ? -exponent : exponent);
    mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), e);
    if (exponent < 0) return Rational(Integer(1), p);
    return Rational(p);
}

Integer ipow(const Integer& base, unsigned long exponent) {
    Integer out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
    return out;
}

std::size_t bit_length(const Rational& value) {
    const std::size_t num = mpz_sizeinbase(value.get_num_mpz_t(), 2);
    const std::size_t den = mpz_sizeinbase(value.get_den_mpz_t(), 2);
    return num > den ? num : den;
}

Rational sqrt_round_up(const Rational& value, unsigned rel_bits) {
    if (value < 0) throw Error("sqrt_round_up of a negative value");
    if (value == 0) return 0;
    const Integer& p = value.get_num();
    const Integer& q = value.get_den();
    if (mpz_perfect_square_p(p.get_mpz_t()) && mpz_perfect_square_p(q.get_mpz_t())) {
        Integer sp, sq;
        mpz_sqrt(sp.get_mpz_t(), p.get_mpz_t());
        mpz_sqrt(sq.get_mpz_t(), q.get_mpz_t());
        return Rational(sp, sq);
    }

    const long log2v = static_cast<long>(mpz_sizeinbase(p.get_mpz_t(), 2)) -
                       static_cast<long>(mpz_sizeinbase(q.get_mpz_t(), 2));
    long shift = (2 * static_cast<long>(rel_bits) + 6 - log2v + 1) / 2;
    if (shift < 0) shift = 0;
    const Rational tolerance = value * pow2(-static_cast<long>(rel_bits));
    for (;; ++shift) {
        // r = ceil(sqrt(ceil(value * 4^shift))) / 2^shift
        Integer scaled = p;
        mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), 2 * static_cast<unsigned long>(shift));
        mpz_cdiv_q(scaled.get_mpz_t(), scaled.get_mpz_t(), q.get_mpz_t());
        Integer root;
        mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
        if (root * root < scaled) root += 1;
        Rational r(root, Integer(1));
        r *= pow2(-shift);
        r.canonicalize();
        if (r * r - value <= tolerance) return r;
    }
}

Rational best_rational_approximation(const Rational& value, const Integer& max_den) {
    if (value.get_den() <= max_den) return value;
    Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    Integer n = value.get_num(), d = value.get_den();
    for (;;) {
        Integer a;
        mpz_fdiv_q(a.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
        Integer q2 = q0 + a * q1;
        if (q2 > max_den) break;
        Integer p2 = p0 + a * p1;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        Integer rem = n - a * d;
        n = d;
        d = rem;
        if (d == 0) break;
    }
    Integer k = (max_den - q0) / q1;
    Rational bound1(p0 + k * p1, q0 + k * q1);
    Rational bound2(p1, q1);
    bound1.canonicalize();
    bound2.canonicalize();
    return abs(bound2 - value) <= abs(bound1 - value) ? bound2 : bound1;
}

} // namespace pivotgrowth
