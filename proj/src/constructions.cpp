#include "pivotgrowth/constructions.hpp"

#include "pivotgrowth/errors.hpp"

#include <cmath>

namespace pivotgrowth {

RationalMatrix sylvester_hadamard(unsigned k) {
    RationalMatrix h{{1}};
    const RationalMatrix h1{{1, 1}, {1, -1}};
    for (unsigned i = 0; i < k; ++i) h = kron(h, h1);
    return h;
}

RationalMatrix wilkinson_pp_matrix(std::size_t n) {
    if (n == 0) throw Error("wilkinson_pp_matrix needs n >= 1");
    RationalMatrix w(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) w(i, j) = -1;
        w(i, i) = 1;
        w(i, n - 1) = 1;
    }
    return w;
}

namespace {

class Real {
public:
    explicit Real(mpfr_prec_t p) { mpfr_init2(v_, p); mpfr_set_zero(v_, 1); }
    Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Real& operator=(const Real& o) { mpfr_set(v_, o.v_, MPFR_RNDN); return *this; }
    ~Real() { mpfr_clear(v_); }
    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }

private:
    mpfr_t v_;
};

struct Complex {
    Real re, im;
    explicit Complex(mpfr_prec_t p) : re(p), im(p) {}
};

Complex operator-(const Complex& a, const Complex& b) {
    Complex out(a.re.prec());
    mpfr_sub(out.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
    mpfr_sub(out.im.get(), a.im.get(), b.im.get(), MPFR_RNDN);
    return out;
}

Complex operator*(const Complex& a, const Complex& b) {
    const mpfr_prec_t p = a.re.prec();
    Complex out(p);
    Real t(p);
    mpfr_mul(out.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
    mpfr_mul(t.get(), a.im.get(), b.im.get(), MPFR_RNDN);
    mpfr_sub(out.re.get(), out.re.get(), t.get(), MPFR_RNDN);
    mpfr_mul(out.im.get(), a.re.get(), b.im.get(), MPFR_RNDN);
    mpfr_mul(t.get(), a.im.get(), b.re.get(), MPFR_RNDN);
    mpfr_add(out.im.get(), out.im.get(), t.get(), MPFR_RNDN);
    return out;
}

Real modulus(const Complex& a) {
    Real out(a.re.prec());
    mpfr_hypot(out.get(), a.re.get(), a.im.get(), MPFR_RNDN);
    return out;
}

Complex operator/(const Complex& a, const Complex& b) {
    const mpfr_prec_t p = a.re.prec();
    Complex conj(p);
    mpfr_set(conj.re.get(), b.re.get(), MPFR_RNDN);
    mpfr_neg(conj.im.get(), b.im.get(), MPFR_RNDN);
    Complex num = a * conj;
    Real den(p), t(p);
    mpfr_sqr(den.get(), b.re.get(), MPFR_RNDN);
    mpfr_sqr(t.get(), b.im.get(), MPFR_RNDN);
    mpfr_add(den.get(), den.get(), t.get(), MPFR_RNDN);
    mpfr_div(num.re.get(), num.re.get(), den.get(), MPFR_RNDN);
    mpfr_div(num.im.get(), num.im.get(), den.get(), MPFR_RNDN);
    return num;
}

std::string decimal(mpfr_srcptr x, int digits) {
    char* buf = nullptr;
    const std::string fmt = "%." + std::to_string(digits) + "Rg";
    mpfr_asprintf(&buf, fmt.c_str(), x);
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
}

} // namespace

ComplexEliminationReport tornheim_complex3(mpfr_prec_t precision) {
    const mpfr_prec_t p = precision;
    Complex one(p), z(p), zinv(p);
    mpfr_set_ui(one.re.get(), 1, MPFR_RNDN);
    // z = (-1 + 2 sqrt(2) i) / 3, |z| = 1 so 1/z is the conjugate.
    mpfr_set_si(z.re.get(), -1, MPFR_RNDN);
    mpfr_div_ui(z.re.get(), z.re.get(), 3, MPFR_RNDN);
    mpfr_sqrt_ui(z.im.get(), 8, MPFR_RNDN);
    mpfr_div_ui(z.im.get(), z.im.get(), 3, MPFR_RNDN);
    zinv = one / z;

    std::vector<std::vector<Complex>> a = {{one, one, one}, {one, z, zinv}, {one, zinv, z}};
    ComplexEliminationReport report;
    report.n = 3;
    const int digits = static_cast<int>(static_cast<double>(p) * 0.30103) + 1;
    for (const auto& row : a)
        for (const auto& v : row)
            report.entries.push_back(decimal(v.re.get(), 25) + (mpfr_sgn(v.im.get()) < 0 ? "" : "+") +
                                     decimal(v.im.get(), 25) + "i");

    Real max_initial(p), max_all(p), slack(p), tmp(p);
    for (const auto& row : a)
        for (const auto& v : row) {
            Real m = modulus(v);
            if (mpfr_greater_p(m.get(), max_initial.get())) max_initial = m;
        }
    max_all = max_initial;
    mpfr_set_si(slack.get(), -1, MPFR_RNDN);
    for (std::size_t k = 0; k < 3; ++k) {
        const std::size_t m = a.size();
        Real piv = modulus(a[0][0]);
        report.pivot_moduli.push_back(decimal(piv.get(), 25));
        Real off(p);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                Real e = modulus(a[i][j]);
                if (mpfr_greater_p(e.get(), max_all.get())) max_all = e;
                if ((i || j) && mpfr_greater_p(e.get(), off.get())) off = e;
            }
        if (m > 1) {
            mpfr_div(tmp.get(), off.get(), piv.get(), MPFR_RNDN);
            mpfr_sub_ui(tmp.get(), tmp.get(), 1, MPFR_RNDN);
            if (mpfr_greater_p(tmp.get(), slack.get())) slack = tmp;
        }
        if (m == 1) break;
        std::vector<std::vector<Complex>> next(m - 1, std::vector<Complex>(m - 1, Complex(p)));
        for (std::size_t i = 1; i < m; ++i) {
            const Complex factor = a[i][0] / a[0][0];
            for (std::size_t j = 1; j < m; ++j) next[i - 1][j - 1] = a[i][j] - factor * a[0][j];
        }
        a = std::move(next);
    }
    Real growth(p), exact(p);
    mpfr_div(growth.get(), max_all.get(), max_initial.get(), MPFR_RNDN);
    mpfr_sqrt_ui(exact.get(), 3, MPFR_RNDN);
    mpfr_mul_ui(exact.get(), exact.get(), 3, MPFR_RNDN);
    mpfr_ui_div(exact.get(), 16, exact.get(), MPFR_RNDN);
    mpfr_sub(tmp.get(), growth.get(), exact.get(), MPFR_RNDN);
    report.growth = decimal(growth.get(), digits);
    report.growth_error = std::fabs(mpfr_get_d(tmp.get(), MPFR_RNDN));
    report.max_slack = mpfr_get_d(slack.get(), MPFR_RNDN);
    report.completely_pivoted = report.max_slack <= std::ldexp(1.0, -static_cast<int>(p / 2));
    return report;
}

RationalMatrix cp_kron_h1(const RationalMatrix& a) {
    const PivotCheck check = check_pivoted(a, PivotStrategy::Complete);
    if (!check.pivoted) throw NotPivoted("cp_kron_h1 input: " + check.diagnostic);
    const RationalMatrix h1{{1, 1}, {1, -1}};
    RationalMatrix out = kron(a, h1);
    if (is_pivoted(out, PivotStrategy::Complete)) return out;
    out = kron(h1, a);
    if (is_pivoted(out, PivotStrategy::Complete)) return out;
    return permute_for_strategy(out, PivotStrategy::Complete).matrix;
}

RationalMatrix rp_kron(const RationalMatrix& a, const RationalMatrix& b) {
    if (auto c = check_pivoted(a, PivotStrategy::Rook); !c.pivoted)
        throw NotPivoted("rp_kron first factor: " + c.diagnostic);
    if (auto c = check_pivoted(b, PivotStrategy::Rook); !c.pivoted)
        throw NotPivoted("rp_kron second factor: " + c.diagnostic);
    return kron(a, b);
}

RationalMatrix border(const RationalMatrix& a) {
    const Rational scale = a.max_abs();
    if (scale == 0) throw Singular(1);
    const std::size_t n = a.n();
    RationalMatrix out(n + 1);
    out(0, 0) = 1;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i + 1, j + 1) = a(i, j) / scale;
    return out;
}

RationalMatrix EmbeddingPlan::truncated_value() const {
    RationalMatrix out = bits.at(0);
    for (std::size_t k = 1; k < bits.size(); ++k) {
        const Rational w = pow2(-static_cast<long>(k));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (bits[k](i, j) != 0) out(i, j) -= w;
    }
    return out;
}

Embedding binary_embed(const RationalMatrix& a) {
    const std::size_t n = a.n();
    if (a(0, 0) != 1) throw NotNormalized("binary_embed needs a_11 = 1");
    if (a.max_abs() > 1) throw NotNormalized("binary_embed needs |a_ij| <= 1");
    if (auto c = check_pivoted(a, PivotStrategy::Complete); !c.pivoted)
        throw NotPivoted("binary_embed input: " + c.diagnostic);

    EmbeddingPlan plan;
    plan.n = n;
    plan.bit_depth = 3 * n;
    const std::size_t blocks = 3 * n + 1;
    const std::size_t ell = blocks * n;  // 3n^2 + n
    plan.gadgets = ell;
    plan.m = 4 * ell + 1;
    plan.prescribed_steps = 1 + 3 * ell + 3 * n * n;
    plan.middle_offset = 1 + 3 * ell;
    for (std::size_t g = 0; g < ell; ++g) plan.gadget_rows.push_back(1 + 3 * g);

    // Bits of ceil(a) - a; -1 is read as -0.111... so its integer part is 0.
    plan.bits.assign(plan.bit_depth + 1, RationalMatrix(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const Rational& v = a(i, j);
            Rational frac;
            if (v == -1) {
                frac = 1;
            } else {
                Integer c;
                mpz_cdiv_q(c.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
                plan.bits[0](i, j) = Rational(c);
                frac = Rational(c) - v;
            }
            for (std::size_t k = 1; k <= plan.bit_depth; ++k) {
                frac *= 2;
                if (frac >= 1) {
                    plan.bits[k](i, j) = 1;
                    frac -= 1;
                } else if (v == -1) {
                    plan.bits[k](i, j) = 1;
                }
            }
        }

    // Middle matrix with entries in {0, 1/2, 1}.
    RationalMatrix middle(ell);
    const Rational half(1, 2);
    for (std::size_t r = 0; r + 1 < blocks; ++r)
        for (std::size_t t = 0; t < n; ++t) {
            const std::size_t row = r * n + t;
            for (std::size_t c = 0; c < r; ++c) middle(row, c * n + t) = half;
            middle(row, r * n + t) = 1;
            middle(row, (blocks - 1) * n + t) = half;
        }
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t row = (blocks - 1) * n + t;
        for (std::size_t c = 0; c + 1 < blocks; ++c)
            for (std::size_t j = 0; j < n; ++j) middle(row, c * n + j) = plan.bits[c + 1](t, j);
        for (std::size_t j = 0; j < n; ++j) middle(row, (blocks - 1) * n + j) = plan.bits[0](t, j);
    }

    // C: gadgets turn (x, y) into the entry y - x/2.
    const std::size_t size = 4 * ell;
    RationalMatrix c(size);
    const std::size_t target = 3 * ell;
    for (std::size_t g = 0; g < ell; ++g) {
        const std::size_t r = 3 * g;
        c(r, r) = 1;
        c(r, r + 1) = 1;
        c(r + 1, r) = 1;
        c(r + 1, r + 2) = 1;
        c(r + 2, r + 1) = 1;
        c(r + 2, r + 2) = 1;
        c(r + 2, target + g) = 1;
    }
    for (std::size_t i = 0; i < ell; ++i)
        for (std::size_t j = 0; j < ell; ++j) {
            const Rational& e = middle(i, j);
            if (e == half) {
                c(target + i, 3 * j + 2) = 1;
                c(target + i, target + j) = 1;
            } else if (e == 1) {
                c(target + i, target + j) = 1;
            }
        }

    // B = [[1, 1^T], [1, 1 1^T - C]] so that one step leaves -C.
    RationalMatrix b(plan.m);
    for (std::size_t i = 0; i < plan.m; ++i)
        for (std::size_t j = 0; j < plan.m; ++j) b(i, j) = 1;
    for (std::size_t i = 0; i < size; ++i)
        for (std::size_t j = 0; j < size; ++j) b(i + 1, j + 1) -= c(i, j);
    plan.sign = -1;
    return {std::move(b), std::move(plan)};
}

} // namespace pivotgrowth
