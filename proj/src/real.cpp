#include "xidet/real.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace xidet {

namespace {

constexpr double kLog10_2 = 0.30102999566398119521;

// Error-bound scratch arithmetic runs at Real::kErrPrec with upward rounding.
struct ErrTmp {
    mpfr_t t;
    ErrTmp() { mpfr_init2(t, Real::kErrPrec); }
    ~ErrTmp() { mpfr_clear(t); }
};

// |x| rounded up into dst (dst at err precision).
void abs_up(mpfr_ptr dst, mpfr_srcptr x) { mpfr_abs(dst, x, MPFR_RNDU); }

} // namespace

Real::Real() : Real(static_cast<mpfr_prec_t>(64)) {}

Real::Real(mpfr_prec_t prec) {
    runtime::ensure_thread_init();
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
    mpfr_init2(e_, kErrPrec);
    mpfr_set_zero(e_, 1);
}

Real::Real(const Real& o) {
    runtime::ensure_thread_init();
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
    mpfr_init2(e_, kErrPrec);
    mpfr_set(e_, o.e_, MPFR_RNDU);
}

Real::Real(Real&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_init2(e_, kErrPrec);
    mpfr_swap(v_, o.v_);
    mpfr_swap(e_, o.e_);
}

Real& Real::operator=(const Real& o) {
    if (this != &o) {
        mpfr_set_prec(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
        mpfr_set(e_, o.e_, MPFR_RNDU);
    }
    return *this;
}

Real& Real::operator=(Real&& o) noexcept {
    if (this != &o) {
        mpfr_swap(v_, o.v_);
        mpfr_swap(e_, o.e_);
    }
    return *this;
}

Real::~Real() {
    mpfr_clear(v_);
    mpfr_clear(e_);
}

void Real::bump_err_ulp(int inexact, int count) {
    if (inexact == 0 || mpfr_zero_p(v_)) return;
    ErrTmp u;
    // count * 2^(exp - prec + 1) bounds `count` units in the last place.
    mpfr_set_si_2exp(u.t, count, mpfr_get_exp(v_) - mpfr_get_prec(v_) + 1, MPFR_RNDU);
    mpfr_add(e_, e_, u.t, MPFR_RNDU);
}

Real Real::of_long(long x, mpfr_prec_t prec) {
    Real r(prec);
    int t = mpfr_set_si(r.v_, x, MPFR_RNDN);
    r.bump_err_ulp(t);
    return r;
}

Real Real::of_double(double x, mpfr_prec_t prec) {
    Real r(prec);
    int t = mpfr_set_d(r.v_, x, MPFR_RNDN);
    r.bump_err_ulp(t);
    return r;
}

Real Real::of_str(const std::string& s, mpfr_prec_t prec) {
    Real r(prec);
    if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0)
        throw std::invalid_argument("Real::of_str: unparsable number: " + s);
    r.bump_err_ulp(1);
    return r;
}

Real Real::of_int(const mpz_class& z, mpfr_prec_t prec) {
    Real r(prec);
    int t = mpfr_set_z(r.v_, z.get_mpz_t(), MPFR_RNDN);
    r.bump_err_ulp(t);
    return r;
}

Real Real::of_rat(const mpq_class& q, mpfr_prec_t prec) {
    Real r(prec);
    int t = mpfr_set_q(r.v_, q.get_mpq_t(), MPFR_RNDN);
    r.bump_err_ulp(t);
    return r;
}

Real Real::pi(mpfr_prec_t prec) {
    Real r(prec);
    int t = mpfr_const_pi(r.v_, MPFR_RNDN);
    r.bump_err_ulp(t);
    return r;
}

double Real::value_log10() const {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    // exponent-based estimate, refined by the leading bits
    long e2 = exponent2();
    mpfr_t t;
    mpfr_init2(t, 64);
    mpfr_abs(t, v_, MPFR_RNDN);
    mpfr_div_2si(t, t, e2, MPFR_RNDN); // mantissa in [0.5, 1)
    double m = mpfr_get_d(t, MPFR_RNDN);
    mpfr_clear(t);
    return static_cast<double>(e2) * kLog10_2 + std::log10(m);
}

double Real::err_log10() const {
    if (mpfr_zero_p(e_)) return -std::numeric_limits<double>::infinity();
    if (!mpfr_number_p(e_)) return std::numeric_limits<double>::infinity();
    long e2 = static_cast<long>(mpfr_get_exp(e_));
    mpfr_t t;
    mpfr_init2(t, 64);
    mpfr_div_2si(t, e_, e2, MPFR_RNDN);
    double m = mpfr_get_d(t, MPFR_RNDN);
    mpfr_clear(t);
    return static_cast<double>(e2) * kLog10_2 + std::log10(m);
}

Real Real::err() const {
    Real r(prec());
    mpfr_set(r.v_, e_, MPFR_RNDU);
    return r;
}

void Real::set_err(const Real& e) {
    mpfr_abs(e_, e.v_, MPFR_RNDU);
}

void Real::add_err_abs(const Real& e) {
    ErrTmp t;
    mpfr_abs(t.t, e.v_, MPFR_RNDU);
    mpfr_add(e_, e_, t.t, MPFR_RNDU);
}

double Real::digits_above_err() const {
    if (mpfr_zero_p(e_)) return std::numeric_limits<double>::infinity();
    if (is_zero()) return -err_log10();
    return value_log10() - err_log10();
}

bool Real::definitely_positive(double factor) const {
    if (sign() <= 0) return false;
    if (mpfr_zero_p(e_)) return true;
    ErrTmp t;
    mpfr_mul_d(t.t, e_, factor, MPFR_RNDU);
    return mpfr_cmp(v_, t.t) > 0;
}

bool Real::definitely_negative(double factor) const {
    Real n = -*this;
    return n.definitely_positive(factor);
}

Real Real::with_prec(mpfr_prec_t prec) const {
    Real r(prec);
    int t = mpfr_set(r.v_, v_, MPFR_RNDN);
    mpfr_set(r.e_, e_, MPFR_RNDU);
    r.bump_err_ulp(t);
    return r;
}

std::string Real::to_decimal(int significant_digits) const {
    if (significant_digits < 2) significant_digits = 2;
    if (is_zero()) return "0";
    if (!is_finite()) return sign() < 0 ? "-inf" : "inf";
    mpfr_exp_t expn = 0;
    char* s = mpfr_get_str(nullptr, &expn, 10, static_cast<size_t>(significant_digits), v_, MPFR_RNDN);
    std::string digits(s);
    mpfr_free_str(s);
    bool neg = !digits.empty() && digits[0] == '-';
    std::string mant = neg ? digits.substr(1) : digits;
    // strip trailing zeros but keep at least one digit
    size_t last = mant.find_last_not_of('0');
    mant = mant.substr(0, std::max<size_t>(last + 1, 1));
    std::ostringstream out;
    if (neg) out << '-';
    out << mant[0];
    if (mant.size() > 1) out << '.' << mant.substr(1);
    out << 'e' << (static_cast<long>(expn) - 1);
    return out.str();
}

std::string Real::to_decimal_full() const {
    int n = static_cast<int>(std::ceil(static_cast<double>(prec()) * kLog10_2)) + 2;
    return to_decimal(n);
}

namespace {

mpfr_prec_t join_prec(const Real& a, const Real& b) {
    return std::max(a.prec(), b.prec());
}

} // namespace

Real operator+(const Real& a, const Real& b) {
    Real r(join_prec(a, b));
    int t = mpfr_add(const_cast<mpfr_ptr>(r.raw()), a.raw(), b.raw(), MPFR_RNDN);
    mpfr_ptr re = const_cast<mpfr_ptr>(r.raw_err());
    mpfr_add(re, a.raw_err(), b.raw_err(), MPFR_RNDU);
    r.bump_err_ulp(t);
    return r;
}

Real operator-(const Real& a, const Real& b) {
    Real r(join_prec(a, b));
    int t = mpfr_sub(const_cast<mpfr_ptr>(r.raw()), a.raw(), b.raw(), MPFR_RNDN);
    mpfr_ptr re = const_cast<mpfr_ptr>(r.raw_err());
    mpfr_add(re, a.raw_err(), b.raw_err(), MPFR_RNDU);
    r.bump_err_ulp(t);
    return r;
}

Real operator*(const Real& a, const Real& b) {
    Real r(join_prec(a, b));
    int t = mpfr_mul(const_cast<mpfr_ptr>(r.raw()), a.raw(), b.raw(), MPFR_RNDN);
    // e = |a|*eb + |b|*ea (+ second-order ea*eb) + ulp
    ErrTmp ta, tb;
    abs_up(ta.t, a.raw());
    mpfr_mul(ta.t, ta.t, b.raw_err(), MPFR_RNDU);
    abs_up(tb.t, b.raw());
    mpfr_mul(tb.t, tb.t, a.raw_err(), MPFR_RNDU);
    mpfr_add(ta.t, ta.t, tb.t, MPFR_RNDU);
    mpfr_mul(tb.t, a.raw_err(), b.raw_err(), MPFR_RNDU);
    mpfr_add(ta.t, ta.t, tb.t, MPFR_RNDU);
    mpfr_set(const_cast<mpfr_ptr>(r.raw_err()), ta.t, MPFR_RNDU);
    r.bump_err_ulp(t);
    return r;
}

Real operator/(const Real& a, const Real& b) {
    Real r(join_prec(a, b));
    int t = mpfr_div(const_cast<mpfr_ptr>(r.raw()), a.raw(), b.raw(), MPFR_RNDN);
    // e = (ea + |r|*eb) / (|b| - eb), denominator rounded down
    ErrTmp num, den;
    abs_up(num.t, r.raw());
    mpfr_mul(num.t, num.t, b.raw_err(), MPFR_RNDU);
    mpfr_add(num.t, num.t, a.raw_err(), MPFR_RNDU);
    mpfr_abs(den.t, b.raw(), MPFR_RNDD);
    mpfr_sub(den.t, den.t, b.raw_err(), MPFR_RNDD);
    if (mpfr_sgn(den.t) <= 0) {
        mpfr_set_inf(const_cast<mpfr_ptr>(r.raw_err()), 1);
    } else {
        mpfr_div(num.t, num.t, den.t, MPFR_RNDU);
        mpfr_set(const_cast<mpfr_ptr>(r.raw_err()), num.t, MPFR_RNDU);
    }
    r.bump_err_ulp(t);
    return r;
}

Real operator-(const Real& a) {
    Real r(a.prec());
    mpfr_neg(const_cast<mpfr_ptr>(r.raw()), a.raw(), MPFR_RNDN);
    mpfr_set(const_cast<mpfr_ptr>(r.raw_err()), a.raw_err(), MPFR_RNDU);
    return r;
}

Real exp(const Real& x) {
    Real r(x.prec());
    int t = mpfr_exp(const_cast<mpfr_ptr>(r.raw()), x.raw(), MPFR_RNDN);
    // |exp(x+d) - exp(x)| <= exp(x)*d*e^d; the e^d factor is absorbed into a
    // doubled first-order term (bounds here are estimates, d is tiny).
    ErrTmp e;
    abs_up(e.t, r.raw());
    mpfr_mul(e.t, e.t, x.raw_err(), MPFR_RNDU);
    mpfr_mul_2si(e.t, e.t, 1, MPFR_RNDU);
    mpfr_set(const_cast<mpfr_ptr>(r.raw_err()), e.t, MPFR_RNDU);
    r.bump_err_ulp(t, 2);
    return r;
}

Real log(const Real& x) {
    if (x.sign() <= 0) throw std::invalid_argument("log: nonpositive argument");
    Real r(x.prec());
    int t = mpfr_log(const_cast<mpfr_ptr>(r.raw()), x.raw(), MPFR_RNDN);
    ErrTmp e;
    mpfr_abs(e.t, x.raw(), MPFR_RNDD);
    mpfr_div(e.t, x.raw_err(), e.t, MPFR_RNDU);
    mpfr_set(const_cast<mpfr_ptr>(r.raw_err()), e.t, MPFR_RNDU);
    r.bump_err_ulp(t);
    return r;
}

Real sqrt(const Real& x) {
    if (x.sign() < 0) throw std::invalid_argument("sqrt: negative argument");
    Real r(x.prec());
    int t = mpfr_sqrt(const_cast<mpfr_ptr>(r.raw()), x.raw(), MPFR_RNDN);
    ErrTmp e;
    if (mpfr_zero_p(r.raw())) {
        mpfr_set(e.t, x.raw_err(), MPFR_RNDU);
    } else {
        mpfr_abs(e.t, r.raw(), MPFR_RNDD);
        mpfr_mul_2si(e.t, e.t, 1, MPFR_RNDD);
        mpfr_div(e.t, x.raw_err(), e.t, MPFR_RNDU);
    }
    mpfr_set(const_cast<mpfr_ptr>(r.raw_err()), e.t, MPFR_RNDU);
    r.bump_err_ulp(t);
    return r;
}

Real abs(const Real& x) {
    Real r(x.prec());
    mpfr_abs(const_cast<mpfr_ptr>(r.raw()), x.raw(), MPFR_RNDN);
    mpfr_set(const_cast<mpfr_ptr>(r.raw_err()), x.raw_err(), MPFR_RNDU);
    return r;
}

Real cos(const Real& x) {
    Real r(x.prec());
    int t = mpfr_cos(const_cast<mpfr_ptr>(r.raw()), x.raw(), MPFR_RNDN);
    mpfr_set(const_cast<mpfr_ptr>(r.raw_err()), x.raw_err(), MPFR_RNDU);
    r.bump_err_ulp(t);
    return r;
}

Real sinh(const Real& x) {
    Real r(x.prec());
    int t = mpfr_sinh(const_cast<mpfr_ptr>(r.raw()), x.raw(), MPFR_RNDN);
    ErrTmp e;
    abs_up(e.t, r.raw());
    mpfr_add_ui(e.t, e.t, 1, MPFR_RNDU); // cosh <= |sinh| + 1
    mpfr_mul(e.t, e.t, x.raw_err(), MPFR_RNDU);
    mpfr_set(const_cast<mpfr_ptr>(r.raw_err()), e.t, MPFR_RNDU);
    r.bump_err_ulp(t);
    return r;
}

Real cosh(const Real& x) {
    Real r(x.prec());
    int t = mpfr_cosh(const_cast<mpfr_ptr>(r.raw()), x.raw(), MPFR_RNDN);
    ErrTmp e;
    abs_up(e.t, r.raw()); // |sinh| <= cosh
    mpfr_mul(e.t, e.t, x.raw_err(), MPFR_RNDU);
    mpfr_set(const_cast<mpfr_ptr>(r.raw_err()), e.t, MPFR_RNDU);
    r.bump_err_ulp(t);
    return r;
}

Real tanh(const Real& x) {
    Real r(x.prec());
    int t = mpfr_tanh(const_cast<mpfr_ptr>(r.raw()), x.raw(), MPFR_RNDN);
    mpfr_set(const_cast<mpfr_ptr>(r.raw_err()), x.raw_err(), MPFR_RNDU);
    r.bump_err_ulp(t);
    return r;
}

Real pow_si(const Real& x, long k) {
    Real r(x.prec());
    if (k == 0) {
        mpfr_set_ui(const_cast<mpfr_ptr>(r.raw()), 1, MPFR_RNDN);
        return r;
    }
    int t = mpfr_pow_si(const_cast<mpfr_ptr>(r.raw()), x.raw(), k, MPFR_RNDN);
    // e = |k| * |r/x| * ex + ulp
    ErrTmp e;
    if (!mpfr_zero_p(x.raw())) {
        mpfr_abs(e.t, x.raw(), MPFR_RNDD);
        mpfr_div(e.t, x.raw_err(), e.t, MPFR_RNDU);
        mpfr_mul_si(e.t, e.t, std::labs(k), MPFR_RNDU);
        ErrTmp m;
        abs_up(m.t, r.raw());
        mpfr_mul(e.t, e.t, m.t, MPFR_RNDU);
        mpfr_set(const_cast<mpfr_ptr>(r.raw_err()), e.t, MPFR_RNDU);
    } else {
        mpfr_set(const_cast<mpfr_ptr>(r.raw_err()), x.raw_err(), MPFR_RNDU);
    }
    r.bump_err_ulp(t);
    return r;
}

Real mul_2si(const Real& x, long k) {
    Real r(x.prec());
    mpfr_mul_2si(const_cast<mpfr_ptr>(r.raw()), x.raw(), k, MPFR_RNDN);
    mpfr_mul_2si(const_cast<mpfr_ptr>(r.raw_err()), x.raw_err(), k, MPFR_RNDU);
    return r;
}

Real operator+(const Real& a, long b) { return a + Real::of_long(b, a.prec()); }
Real operator+(long a, const Real& b) { return Real::of_long(a, b.prec()) + b; }
Real operator-(const Real& a, long b) { return a - Real::of_long(b, a.prec()); }
Real operator-(long a, const Real& b) { return Real::of_long(a, b.prec()) - b; }
Real operator*(const Real& a, long b) { return a * Real::of_long(b, a.prec()); }
Real operator*(long a, const Real& b) { return Real::of_long(a, b.prec()) * b; }
Real operator/(const Real& a, long b) { return a / Real::of_long(b, a.prec()); }
Real operator/(long a, const Real& b) { return Real::of_long(a, b.prec()) / b; }
bool operator<(const Real& a, long b) { return mpfr_cmp_si(a.raw(), b) < 0; }
bool operator>(const Real& a, long b) { return mpfr_cmp_si(a.raw(), b) > 0; }

const Real& min(const Real& a, const Real& b) { return cmp(a, b) <= 0 ? a : b; }
const Real& max(const Real& a, const Real& b) { return cmp(a, b) >= 0 ? a : b; }

Real pow10(long e, mpfr_prec_t prec) {
    return pow_si(Real::of_long(10, prec), e);
}

} // namespace xidet
