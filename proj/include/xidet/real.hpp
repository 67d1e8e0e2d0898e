#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>
#include <utility>

#include "xidet/precision.hpp"

namespace xidet {

// Arbitrary-precision real paired with an absolute error bound.
//
// The value is an mpfr number whose precision is fixed at construction;
// binary operations produce results at the wider of the two operand
// precisions. The error bound is a low-precision mpfr number maintained with
// upward rounding: every operation propagates the bounds of its inputs to
// first order and adds the rounding error of the operation itself. The bound
// is an estimate in the sense that second-order terms are dropped; it is not
// a certified enclosure.
class Real {
public:
    static constexpr mpfr_prec_t kErrPrec = 32;

    Real();
    explicit Real(mpfr_prec_t prec);
    Real(const Real& o);
    Real(Real&& o) noexcept;
    Real& operator=(const Real& o);
    Real& operator=(Real&& o) noexcept;
    ~Real();

    static Real of_long(long x, mpfr_prec_t prec);
    static Real of_double(double x, mpfr_prec_t prec);
    static Real of_str(const std::string& s, mpfr_prec_t prec);
    static Real of_int(const mpz_class& z, mpfr_prec_t prec);
    static Real of_rat(const mpq_class& q, mpfr_prec_t prec);
    static Real pi(mpfr_prec_t prec);

    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    mpfr_srcptr raw() const { return v_; }
    mpfr_srcptr raw_err() const { return e_; }

    int sign() const { return mpfr_sgn(v_); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    // Binary exponent of the value (only meaningful when nonzero).
    long exponent2() const { return is_zero() ? 0 : static_cast<long>(mpfr_get_exp(v_)); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    // log10 of |value| and of the error bound, computed from exponents so the
    // result survives magnitudes far outside double range.
    double value_log10() const;
    double err_log10() const;

    Real err() const;
    bool err_is_zero() const { return mpfr_zero_p(e_) != 0; }
    void set_err_zero() { mpfr_set_zero(e_, 1); }
    void set_err(const Real& e);
    void add_err_abs(const Real& e);
    // Number of decimal digits by which |value| exceeds the error bound
    // (negative when the value is smaller than its bound; +inf if err == 0).
    double digits_above_err() const;
    bool definitely_positive(double factor = 1.0) const;
    bool definitely_negative(double factor = 1.0) const;

    // Round to a new working precision (error bound widened by the rounding).
    Real with_prec(mpfr_prec_t prec) const;

    // Scientific-notation decimal string with the given significant digits.
    std::string to_decimal(int significant_digits) const;
    // Enough digits that parsing the string back at the same precision is
    // bit-exact.
    std::string to_decimal_full() const;

    friend Real operator+(const Real& a, const Real& b);
    friend Real operator-(const Real& a, const Real& b);
    friend Real operator*(const Real& a, const Real& b);
    friend Real operator/(const Real& a, const Real& b);
    friend Real operator-(const Real& a);

    Real& operator+=(const Real& b) { *this = *this + b; return *this; }
    Real& operator-=(const Real& b) { *this = *this - b; return *this; }
    Real& operator*=(const Real& b) { *this = *this * b; return *this; }
    Real& operator/=(const Real& b) { *this = *this / b; return *this; }

    friend int cmp(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_); }
    friend bool operator<(const Real& a, const Real& b) { return cmp(a, b) < 0; }
    friend bool operator>(const Real& a, const Real& b) { return cmp(a, b) > 0; }
    friend bool operator<=(const Real& a, const Real& b) { return cmp(a, b) <= 0; }
    friend bool operator>=(const Real& a, const Real& b) { return cmp(a, b) >= 0; }
    friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

    friend Real exp(const Real& x);
    friend Real log(const Real& x);
    friend Real sqrt(const Real& x);
    friend Real abs(const Real& x);
    friend Real cos(const Real& x);
    friend Real sinh(const Real& x);
    friend Real cosh(const Real& x);
    friend Real tanh(const Real& x);
    friend Real pow_si(const Real& x, long k);
    friend Real mul_2si(const Real& x, long k);

private:
    mpfr_t v_;
    mpfr_t e_;

    void bump_err_ulp(int inexact, int count = 1);
};

Real operator+(const Real& a, long b);
Real operator+(long a, const Real& b);
Real operator-(const Real& a, long b);
Real operator-(long a, const Real& b);
Real operator*(const Real& a, long b);
Real operator*(long a, const Real& b);
Real operator/(const Real& a, long b);
Real operator/(long a, const Real& b);
bool operator<(const Real& a, long b);
bool operator>(const Real& a, long b);

const Real& min(const Real& a, const Real& b);
const Real& max(const Real& a, const Real& b);

// 10^e as a Real (exact for the binary representation of the power).
Real pow10(long e, mpfr_prec_t prec);

} // namespace xidet
