#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "xidet/exact.hpp"
#include "xidet/real.hpp"

namespace xidet {

// Dense univariate polynomial with exact coefficients, index = power.
// The coefficient list never ends in a zero unless the polynomial is zero.
template <typename C>
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<C> coeffs) : c_(std::move(coeffs)) { trim(); }
    static Poly constant(C v) { return Poly(std::vector<C>{std::move(v)}); }
    static Poly monomial(C v, size_t power) {
        std::vector<C> c(power + 1);
        c[power] = std::move(v);
        return Poly(std::move(c));
    }

    bool is_zero() const { return c_.empty(); }
    // degree of the zero polynomial is -1 by convention
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    const std::vector<C>& coeffs() const { return c_; }
    C coeff(size_t i) const { return i < c_.size() ? c_[i] : C(0); }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<C> r(std::max(a.c_.size(), b.c_.size()), C(0));
        for (size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
        return Poly(std::move(r));
    }
    friend Poly operator-(const Poly& a, const Poly& b) {
        std::vector<C> r(std::max(a.c_.size(), b.c_.size()), C(0));
        for (size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) r[i] -= b.c_[i];
        return Poly(std::move(r));
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<C> r(a.c_.size() + b.c_.size() - 1, C(0));
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j)
                r[i + j] += a.c_[i] * b.c_[j];
        return Poly(std::move(r));
    }
    friend Poly operator*(const Poly& a, const C& s) {
        if (s == C(0)) return Poly();
        std::vector<C> r = a.c_;
        for (auto& x : r) x *= s;
        return Poly(std::move(r));
    }
    friend Poly operator-(const Poly& a) { return a * C(-1); }
    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly();
        std::vector<C> r(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * C(static_cast<long>(i));
        return Poly(std::move(r));
    }

    // Multiply by x^k.
    Poly shift_up(size_t k) const {
        if (is_zero() || k == 0) return *this;
        std::vector<C> r(c_.size() + k, C(0));
        for (size_t i = 0; i < c_.size(); ++i) r[i + k] = c_[i];
        return Poly(std::move(r));
    }

    // Exact division, throws if the division leaves a remainder. Used by the
    // fraction-free determinant where divisibility is guaranteed.
    friend Poly divide_exact(const Poly& a, const Poly& b) {
        if (b.is_zero()) throw std::invalid_argument("Poly: division by zero polynomial");
        if (a.is_zero()) return Poly();
        if (a.degree() < b.degree()) throw std::invalid_argument("Poly: inexact division (degree)");
        std::vector<C> rem = a.c_;
        std::vector<C> q(a.c_.size() - b.c_.size() + 1, C(0));
        const C& lead = b.c_.back();
        for (long i = static_cast<long>(q.size()) - 1; i >= 0; --i) {
            C top = rem[static_cast<size_t>(i) + b.c_.size() - 1];
            if (top == C(0)) continue;
            C f = exact_coeff_div(top, lead);
            q[static_cast<size_t>(i)] = f;
            for (size_t j = 0; j < b.c_.size(); ++j)
                rem[static_cast<size_t>(i) + j] -= f * b.c_[j];
        }
        for (const C& x : rem)
            if (x != C(0)) throw std::invalid_argument("Poly: inexact division (remainder)");
        return Poly(std::move(q));
    }

    C eval(const C& x) const {
        C acc(0);
        for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    // Horner evaluation in high-precision arithmetic; exact coefficients are
    // injected at the precision of x.
    Real eval_real(const Real& x) const {
        Real acc(x.prec());
        for (size_t i = c_.size(); i-- > 0;) acc = acc * x + coeff_to_real(c_[i], x.prec());
        return acc;
    }

    std::string to_string(const std::string& var = "y") const {
        if (is_zero()) return "0";
        std::string out;
        for (size_t i = c_.size(); i-- > 0;) {
            if (c_[i] == C(0)) continue;
            if (!out.empty()) out += " + ";
            out += coeff_str(c_[i]);
            if (i >= 1) out += "*" + var;
            if (i >= 2) out += "^" + std::to_string(i);
        }
        return out;
    }

private:
    std::vector<C> c_;

    void trim() {
        while (!c_.empty() && c_.back() == C(0)) c_.pop_back();
    }

    static C exact_coeff_div(const C& a, const C& b);
    static Real coeff_to_real(const C& c, mpfr_prec_t prec);
    static std::string coeff_str(const C& c);
};

template <>
inline Int Poly<Int>::exact_coeff_div(const Int& a, const Int& b) {
    Int q, r;
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (r != 0) throw std::invalid_argument("Poly<Int>: inexact coefficient division");
    return q;
}

template <>
inline Rat Poly<Rat>::exact_coeff_div(const Rat& a, const Rat& b) {
    return a / b;
}

template <>
inline Real Poly<Int>::coeff_to_real(const Int& c, mpfr_prec_t prec) {
    return Real::of_int(c, prec);
}

template <>
inline Real Poly<Rat>::coeff_to_real(const Rat& c, mpfr_prec_t prec) {
    return Real::of_rat(c, prec);
}

template <>
inline std::string Poly<Int>::coeff_str(const Int& c) {
    return c.get_str();
}

template <>
inline std::string Poly<Rat>::coeff_str(const Rat& c) {
    return c.get_str();
}

using IntPoly = Poly<Int>;
using RatPoly = Poly<Rat>;

inline RatPoly to_rat_poly(const IntPoly& p) {
    std::vector<Rat> c(p.coeffs().begin(), p.coeffs().end());
    return RatPoly(std::move(c));
}

} // namespace xidet
