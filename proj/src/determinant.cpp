#include "xidet/determinant.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace xidet {

Rat det_exact(const Mat<Rat>& m) {
    const size_t n = m.size();
    Mat<Rat> a = m;
    Rat det(1);
    int sign = 1;
    for (size_t k = 0; k < n; ++k) {
        size_t piv = k;
        while (piv < n && a(piv, k) == 0) ++piv;
        if (piv == n) return Rat(0);
        if (piv != k) {
            for (size_t j = k; j < n; ++j) std::swap(a(piv, j), a(k, j));
            sign = -sign;
        }
        det *= a(k, k);
        for (size_t i = k + 1; i < n; ++i) {
            if (a(i, k) == 0) continue;
            Rat f = a(i, k) / a(k, k);
            for (size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
            a(i, k) = 0;
        }
    }
    det *= sign;
    det.canonicalize();
    return det;
}

IntPoly det_poly(const Mat<IntPoly>& m) {
    const size_t n = m.size();
    Mat<IntPoly> a = m;
    int sign = 1;
    IntPoly prev = IntPoly::constant(Int(1));
    for (size_t k = 0; k + 1 < n; ++k) {
        size_t piv = k;
        while (piv < n && a(piv, k).is_zero()) ++piv;
        if (piv == n) return IntPoly();
        if (piv != k) {
            for (size_t j = k; j < n; ++j) std::swap(a(piv, j), a(k, j));
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = k + 1; j < n; ++j) {
                IntPoly num = a(i, j) * a(k, k) - a(i, k) * a(k, j);
                a(i, j) = divide_exact(num, prev);
            }
            a(i, k) = IntPoly();
        }
        prev = a(k, k);
    }
    IntPoly det = a(n - 1, n - 1);
    return sign < 0 ? -det : det;
}

Real det_float(const Mat<Real>& m, const PrecCtx& ctx) {
    const size_t n = m.size();
    const mpfr_prec_t prec = ctx.prec_bits();

    Mat<Real> a(n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) a(i, j) = m(i, j).with_prec(prec);

    Real det = Real::of_long(1, prec);
    int sign = 1;
    double log10_prod = 0.0;
    double log10_prod_max = 0.0;
    bool exact_zero = false;
    size_t zero_col = 0;

    for (size_t k = 0; k < n && !exact_zero; ++k) {
        size_t piv = k;
        for (size_t i = k + 1; i < n; ++i)
            if (cmp(abs(a(i, k)), abs(a(piv, k))) > 0) piv = i;
        if (a(piv, k).is_zero()) {
            exact_zero = true;
            zero_col = k;
            break;
        }
        if (piv != k) {
            for (size_t j = k; j < n; ++j) std::swap(a(piv, j), a(k, j));
            sign = -sign;
        }
        det = det * a(k, k);
        log10_prod += a(k, k).value_log10();
        log10_prod_max = std::max(log10_prod_max, log10_prod);
        for (size_t i = k + 1; i < n; ++i) {
            if (a(i, k).is_zero() && a(i, k).err_is_zero()) continue;
            Real f = a(i, k) / a(k, k);
            for (size_t j = k + 1; j < n; ++j) a(i, j) = a(i, j) - f * a(k, j);
        }
    }

    if (exact_zero) {
        // Structurally singular at this precision: the value is zero, the
        // bound carries the input uncertainty scaled by the pivots so far and
        // the row magnitudes of the untouched block.
        Real bound = Real::of_long(0, prec);
        for (size_t i = zero_col; i < n; ++i) bound = max(bound, a(i, zero_col).err());
        Real scale = abs(det) + det.err();
        for (size_t i = zero_col + 1; i < n; ++i) {
            Real row_max(prec);
            for (size_t j = zero_col + 1; j < n; ++j)
                row_max = max(row_max, abs(a(i, j)) + a(i, j).err());
            scale = scale * row_max;
        }
        Real out = Real::of_long(0, prec);
        out.set_err(bound * scale);
        return out;
    }

    det = sign < 0 ? -det : det;
    double lost_digits = log10_prod_max - det.value_log10();
    if (lost_digits > static_cast<double>(ctx.digits - 10)) {
        std::ostringstream msg;
        msg << "det_float: cancellation consumed " << lost_digits << " digits at working precision "
            << ctx.digits;
        throw precision_exhausted(msg.str());
    }
    return det;
}

} // namespace xidet
