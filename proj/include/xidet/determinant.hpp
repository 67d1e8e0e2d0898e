#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "xidet/errors.hpp"
#include "xidet/exact.hpp"
#include "xidet/poly.hpp"
#include "xidet/precision.hpp"
#include "xidet/real.hpp"

namespace xidet {

template <typename T>
class Mat {
public:
    explicit Mat(size_t n) : n_(n), a_(n * n) {
        if (n == 0) throw std::invalid_argument("Mat: dimension must be >= 1");
    }
    size_t size() const { return n_; }
    T& operator()(size_t i, size_t j) { return a_[i * n_ + j]; }
    const T& operator()(size_t i, size_t j) const { return a_[i * n_ + j]; }

private:
    size_t n_;
    std::vector<T> a_;
};

// Exact determinant of a rational matrix (exact LU, no rounding).
Rat det_exact(const Mat<Rat>& m);

// Exact determinant of a polynomial matrix by fraction-free (Bareiss)
// elimination; intermediate entries stay polynomial-sized minors instead of
// blowing up exponentially as cofactor expansion would.
IntPoly det_poly(const Mat<IntPoly>& m);

// Determinant at working precision by pivoted elimination. The error bound of
// the result reflects input bounds plus accumulated rounding. When the final
// value is smaller than the largest intermediate pivot product by more than
// digits-10 decimal digits, the cancellation has consumed the working
// precision and precision_exhausted is thrown so the caller can escalate.
Real det_float(const Mat<Real>& m, const PrecCtx& ctx);

} // namespace xidet
