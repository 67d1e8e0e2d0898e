#pragma once

#include <mpfr.h>

#include <cmath>
#include <stdexcept>

namespace xidet {

namespace runtime {

// MPFR keeps the exponent range in thread-local state. The kernel values in
// this project reach magnitudes like exp(-pi*e^40), far outside the default
// range, so every thread that touches mpfr must widen it first.
inline void ensure_thread_init() {
    thread_local bool done = [] {
        mpfr_set_emin(mpfr_get_emin_min());
        mpfr_set_emax(mpfr_get_emax_max());
        return true;
    }();
    (void)done;
}

} // namespace runtime

// Working-precision context: decimal digits of target accuracy plus guard
// digits used for all intermediate storage and truncation tolerances.
struct PrecCtx {
    int digits = 100;
    int guard = 20;

    PrecCtx() = default;
    PrecCtx(int digits_, int guard_ = 20) : digits(digits_), guard(guard_) {
        if (digits < 30) throw std::invalid_argument("PrecCtx: digits must be >= 30");
        if (guard < 10) throw std::invalid_argument("PrecCtx: guard must be >= 10");
    }

    // Binary precision carried by values created under this context.
    mpfr_prec_t prec_bits() const {
        return static_cast<mpfr_prec_t>(std::ceil((digits + guard) * 3.3219280948873623)) + 8;
    }

    // Series and quadrature tails are cut below 10^-(digits+guard).
    int tail_tol_exponent() const { return -(digits + guard); }

    PrecCtx escalated() const { return PrecCtx(digits * 2, guard); }
};

} // namespace xidet
