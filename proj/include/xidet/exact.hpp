#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace xidet {

using Int = mpz_class;
using Rat = mpq_class;

inline Int factorial(long n) {
    if (n < 0) throw std::invalid_argument("factorial: negative argument");
    Int r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

inline Int binomial(long n, long k) {
    if (k < 0 || k > n) return 0;
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

inline Int pow_int(const Int& b, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

// (-1)^(r(r-1)/2), the checkerboard sign of a full row reversal.
inline int epsilon_sign(long r) {
    return (r * (r - 1) / 2) % 2 == 0 ? 1 : -1;
}

inline long mu_of(long r) { return r * (r - 1) / 2; }

struct Permutation {
    std::vector<int> q; // q[i] is the image of position i (0-based values)
    int sign = 1;
};

// All permutations of {0,...,r-1} in lexicographic order with their parity.
std::vector<Permutation> all_permutations(int r);

} // namespace xidet
