#pragma once

#include <vector>

#include "xidet/exact.hpp"
#include "xidet/poly.hpp"
#include "xidet/precision.hpp"
#include "xidet/real.hpp"

namespace xidet {

// Csordas-Varga polynomials p_k(y), generated by
//   p_{k+1}(y) = 4*y*p_k'(y) + (5-4y)*p_k(y),   p_1(y) = -3 + 2y.
// They express the derivatives of the kernel series termwise: the j-th
// derivative of the n-th term involves p_{j+1} evaluated at pi*n^2*e^{4u}.
struct CvPoly {
    int k = 0;
    IntPoly poly;
};

// Exact p_k by iterating the recurrence (memoized).
const CvPoly& cv_poly(int k);

// Closed form for the coefficient of y^j in p_k ("lower representation"):
//   d(j,k) = sum_{eta<=j} c(j,eta) (4 eta + 5)^(k-1),
//   c(j,eta) = (-1)^(eta+1) (2 eta + 3) / (eta! (j-eta)!).
// The value is a rational that is integral whenever j <= k.
Rat lower_rep_c(int j, int eta);
Rat lower_rep_coeff(int j, int k);

// "Upper representation": tables s_b(i,j) for bases b in {5,9} satisfying
//   s(i,0)=1, s(1,j)=b^j, s(i+1,j) = s(i,j) + s(i+1,j-1)(b+4i),
// equivalently the complete homogeneous symmetric sum of degree j in
// b, b+4, ..., b+4(i-1). Then d(i, i+j) assembles from s_5 and s_9.
Int s_table(int base, int i, int j);
Int upper_rep_coeff(int i, int j);

// Number of compositions of j into i nonnegative parts.
Int partition_count(int i, int j);

// Sum of |d(j,k)| over j; gives the crude but all-k tail bound
// |p_k(y)| <= S_k * y^k for y >= 1 used to truncate the kernel series.
const Int& abs_coeff_sum(int k);

// Hankel determinant of p_1..p_{2r-1}, stored with the sign epsilon_r
// normalized away: gamma[j] is the coefficient of y^j in epsilon_r * W_r(y).
struct WrPoly {
    int r = 0;
    std::vector<Int> gamma;
    long mu_r = 0;        // r(r-1)/2, proved order of vanishing at y=0
    long mu_r_plus_1 = 0; // r(r+1)/2, conjectured exact degree
};

WrPoly wr_poly(int r);

struct Lemma61Report {
    int r = 0;
    bool ok = false;
    long first_nonzero = -1;
};

// gamma(j,r) == 0 for all j < r(r-1)/2, checked exactly.
Lemma61Report check_lemma61(int r);

struct Conjecture2Report {
    int r = 0;
    bool ok = false;
    long degree = -1;
    Int leading;
};

// degree(epsilon_r W_r) == r(r+1)/2 with positive leading coefficient.
Conjecture2Report check_conjecture2(int r);

// Closed form {prod_j c(j,j)} * [det (5+4i)^j]^2 for the lowest surviving
// coefficient; the matching identity is gamma(mu(r), r) = epsilon_r * value.
Rat gamma_mu_closed_form(int r);

// Bound suite for the order-2 Wronskian split: recomputes the closed form
// W_2(y) = 16y(-15+12y-4y^2), its value at y=pi, and the tail-term bound
// constants 2^14 C_2 pi^4 e^{-3pi} etc., with C_j(y) = 1/(1 - 2^{j+2} e^{-2y}).
struct Lemma25Report {
    bool w2_closed_form_ok = false;
    Real w2_at_pi;
    Real t1_bound, t2_bound, t3_bound, t4_bound;
    Real bound_sum;
    // Alternative reading of the C_j constant with 2^{2j+3} in place of
    // 2^{j+2}; reported so the ambiguity stays visible.
    Real t1_bound_alt;
};

Lemma25Report bounds_wronskian2(const PrecCtx& ctx);

// C_j(y) = 1/(1 - 2^{j+2} e^{-2y}); requires 2^{j+2} e^{-2y} < 1.
Real c_bound(int j, const Real& y);

} // namespace xidet
