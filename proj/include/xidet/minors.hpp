#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "xidet/determinant.hpp"
#include "xidet/moments.hpp"
#include "xidet/poly.hpp"
#include "xidet/precision.hpp"

namespace xidet {

// r x r minor starting n columns right of the diagonal in the upper-triangular
// coefficient matrix: entry (i,j) is beta_{n+j-i} when n+j-i >= 0, else 0.
struct MinorSpec {
    long n = 0;
    int r = 1;
};

// Outcome of a grid/range scan: verdict, first failure witness if any, and
// the extreme values met along the way (decimal strings for reporting).
struct ScanReport {
    std::string scan;
    bool pass = false;
    std::string grid;
    std::string witness;
    std::string min_value;
    std::string max_value;
    std::vector<std::string> notes;
    int escalations = 0;
};

struct MinorResult {
    Real value;
    int digits_used = 0;
    int escalations = 0;
};

// Determinant with cancellation-aware escalation: precision starts at
// ctx.digits and doubles until the value is stable to 10 significant digits
// between consecutive levels and exceeds its error bound by 10x.
MinorResult minor(const MinorSpec& spec, const PrecCtx& ctx);

// Same minor assembled from the raw moments b_n and exact factorials
// (defined for n > r only; negative factorial arguments have no meaning).
MinorResult minor_via_bn(const MinorSpec& spec, const PrecCtx& ctx);

// Strict Turan inequalities beta_n^2 > ((n+1)/n) beta_{n-1} beta_{n+1}.
ScanReport turan_check(long n_max, const PrecCtx& ctx);

// Positivity of the small-n minors the kernel method cannot reach:
// D(n,r) > 0 for n = 0..eta(r), eta(r) = k_L(m(r)) with k_L = n_L + r - 1,
// n_L = m/2 (m even) or (m+1)/2 (m odd). m(r) values may come from
// sign-regularity scans; the default table covers r = 2..9.
extern const std::map<int, int> kDefaultMrTable;
long eta_from_m(int m, int r);
ScanReport exceptional_scan(int r_max, const PrecCtx& ctx,
                            const std::map<int, int>& mr_table = kDefaultMrTable);

// Gamma-ratio determinant scaled to a polynomial in y = 1/(2n):
// the prefactor (2n)^{-r(r-1)} prod g(i,n)^{r-i} with g(i,n)=(2n+2i)(2n+2i-1)
// cancels every denominator permutation by permutation.
struct DeltaBarPoly {
    int r = 0;
    std::vector<Rat> delta;
};

// Per-permutation components Z(k,y) (k in lexicographic permutation order);
// each is a product of factors (1 + a y) left after the cancellation.
std::vector<RatPoly> gamma_ratio_components(int r);
DeltaBarPoly delta_bar_poly(int r);

// Exact rational value of the scaled gamma-ratio determinant at a given n.
Rat delta_bar_value(int r, long n);

// Partial sum sum_{k<n_terms} beta_k (-t^2)^k with the next term as tail
// estimate; the argument must be small enough that the tail is below
// 10^-(digits/2) of the sum.
Real xi_eval(const Real& t, int n_terms, const PrecCtx& ctx);

} // namespace xidet
