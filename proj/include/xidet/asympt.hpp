#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "xidet/exact.hpp"
#include "xidet/minors.hpp"
#include "xidet/precision.hpp"

namespace xidet {

// One permutation term of the large-n expansion: offsets nu_i = q(i) - i and
// the symmetrized-monomial exponents e_i = 2(nu_i + r - 1), which always sum
// to 2r(r-1).
struct PermComponent {
    int k = 0; // 1-based component index
    std::vector<int> q;
    int sign = 1;
    std::vector<int> nu;
    std::vector<long> exponents;
};

// Partition label of a symmetrized monomial of total degree m: at most r
// parts, each <= 4(r-1), listed in descending (reverse-lexicographic) order.
// The monomial is normalized so the diagonal x_1=...=x_r=x evaluates to x^m.
struct SymMonomial {
    long m = 0;
    int j = 0; // 1-based index within degree m
    std::vector<int> lambda;
};

// Exact coefficient tables of the expansion around t_i = tau(1+x_i):
//   T(m,j,k): coefficient of monomial (m,j) in component k,
//   z(i,k):   coefficient of y^i in the gamma-ratio component Z(k,y),
//   C(i;m,j) = sum_k sign(k) z(i,k) T(m,j,k).
struct CoeffArray {
    int r = 0;
    std::vector<PermComponent> comps;
    std::vector<std::vector<SymMonomial>> monomials;  // [m] -> list
    std::map<std::tuple<long, int, int>, Rat> T;      // (m, j, k)
    std::vector<std::vector<Rat>> z;                  // [k-1][i]
    std::map<std::tuple<long, long, int>, Rat> C;     // (i, m, j)
};

std::vector<PermComponent> components(int r);
std::vector<std::vector<SymMonomial>> monomial_basis(int r);
long np_count(int r, long m);

CoeffArray expand_coefficients(int r);

struct Conjecture3Report {
    int r = 0;
    bool ok = false;
    long zeros_required = 0;
    std::vector<std::string> violations;
};

// C(i;m,j) = 0 for m <= r(r-1)-2i-2, i <= r(r-1)/2 - 1, all j; exact.
Conjecture3Report check_conjecture3(int r);

struct DominanceReport {
    long n = 0;
    Real tau;
    Real direct;         // scaled determinant from the raw moments
    Real reconstructed;  // sum of C(i;m,j) y^i I(m,j)
    Real rel_error;
    Real term_10;        // (i,m) = (1,0) group
    Real term_02;        // (i,m) = (0,2) group
    Real ratio_10_02;
};

// Order r = 2 end-to-end check: the expansion is an identity, so the
// reconstruction must match the scaled determinant to quadrature accuracy;
// the (1,0)/(0,2) term ratio tracks the peak location tau(n).
DominanceReport dominance_diagnostic(long n, const PrecCtx& ctx);

} // namespace xidet
