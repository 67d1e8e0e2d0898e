#pragma once

#include <vector>

#include "xidet/cvpoly.hpp"
#include "xidet/precision.hpp"
#include "xidet/real.hpp"

namespace xidet {

// The kernel series
//   phi(u) = sum_{n>=1} (2 pi^2 n^4 e^{9u} - 3 pi n^2 e^{5u}) exp(-pi n^2 e^{4u})
// and its derivatives, which take the termwise form
//   phi^(j)(u) = sum_n pi n^2 p_{j+1}(pi n^2 e^{4u}) exp(5u - pi n^2 e^{4u})
// with p_k the Csordas-Varga polynomials. Series are truncated once the
// remaining tail, bounded through |p_k(z)| <= S_k z^k, drops below
// 10^-(digits+guard) relative to the largest term; the bound is added to the
// error field of the result.
struct PhiSeriesParams {
    PrecCtx ctx;
    int n_max_hard = 200;
    int j_max = 60;

    PhiSeriesParams() = default;
    explicit PhiSeriesParams(const PrecCtx& c) : ctx(c) {}
};

Real phi_deriv(const Real& u, int j, const PhiSeriesParams& params);

// All derivatives up to j_hi in one pass (the exponentials are shared across
// orders). Cached per (u, working precision).
std::vector<Real> phi_derivs_upto(const Real& u, int j_hi, const PhiSeriesParams& params);

// n = 1 term alone: pi * p_{j+1}(pi e^{4u}) * exp(5u - pi e^{4u}).
Real phi_term1(const Real& u, int j, const PhiSeriesParams& params);

// Uncached kernel value, for quadrature integrands whose abscissas would
// flood the memo tables.
Real phi_value_uncached(const Real& u, const PhiSeriesParams& params);

// Split of the rescaled derivative at y = pi e^{4u}:
//   Omega_j(y) = phi^(j)(u) e^{y-5u}/pi = p_{j+1}(y) + Upsilon_j(y),
//   Upsilon_j(y) = sum_{n>=2} n^2 p_{j+1}(n^2 y) e^{-(n^2-1)y}.
struct OmegaSplit {
    Real omega;
    Real p_value;
    Real upsilon;
};

OmegaSplit omega_upsilon_split(const Real& y, int j, const PhiSeriesParams& params);

// Tail-term bound 2^{4j+5} C_j(y) y^{j+1} e^{-3y} with
// C_j(y) = 1/(1 - 2^{j+2} e^{-2y}).
Real upsilon_bound(int j, const Real& y);

// Iterated tail integrals of the kernel:
//   Psi_0 = phi,  Psi_m(u) = (1/(m-1)!) Int_u^inf phi(t) (t-u)^{m-1} dt.
struct CumulantValue {
    int m = 0;
    Real u;
    Real value;
};

CumulantValue cumulant(const Real& u, int m, const PhiSeriesParams& params);

// Psi_1..Psi_m_hi at u in one quadrature pass (shared kernel evaluations).
std::vector<Real> cumulants_upto(const Real& u, int m_hi, const PhiSeriesParams& params);

// d-th derivative of Psi_m: (-1)^d Psi_{m-d} while d <= m, then derivatives
// fall through to the kernel itself as (-1)^m phi^(d-m).
Real cumulant_kernel_deriv(const Real& u, int m, int d, const PhiSeriesParams& params);

// Drop memoized kernel/cumulant values (mainly for tests measuring cost).
void clear_phi_caches();

} // namespace xidet
