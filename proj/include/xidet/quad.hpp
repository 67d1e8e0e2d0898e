#pragma once

#include <functional>
#include <vector>

#include "xidet/errors.hpp"
#include "xidet/precision.hpp"
#include "xidet/real.hpp"

namespace xidet {

// Integration request for a finite interval. All integrands in this project
// are analytic with fast decay toward the truncated end, so a node-doubling
// tanh-sinh rule converges superlinearly; convergence is declared when two
// successive refinements agree within abs_tol + 10^rel_tol_exp10 * |I|.
struct QuadSpec {
    Real lower;
    Real upper;
    long rel_tol_exp10 = -60;
    Real abs_tol; // defaults to zero
    int max_level = 14;
};

// tanh-sinh nodes for [-1,1] at a given refinement level: only the strictly
// positive abscissas of the level (odd multiples of the step for level >= 1),
// mirrored by the caller. Cached per (precision, level).
struct QuadNode {
    Real x; // abscissa in (0,1)
    Real w; // weight (step factor not included)
};

const std::vector<QuadNode>& tanh_sinh_nodes(mpfr_prec_t prec, int level);

// Evaluates `count` integrands sharing one node ladder. eval_terms must fill
// terms[0..count) with the integrand values at x; shared work (a common kernel
// factor, running power chains) lives inside the callback. Every integral must
// meet the tolerance for the refinement to stop; the per-integrand change of
// the final refinement is added to each error bound.
std::vector<Real> integrate_many(
    const std::function<void(const Real& x, std::vector<Real>& terms)>& eval_terms, size_t count,
    const QuadSpec& spec, const PrecCtx& ctx);

Real integrate(const std::function<Real(const Real&)>& f, const QuadSpec& spec, const PrecCtx& ctx);

} // namespace xidet
