#include "xidet/quad.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

namespace xidet {

namespace {

std::mutex g_node_mutex;
std::map<std::pair<mpfr_prec_t, int>, std::vector<QuadNode>> g_node_cache;

// Beyond this point in t the double-exponential weight is below the target
// scale for the precision; nodes are not generated past it.
double t_cutoff(mpfr_prec_t prec) {
    double decimal = static_cast<double>(prec) * 0.30103 + 10.0;
    return std::asinh(2.0 * decimal * 2.302585092994046 / 3.141592653589793) + 0.5;
}

std::vector<QuadNode> build_nodes(mpfr_prec_t prec, int level) {
    // level 0: t = 1, 2, 3, ... (t = 0 handled by the caller);
    // level L >= 1: odd multiples of h = 2^-L.
    std::vector<QuadNode> out;
    const double tmax = t_cutoff(prec);
    const double h = std::ldexp(1.0, -level);
    Real half_pi = mul_2si(Real::pi(prec), -1);
    const long kstep = level == 0 ? 1 : 2;
    for (long k = 1;; k += kstep) {
        double td = static_cast<double>(k) * h;
        if (td > tmax) break;
        Real t = Real::of_double(td, prec);
        Real u = half_pi * sinh(t);
        QuadNode node;
        node.x = tanh(u);
        Real ch = cosh(u);
        node.w = half_pi * cosh(t) / (ch * ch);
        out.push_back(std::move(node));
    }
    return out;
}

} // namespace

const std::vector<QuadNode>& tanh_sinh_nodes(mpfr_prec_t prec, int level) {
    std::lock_guard<std::mutex> lock(g_node_mutex);
    auto key = std::make_pair(prec, level);
    auto it = g_node_cache.find(key);
    if (it == g_node_cache.end()) it = g_node_cache.emplace(key, build_nodes(prec, level)).first;
    return it->second;
}

std::vector<Real> integrate_many(
    const std::function<void(const Real& x, std::vector<Real>& terms)>& eval_terms, size_t count,
    const QuadSpec& spec, const PrecCtx& ctx) {
    const mpfr_prec_t prec = ctx.prec_bits();

    Real center = mul_2si(spec.lower.with_prec(prec) + spec.upper.with_prec(prec), -1);
    Real radius = mul_2si(spec.upper.with_prec(prec) - spec.lower.with_prec(prec), -1);
    if (!(radius > 0)) throw std::invalid_argument("integrate: empty interval");

    Real rel_tol = pow10(spec.rel_tol_exp10, prec);
    Real abs_tol = spec.abs_tol.with_prec(prec);

    std::vector<Real> sums(count, Real(prec));
    std::vector<Real> terms(count, Real(prec));
    std::vector<double> max_term_log10(count, -1e300);
    const double insignificant = static_cast<double>(spec.rel_tol_exp10) - 6.0;

    // Returns true while at least one integrand still picks up terms of
    // relative size above the tolerance scale; drives tail termination.
    auto process = [&](const Real& x, const Real& w) -> bool {
        eval_terms(x, terms);
        bool significant = false;
        for (size_t i = 0; i < count; ++i) {
            Real term = w * terms[i];
            double tl = term.is_zero() ? -1e300 : term.value_log10();
            if (tl > max_term_log10[i]) max_term_log10[i] = tl;
            if (tl >= max_term_log10[i] + insignificant) significant = true;
            sums[i] += term;
        }
        return significant;
    };

    auto sweep_level = [&](int level) {
        const auto& nodes = tanh_sinh_nodes(prec, level);
        for (int dir = 0; dir < 2; ++dir) {
            int quiet = 0;
            for (const QuadNode& nd : nodes) {
                Real dx = radius * nd.x;
                Real w = nd.w * radius;
                bool sig = process(dir == 0 ? center + dx : center - dx, w);
                quiet = sig ? 0 : quiet + 1;
                if (quiet >= 4) break;
            }
        }
    };

    // level 0 seed: t = 0 plus the integer abscissas
    process(center, mul_2si(Real::pi(prec), -1) * radius);
    sweep_level(0);

    std::vector<Real> prev(count, Real(prec));
    std::vector<Real> curr = sums; // value at level 0, h = 1

    for (int level = 1; level <= spec.max_level; ++level) {
        sweep_level(level);
        prev = std::move(curr);
        curr.assign(count, Real(prec));
        bool all_ok = level >= 3;
        for (size_t i = 0; i < count; ++i) {
            curr[i] = mul_2si(sums[i], -level);
            if (all_ok) {
                Real d = abs(curr[i] - prev[i]);
                Real thr = abs_tol + rel_tol * abs(curr[i]);
                if (!(d <= thr)) all_ok = false;
            }
        }
        if (all_ok) {
            for (size_t i = 0; i < count; ++i) curr[i].add_err_abs(abs(curr[i] - prev[i]));
            return curr;
        }
    }
    std::ostringstream msg;
    msg << "integrate: no convergence after level " << spec.max_level << " at " << ctx.digits
        << " digits";
    throw escalation_error(msg.str());
}

Real integrate(const std::function<Real(const Real&)>& f, const QuadSpec& spec, const PrecCtx& ctx) {
    auto eval = [&f](const Real& x, std::vector<Real>& terms) { terms[0] = f(x); };
    return integrate_many(eval, 1, spec, ctx)[0];
}

} // namespace xidet
