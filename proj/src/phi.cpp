#include "xidet/phi.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "xidet/quad.hpp"

namespace xidet {

namespace {

constexpr double kLn10 = 2.302585092994046;

struct UKey {
    double u;
    int digits;
    bool operator<(const UKey& o) const {
        if (u != o.u) return u < o.u;
        return digits < o.digits;
    }
};

// The memo tables key on the double image of u; only arguments that
// round-trip through double exactly may use them.
bool cacheable_arg(const Real& u) {
    double d = u.to_double();
    return std::isfinite(d) && mpfr_cmp_d(u.raw(), d) == 0;
}

std::mutex g_phi_mutex;
std::map<UKey, std::vector<Real>> g_deriv_cache;    // derivatives 0..j
std::map<UKey, std::vector<Real>> g_cumulant_cache; // Psi_1..Psi_m

double log10_abs_sum(int k) {
    signed long e2 = 0;
    double d = mpz_get_d_2exp(&e2, abs_coeff_sum(k).get_mpz_t());
    return std::log10(std::abs(d)) + static_cast<double>(e2) * 0.30102999566398119521;
}

// log10 of the tail-term majorant pi m^2 S_k (m^2 y)^k e^{5u - m^2 y}.
double log10_term_bound(int k, double m, double y, double u) {
    double m2y = m * m * y;
    return 0.49714987269413385 + 2.0 * std::log10(m) + log10_abs_sum(k) +
           static_cast<double>(k) * std::log10(m2y) + (5.0 * u - m2y) / kLn10;
}

void check_args(const Real& u, int j, const PhiSeriesParams& params) {
    if (u.sign() < 0) throw std::invalid_argument("phi_deriv: u must be >= 0");
    if (j < 0 || j > params.j_max) {
        std::ostringstream msg;
        msg << "phi_deriv: derivative order " << j << " exceeds ceiling " << params.j_max;
        throw std::invalid_argument(msg.str());
    }
}

// Core series evaluation for derivative orders 0..j_hi at once.
std::vector<Real> eval_derivs(const Real& u, int j_hi, const PhiSeriesParams& params) {
    const mpfr_prec_t prec = params.ctx.prec_bits();
    const int tol_exp = params.ctx.tail_tol_exponent();
    const double ud = u.to_double();

    Real uu = u.with_prec(prec);
    Real pi = Real::pi(prec);
    Real eu = exp(uu);
    Real y = pi * pow_si(eu, 4);       // pi e^{4u}
    const double yd = y.to_double();
    Real b = exp(-y);                  // e^{-y}
    Real a = pow_si(eu, 5) * b;        // e^{5u-y}
    Real b2 = b * b;                   // e^{-2y}

    // coefficient tables at working precision
    std::vector<std::vector<Real>> coeff(static_cast<size_t>(j_hi) + 1);
    for (int j = 0; j <= j_hi; ++j) {
        const IntPoly& p = cv_poly(j + 1).poly;
        auto& row = coeff[static_cast<size_t>(j)];
        row.reserve(p.coeffs().size());
        for (const Int& c : p.coeffs()) row.push_back(Real::of_int(c, prec));
    }

    std::vector<Real> sums(static_cast<size_t>(j_hi) + 1, Real(prec));
    std::vector<double> peak(static_cast<size_t>(j_hi) + 1, -1e300);
    std::vector<Real> max_term(static_cast<size_t>(j_hi) + 1, Real(prec));

    Real c_pow = Real::of_long(1, prec); // e^{-(n^2-1)y}
    Real d_pow = b * b2;                 // e^{-(2n+1)y}, n = 1
    long n = 1;
    for (;; ++n) {
        if (n > params.n_max_hard)
            throw escalation_error("phi_deriv: series did not settle before hard index cap");
        Real n2(prec);
        n2 = Real::of_long(n * n, prec);
        Real arg = n2 * y;
        Real factor = pi * n2 * a * c_pow; // pi n^2 e^{5u - n^2 y}
        for (int j = 0; j <= j_hi; ++j) {
            const auto& row = coeff[static_cast<size_t>(j)];
            Real horner(prec);
            for (size_t i = row.size(); i-- > 0;) horner = horner * arg + row[i];
            Real term = factor * horner;
            sums[static_cast<size_t>(j)] += term;
            double tl = term.is_zero() ? -1e300 : term.value_log10();
            if (tl > peak[static_cast<size_t>(j)]) {
                peak[static_cast<size_t>(j)] = tl;
                max_term[static_cast<size_t>(j)] = abs(term);
            }
        }
        c_pow *= d_pow;
        d_pow *= b2;

        if (n >= 2) {
            bool done = true;
            double m = static_cast<double>(n + 1);
            for (int j = 0; j <= j_hi && done; ++j) {
                double tb = log10_term_bound(j + 1, m, yd, ud);
                if (tb > peak[static_cast<size_t>(j)] + tol_exp) done = false;
            }
            if (done) break;
        }
    }

    // tail below 10^(tol_exp) of the peak term; factor covers the geometric sum
    for (int j = 0; j <= j_hi; ++j) {
        Real tail = max_term[static_cast<size_t>(j)] * pow10(tol_exp + 1, Real::kErrPrec * 2);
        sums[static_cast<size_t>(j)].add_err_abs(tail);
    }
    return sums;
}

} // namespace

std::vector<Real> phi_derivs_upto(const Real& u, int j_hi, const PhiSeriesParams& params) {
    check_args(u, j_hi, params);
    if (!cacheable_arg(u)) return eval_derivs(u, j_hi, params);
    UKey key{u.to_double(), params.ctx.digits};
    {
        std::lock_guard<std::mutex> lock(g_phi_mutex);
        auto it = g_deriv_cache.find(key);
        if (it != g_deriv_cache.end() && static_cast<int>(it->second.size()) > j_hi) {
            return std::vector<Real>(it->second.begin(), it->second.begin() + j_hi + 1);
        }
    }
    std::vector<Real> vals = eval_derivs(u, j_hi, params);
    {
        std::lock_guard<std::mutex> lock(g_phi_mutex);
        auto& slot = g_deriv_cache[key];
        if (slot.size() < vals.size()) slot = vals;
    }
    return vals;
}

Real phi_deriv(const Real& u, int j, const PhiSeriesParams& params) {
    return phi_derivs_upto(u, j, params)[static_cast<size_t>(j)];
}

Real phi_value_uncached(const Real& u, const PhiSeriesParams& params) {
    return eval_derivs(u, 0, params)[0];
}

Real phi_term1(const Real& u, int j, const PhiSeriesParams& params) {
    check_args(u, j, params);
    const mpfr_prec_t prec = params.ctx.prec_bits();
    Real uu = u.with_prec(prec);
    Real pi = Real::pi(prec);
    Real y = pi * exp(mul_2si(uu, 2));
    return pi * cv_poly(j + 1).poly.eval_real(y) * exp(Real::of_long(5, prec) * uu - y);
}

OmegaSplit omega_upsilon_split(const Real& y, int j, const PhiSeriesParams& params) {
    if (j < 0 || j > 2) throw std::invalid_argument("omega_upsilon_split: j must be 0, 1 or 2");
    Real pi_lo = Real::pi(64);
    if (cmp(y, pi_lo) < 0) throw std::invalid_argument("omega_upsilon_split: y must be >= pi");
    const mpfr_prec_t prec = params.ctx.prec_bits();
    const int tol_exp = params.ctx.tail_tol_exponent();

    Real yy = y.with_prec(prec);
    const double yd = yy.to_double();
    const IntPoly& p = cv_poly(j + 1).poly;

    Real b = exp(-yy);
    Real b2 = b * b;
    Real c_pow = b * b2;      // e^{-(n^2-1)y} at n = 2
    Real d_pow = c_pow * b2;  // e^{-(2n+1)y} at n = 2

    Real upsilon(prec);
    Real peak(prec);
    for (long n = 2;; ++n) {
        if (n > params.n_max_hard)
            throw escalation_error("omega_upsilon_split: tail series did not settle");
        Real n2 = Real::of_long(n * n, prec);
        Real term = n2 * p.eval_real(n2 * yy) * c_pow;
        upsilon += term;
        peak = max(peak, abs(term));
        c_pow *= d_pow;
        d_pow *= b2;
        double tb = log10_term_bound(j + 1, static_cast<double>(n + 1), yd, 0.0) -
                    (-yd / kLn10); // strip the e^{5u}=1, add back e^{+y}
        double scale = peak.is_zero() ? 0.0 : peak.value_log10();
        if (n >= 3 && tb <= scale + tol_exp) break;
    }
    Real tail = peak * pow10(tol_exp + 1, Real::kErrPrec * 2);
    upsilon.add_err_abs(tail);

    OmegaSplit out;
    out.p_value = p.eval_real(yy);
    out.upsilon = upsilon;
    out.omega = out.p_value + out.upsilon;
    return out;
}

Real upsilon_bound(int j, const Real& y) {
    return mul_2si(c_bound(j, y) * pow_si(y, j + 1) * exp(Real::of_long(-3, y.prec()) * y), 4 * j + 5);
}

std::vector<Real> cumulants_upto(const Real& u, int m_hi, const PhiSeriesParams& params) {
    if (m_hi < 1) throw std::invalid_argument("cumulants_upto: m_hi must be >= 1");
    if (u.sign() < 0) throw std::invalid_argument("cumulants_upto: u must be >= 0");
    const bool use_cache = cacheable_arg(u);
    UKey key{u.to_double(), params.ctx.digits};
    if (use_cache) {
        std::lock_guard<std::mutex> lock(g_phi_mutex);
        auto it = g_cumulant_cache.find(key);
        if (it != g_cumulant_cache.end() && static_cast<int>(it->second.size()) >= m_hi)
            return std::vector<Real>(it->second.begin(), it->second.begin() + m_hi);
    }

    const mpfr_prec_t prec = params.ctx.prec_bits();
    const int dg = params.ctx.digits + params.ctx.guard;
    const double ud = u.to_double();

    // Truncation window: log-majorant of the slowest-decaying integrand
    // (the largest m), relative to its own maximum over the window.
    auto lmaj = [&](double t) {
        double base = 1.596 + (9.0 * t - 3.141592653589793 * std::exp(4.0 * t)) / kLn10;
        double d = t - ud;
        if (m_hi > 1) base += (m_hi - 1) * std::log10(std::max(d, 1e-12));
        return base;
    };
    double peak = -1e300;
    for (double d = 0.0; d <= 12.0; d += 1.0 / 64) peak = std::max(peak, lmaj(ud + d));
    double T = 0.0;
    for (double d = 1.0 / 64; d <= 24.0; d += 1.0 / 64) {
        if (lmaj(ud + d) <= peak - (dg + 5)) {
            T = d;
            break;
        }
    }
    if (T == 0.0) throw escalation_error("cumulants_upto: no truncation point found");
    T = std::max(2.0 * T, 0.25);

    Real uu = u.with_prec(prec);
    QuadSpec spec;
    spec.lower = uu;
    spec.upper = uu + Real::of_double(T, prec);
    spec.rel_tol_exp10 = -(dg) + 5;
    spec.abs_tol = Real(prec);
    spec.max_level = 14;

    PhiSeriesParams local(params.ctx);
    auto eval_terms = [&local, &uu, m_hi](const Real& t, std::vector<Real>& terms) {
        Real fx = eval_derivs(t, 0, local)[0];
        Real shift = t - uu;
        terms[0] = fx;
        for (int m = 2; m <= m_hi; ++m) {
            fx = fx * shift; // phi(t) (t-u)^{m-1}
            terms[static_cast<size_t>(m - 1)] = fx;
        }
    };
    std::vector<Real> vals =
        integrate_many(eval_terms, static_cast<size_t>(m_hi), spec, params.ctx);
    for (int m = 1; m <= m_hi; ++m) {
        vals[static_cast<size_t>(m - 1)] =
            vals[static_cast<size_t>(m - 1)] / Real::of_int(factorial(m - 1), prec);
        // truncated upper limit: relative tail below the quadrature target
        Real tail = abs(vals[static_cast<size_t>(m - 1)]) * pow10(-dg + 6, Real::kErrPrec * 2);
        vals[static_cast<size_t>(m - 1)].add_err_abs(tail);
    }

    if (use_cache) {
        std::lock_guard<std::mutex> lock(g_phi_mutex);
        auto& slot = g_cumulant_cache[key];
        if (slot.size() < vals.size()) slot = vals;
    }
    return vals;
}

CumulantValue cumulant(const Real& u, int m, const PhiSeriesParams& params) {
    if (m < 0) throw std::invalid_argument("cumulant: m must be >= 0");
    CumulantValue out;
    out.m = m;
    out.u = u;
    if (m == 0) {
        out.value = phi_deriv(u, 0, params);
        return out;
    }
    out.value = cumulants_upto(u, m, params)[static_cast<size_t>(m - 1)];
    if (out.value.definitely_negative(1.0))
        throw std::logic_error("cumulant: tail integral of a positive kernel came out negative");
    return out;
}

Real cumulant_kernel_deriv(const Real& u, int m, int d, const PhiSeriesParams& params) {
    if (m < 0 || d < 0) throw std::invalid_argument("cumulant_kernel_deriv: m, d must be >= 0");
    if (d <= m) {
        Real v = cumulant(u, m - d, params).value;
        return (d % 2 == 0) ? v : -v;
    }
    Real v = phi_deriv(u, d - m, params);
    return (m % 2 == 0) ? v : -v;
}

void clear_phi_caches() {
    std::lock_guard<std::mutex> lock(g_phi_mutex);
    g_deriv_cache.clear();
    g_cumulant_cache.clear();
}

} // namespace xidet
