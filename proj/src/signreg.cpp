#include "xidet/signreg.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "xidet/parallel.hpp"

namespace xidet {

namespace {

unsigned scan_threads() {
    if (const char* env = std::getenv("XIDET_THREADS")) {
        long v = std::atol(env);
        if (v >= 1 && v <= 64) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Cancellation estimate for the order-p Hankel determinant of derivatives:
// entry products overshoot the true value by about mu(p) powers of
// y = pi e^{4u}, so that many digits are going to cancel.
int start_digits(double u, int p, const PrecCtx& ctx) {
    double y = 3.141592653589793 * std::exp(4.0 * u);
    double lost = static_cast<double>(mu_of(p)) * std::log10(std::max(y, 16.0));
    int d = ctx.digits + static_cast<int>(std::ceil(lost)) + 2 * p;
    return ((d + 99) / 100) * 100;
}

constexpr int kDigitCeiling = 40000;

// All orders p = 1..p_max at one point, escalating the whole point until
// every determinant keeps >= 10 digits above its error bound.
std::vector<Real> wronskians_at(const Real& u, int p_max, int m, const PrecCtx& ctx) {
    int digits = start_digits(u.to_double(), p_max, ctx);
    for (;;) {
        PrecCtx level(digits, ctx.guard);
        PhiSeriesParams params(level);
        const int d_hi = 2 * p_max - 2;

        std::vector<Real> psi; // Psi_m .. Psi_1 as needed
        if (m >= 1) psi = cumulants_upto(u, m, params);
        std::vector<Real> phi = phi_derivs_upto(u, std::max(0, d_hi - m), params);
        auto entry = [&](int d) -> Real {
            if (d <= m) {
                Real v = d == m ? phi[0] : psi[static_cast<size_t>(m - d - 1)];
                return (d % 2 == 0) ? v : -v;
            }
            Real v = phi[static_cast<size_t>(d - m)];
            return (m % 2 == 0) ? v : -v;
        };

        std::vector<Real> out;
        out.reserve(static_cast<size_t>(p_max));
        bool ok = true;
        for (int p = 1; p <= p_max && ok; ++p) {
            Mat<Real> h(static_cast<size_t>(p));
            for (int i = 1; i <= p; ++i)
                for (int j = 1; j <= p; ++j)
                    h(static_cast<size_t>(i - 1), static_cast<size_t>(j - 1)) = entry(i + j - 2);
            try {
                Real det = det_float(h, level);
                if (det.digits_above_err() < 10.0) {
                    ok = false;
                } else {
                    out.push_back(std::move(det));
                }
            } catch (const precision_exhausted&) {
                ok = false;
            }
        }
        if (ok) return out;
        digits *= 2;
        if (digits > kDigitCeiling) {
            std::ostringstream msg;
            msg << "wronskian: escalation ceiling at u=" << u.to_double() << " p<=" << p_max
                << " m=" << m;
            throw escalation_error(msg.str());
        }
    }
}

// Normalization by the first series term: (pi e^{5u-y})^p.
Real first_term_norm(const Real& u, int p, const PrecCtx& ctx) {
    const mpfr_prec_t prec = ctx.prec_bits();
    Real uu = u.with_prec(prec);
    Real pi = Real::pi(prec);
    Real y = pi * exp(mul_2si(uu, 2));
    return pow_si(pi * exp(Real::of_long(5, prec) * uu - y), p);
}

} // namespace

std::vector<double> GridSpec::points() const {
    if (u_min < 0 || step <= 0 || u_max < u_min)
        throw std::invalid_argument("GridSpec: need 0 <= u_min <= u_max, step > 0");
    std::vector<double> out;
    long count = static_cast<long>(std::floor((u_max - u_min) / step + 0.5)) + 1;
    for (long i = 0; i < count; ++i) {
        double u = u_min + static_cast<double>(i) * step;
        if (u > u_max + step * 1e-9) break;
        out.push_back(u);
    }
    return out;
}

std::string GridSpec::describe() const {
    std::ostringstream s;
    s << "u in [" << u_min << ", " << u_max << "], step " << step;
    return s.str();
}

Real wronskian(const Real& u, int p, int m, const PrecCtx& ctx) {
    if (p < 1 || m < 0) throw std::invalid_argument("wronskian: need p >= 1, m >= 0");
    return wronskians_at(u, p, m, ctx).back();
}

std::vector<SignScanResult> sign_scan(int p_max, int m, const GridSpec& grid, const PrecCtx& ctx) {
    if (p_max < 1) throw std::invalid_argument("sign_scan: p_max must be >= 1");
    std::vector<double> us = grid.points();

    // Warm the kernel/cumulant caches in parallel; the sweep below then runs
    // off memoized values in deterministic grid order.
    PhiSeriesParams warm_params(ctx);
    std::atomic<bool> warm_failed{false};
    parallel_for(
        us.size(),
        [&](size_t i) {
            if (warm_failed.load()) return;
            try {
                PrecCtx level(start_digits(us[i], p_max, ctx), ctx.guard);
                PhiSeriesParams params(level);
                Real u = Real::of_double(us[i], level.prec_bits());
                if (m >= 1) cumulants_upto(u, m, params);
                phi_derivs_upto(u, std::max(0, 2 * p_max - 2 - m), params);
            } catch (...) {
                warm_failed.store(true);
            }
        },
        scan_threads());

    std::vector<SignScanResult> results(static_cast<size_t>(p_max));
    for (int p = 1; p <= p_max; ++p) {
        results[static_cast<size_t>(p - 1)].p = p;
        results[static_cast<size_t>(p - 1)].m = m;
        results[static_cast<size_t>(p - 1)].all_positive = true;
    }

    std::vector<std::optional<Real>> min_scaled(static_cast<size_t>(p_max));
    for (size_t i = 0; i < us.size(); ++i) {
        Real u = Real::of_double(us[i], ctx.prec_bits());
        std::vector<Real> w = wronskians_at(u, p_max, m, ctx);
        for (int p = 1; p <= p_max; ++p) {
            SignScanResult& res = results[static_cast<size_t>(p - 1)];
            if (!res.all_positive) continue; // already failed, witness kept
            Real signed_w = epsilon_sign(p) > 0 ? w[static_cast<size_t>(p - 1)]
                                                : -w[static_cast<size_t>(p - 1)];
            Real scaled = signed_w / first_term_norm(u, p, ctx);
            auto& mn = min_scaled[static_cast<size_t>(p - 1)];
            if (!mn || cmp(scaled, *mn) < 0) mn = scaled;
            if (signed_w.sign() <= 0) {
                res.all_positive = false;
                res.witness_u = us[i];
                res.witness_value = signed_w.to_decimal(20);
                if (grid.refine_near_failure && i > 0) {
                    // bisect between the last positive point and the failure
                    double lo = us[i - 1], hi = us[i];
                    for (int it = 0; it < 50 && hi - lo > 1e-14; ++it) {
                        double mid = 0.5 * (lo + hi);
                        Real wm = wronskian(Real::of_double(mid, ctx.prec_bits()), p, m, ctx);
                        Real sm = epsilon_sign(p) > 0 ? wm : -wm;
                        (sm.sign() > 0 ? lo : hi) = mid;
                    }
                    res.refined_crossing = 0.5 * (lo + hi);
                }
            }
        }
    }
    for (int p = 1; p <= p_max; ++p) {
        auto& mn = min_scaled[static_cast<size_t>(p - 1)];
        if (mn) results[static_cast<size_t>(p - 1)].min_scaled_value = mn->to_decimal(20);
    }
    return results;
}

namespace {

// First failing (u, p) for this m, coarse pass (every 10th point) first so
// a rejection does not pay for the whole fine grid.
struct FailProbe {
    bool failed = false;
    double u = 0.0;
    int p = 0;
};

FailProbe any_failure(int r, int m, const GridSpec& grid, const PrecCtx& ctx) {
    std::vector<double> us = grid.points();
    // coarse subgrid first so a rejection does not pay for the fine grid
    std::vector<size_t> order;
    for (size_t i = 0; i < us.size(); i += 10) order.push_back(i);
    for (size_t i = 0; i < us.size(); ++i)
        if (i % 10 != 0) order.push_back(i);

    const size_t block = 32;
    for (size_t base = 0; base < order.size(); base += block) {
        size_t count = std::min(block, order.size() - base);
        std::atomic<bool> warm_failed{false};
        parallel_for(
            count,
            [&](size_t k) {
                if (warm_failed.load()) return;
                try {
                    size_t i = order[base + k];
                    PrecCtx level(start_digits(us[i], r, ctx), ctx.guard);
                    PhiSeriesParams params(level);
                    Real u = Real::of_double(us[i], level.prec_bits());
                    if (m >= 1) cumulants_upto(u, m, params);
                    phi_derivs_upto(u, std::max(0, 2 * r - 2 - m), params);
                } catch (...) {
                    warm_failed.store(true);
                }
            },
            scan_threads());
        for (size_t k = 0; k < count; ++k) {
            size_t i = order[base + k];
            Real u = Real::of_double(us[i], ctx.prec_bits());
            std::vector<Real> w = wronskians_at(u, r, m, ctx);
            for (int p = r; p >= 1; --p) {
                Real signed_w =
                    epsilon_sign(p) > 0 ? w[static_cast<size_t>(p - 1)] : -w[static_cast<size_t>(p - 1)];
                if (signed_w.sign() <= 0) return FailProbe{true, us[i], p};
            }
        }
    }
    return FailProbe{};
}

} // namespace

MrResult find_mr(int r, int m_cap, const GridSpec& grid, const PrecCtx& ctx) {
    if (r < 2) throw std::invalid_argument("find_mr: r must be >= 2");
    MrResult out;
    out.r = r;
    for (int m = 0; m <= m_cap; ++m) {
        FailProbe probe = any_failure(r, m, grid, ctx);
        if (!probe.failed) {
            out.m = m;
            out.eta = eta_from_m(m, r);
            return out;
        }
        out.last_failure_u = probe.u;
    }
    std::ostringstream msg;
    msg << "find_mr: no all-positive order below m_cap=" << m_cap << " for r=" << r;
    throw escalation_error(msg.str());
}

Real q_eval(const Real& u, const Real& v, const PrecCtx& ctx) {
    if (!(u > 0) || !(v > 0)) throw std::invalid_argument("q_eval: need u, v > 0");
    int digits = ctx.digits;
    for (;;) {
        PrecCtx level(digits, ctx.guard);
        PhiSeriesParams params(level);
        std::vector<Real> fu = phi_derivs_upto(u, 3, params);
        std::vector<Real> fv = phi_derivs_upto(v, 3, params);
        std::vector<Real> fw = phi_derivs_upto(u + v, 3, params);
        Mat<Real> q(3);
        q(0, 0) = Real(level.prec_bits());
        q(0, 1) = fv[1];
        q(0, 2) = fv[2];
        q(1, 0) = fu[1];
        q(1, 1) = fw[1];
        q(1, 2) = fw[2];
        q(2, 0) = fu[2];
        q(2, 1) = fw[2];
        q(2, 2) = fw[3];
        try {
            Real det = det_float(q, level);
            if (det.digits_above_err() >= 10.0) return det;
        } catch (const precision_exhausted&) {
        }
        digits *= 2;
        if (digits > kDigitCeiling) throw escalation_error("q_eval: escalation ceiling");
    }
}

ScanReport q_scan(const GridSpec& grid, const PrecCtx& ctx) {
    std::vector<double> us = grid.points();
    // open grid: the kernel derivative vanishes at 0, so u = 0 rows are out
    std::vector<double> pts;
    for (double u : us)
        if (u > 0) pts.push_back(u);
    if (pts.empty()) throw std::invalid_argument("q_scan: empty positive grid");

    ScanReport rep;
    rep.scan = "q";
    rep.grid = grid.describe() + " (both axes, v >= u by symmetry)";
    rep.pass = true;
    rep.notes.push_back("finite grid scan: evidence, not a proof");

    // warm the derivative cache (all points, including the sums u+v, get
    // computed on first use; precompute the axis points in parallel)
    PhiSeriesParams params(ctx);
    std::atomic<bool> warm_failed{false};
    parallel_for(
        pts.size(),
        [&](size_t i) {
            if (warm_failed.load()) return;
            try {
                phi_derivs_upto(Real::of_double(pts[i], ctx.prec_bits()), 3, params);
            } catch (...) {
                warm_failed.store(true);
            }
        },
        scan_threads());

    std::optional<Real> worst; // max of q (want < 0)
    std::optional<Real> best;  // min of q
    for (size_t i = 0; i < pts.size(); ++i) {
        for (size_t j = i; j < pts.size(); ++j) {
            Real u = Real::of_double(pts[i], ctx.prec_bits());
            Real v = Real::of_double(pts[j], ctx.prec_bits());
            Real q = q_eval(u, v, ctx);
            if (!worst || cmp(q, *worst) > 0) worst = q;
            if (!best || cmp(q, *best) < 0) best = q;
            if (q.sign() >= 0) {
                rep.pass = false;
                if (rep.witness.empty()) {
                    std::ostringstream w;
                    w << "q(" << pts[i] << ", " << pts[j] << ") = " << q.to_decimal(20);
                    rep.witness = w.str();
                }
            }
        }
    }
    if (worst) rep.max_value = worst->to_decimal(20);
    if (best) rep.min_value = best->to_decimal(20);
    return rep;
}

} // namespace xidet
