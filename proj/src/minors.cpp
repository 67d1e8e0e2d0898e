#include "xidet/minors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace xidet {

namespace {

constexpr int kMaxEscalations = 7;

Mat<Real> minor_matrix(const MinorSpec& spec, const PrecCtx& ctx) {
    BetaTable& table = BetaTable::global();
    long hi = spec.n + spec.r - 1;
    table.ensure_range(std::max(0L, spec.n - spec.r + 1), hi, ctx);
    Mat<Real> m(static_cast<size_t>(spec.r));
    for (int i = 1; i <= spec.r; ++i) {
        for (int j = 1; j <= spec.r; ++j) {
            long idx = spec.n + j - i;
            m(static_cast<size_t>(i - 1), static_cast<size_t>(j - 1)) =
                idx >= 0 ? table.beta(idx, ctx) : Real(ctx.prec_bits());
        }
    }
    return m;
}

Mat<Real> minor_matrix_bn(const MinorSpec& spec, const PrecCtx& ctx) {
    BetaTable& table = BetaTable::global();
    table.ensure_range(spec.n - spec.r + 1, spec.n + spec.r - 1, ctx);
    const mpfr_prec_t prec = ctx.prec_bits();
    Mat<Real> m(static_cast<size_t>(spec.r));
    for (int i = 1; i <= spec.r; ++i) {
        for (int j = 1; j <= spec.r; ++j) {
            long idx = spec.n + j - i;
            m(static_cast<size_t>(i - 1), static_cast<size_t>(j - 1)) =
                table.b(idx, ctx) / Real::of_int(factorial(2 * idx), prec);
        }
    }
    return m;
}

// Escalation ladder shared by both assembly routes.
template <typename MatrixBuilder>
MinorResult escalated_det(const MatrixBuilder& build, const PrecCtx& ctx, const char* what) {
    std::optional<Real> prev;
    MinorResult out;
    PrecCtx level = ctx;
    for (int attempt = 0; attempt <= kMaxEscalations; ++attempt) {
        std::optional<Real> value;
        try {
            value = det_float(build(level), level);
        } catch (const precision_exhausted&) {
            value.reset();
        }
        if (value && value->digits_above_err() >= 1.0) {
            if (prev) {
                Real diff = abs(*value - *prev);
                if (diff.is_zero() || diff.value_log10() <= value->value_log10() - 10.0) {
                    out.value = *value;
                    out.digits_used = level.digits;
                    out.escalations = std::max(0, attempt - 1);
                    return out;
                }
            }
            prev = value;
        } else {
            prev.reset();
        }
        level = level.escalated();
    }
    std::ostringstream msg;
    msg << what << ": escalation ceiling reached at " << level.digits << " digits";
    throw escalation_error(msg.str());
}

} // namespace

MinorResult minor(const MinorSpec& spec, const PrecCtx& ctx) {
    if (spec.r < 1 || spec.n < 0) throw std::invalid_argument("minor: need r >= 1, n >= 0");
    return escalated_det([&spec](const PrecCtx& c) { return minor_matrix(spec, c); }, ctx, "minor");
}

MinorResult minor_via_bn(const MinorSpec& spec, const PrecCtx& ctx) {
    if (spec.r < 1) throw std::invalid_argument("minor_via_bn: need r >= 1");
    if (spec.n <= spec.r)
        throw std::invalid_argument("minor_via_bn: defined for n > r only");
    return escalated_det([&spec](const PrecCtx& c) { return minor_matrix_bn(spec, c); }, ctx,
                         "minor_via_bn");
}

ScanReport turan_check(long n_max, const PrecCtx& ctx) {
    if (n_max < 1) throw std::invalid_argument("turan_check: n_max must be >= 1");
    BetaTable& table = BetaTable::global();
    table.ensure_range(0, n_max + 1, ctx);
    const mpfr_prec_t prec = ctx.prec_bits();

    ScanReport rep;
    rep.scan = "turan";
    rep.grid = "n = 1.." + std::to_string(n_max);
    rep.pass = true;
    std::optional<Real> min_margin;
    for (long n = 1; n <= n_max; ++n) {
        Real lhs = pow_si(table.beta(n, ctx), 2);
        Real rhs = (table.beta(n - 1, ctx) * table.beta(n + 1, ctx) * (n + 1)) / Real::of_long(n, prec);
        Real margin = (lhs - rhs) / lhs;
        if (!(lhs - rhs).definitely_positive(10.0)) {
            rep.pass = false;
            if (rep.witness.empty()) rep.witness = "n=" + std::to_string(n);
        }
        if (!min_margin || cmp(margin, *min_margin) < 0) min_margin = margin;
    }
    if (min_margin) rep.min_value = min_margin->to_decimal(20);
    rep.notes.push_back("margin = (beta_n^2 - ((n+1)/n) beta_{n-1} beta_{n+1}) / beta_n^2");
    return rep;
}

const std::map<int, int> kDefaultMrTable = {{1, 0}, {2, 0}, {3, 0}, {4, 0}, {5, 1},
                                            {6, 1}, {7, 1}, {8, 2}, {9, 4}};

long eta_from_m(int m, int r) {
    long n_l = (m % 2 == 0) ? m / 2 : (m + 1) / 2;
    return n_l + r - 1;
}

ScanReport exceptional_scan(int r_max, const PrecCtx& ctx, const std::map<int, int>& mr_table) {
    if (r_max < 2 || r_max > 6)
        throw std::invalid_argument("exceptional_scan: r_max must be in 2..6");
    ScanReport rep;
    rep.scan = "exceptional";
    rep.pass = true;
    std::ostringstream grid;
    std::optional<Real> min_scaled;
    for (int r = 2; r <= r_max; ++r) {
        auto it = mr_table.find(r);
        if (it == mr_table.end())
            throw std::invalid_argument("exceptional_scan: no m(r) value for r=" + std::to_string(r));
        long eta = eta_from_m(it->second, r);
        grid << "r=" << r << ":n<=" << eta << " ";
        for (long n = 0; n <= eta; ++n) {
            MinorResult d = minor(MinorSpec{n, r}, ctx);
            rep.escalations += d.escalations;
            if (!d.value.definitely_positive(10.0)) {
                rep.pass = false;
                if (rep.witness.empty())
                    rep.witness = "D(" + std::to_string(n) + "," + std::to_string(r) + ") = " +
                                  d.value.to_decimal(20);
            }
            if (!min_scaled || cmp(d.value, *min_scaled) < 0) min_scaled = d.value;
        }
    }
    rep.grid = grid.str();
    if (min_scaled) rep.min_value = min_scaled->to_decimal(20);
    return rep;
}

std::vector<RatPoly> gamma_ratio_components(int r) {
    if (r < 2) throw std::invalid_argument("gamma_ratio_components: r must be >= 2");
    std::vector<Permutation> perms = all_permutations(r);
    std::vector<RatPoly> out;
    out.reserve(perms.size());
    for (const Permutation& p : perms) {
        // factor pool from the prefactor: (1 + a y) for a = 2i-1, 2i with
        // multiplicity r-i
        std::map<long, long> pool;
        for (int i = 1; i <= r - 1; ++i) {
            pool[2 * i] += r - i;
            pool[2 * i - 1] += r - i;
        }
        for (int i = 1; i <= r; ++i) {
            long k = (p.q[static_cast<size_t>(i - 1)] + 1) - i;
            if (k > 0) {
                for (long a = 1; a <= 2 * k; ++a) {
                    auto it = pool.find(a);
                    if (it == pool.end() || it->second == 0)
                        throw std::logic_error("gamma_ratio_components: prefactor failed to cancel");
                    --it->second;
                }
            } else if (k < 0) {
                for (long a = 0; a < -2 * k; ++a) pool[-a] += 1;
            }
        }
        long total = 0;
        for (const auto& [a, mult] : pool) total += mult;
        if (total != static_cast<long>(r) * (r - 1))
            throw std::logic_error("gamma_ratio_components: factor count drifted");
        RatPoly z = RatPoly::constant(Rat(1));
        for (const auto& [a, mult] : pool) {
            if (mult == 0) continue;
            RatPoly lin({Rat(1), Rat(a)}); // 1 + a y  (a = 0 contributes 1)
            for (long m = 0; m < mult; ++m) z = z * lin;
        }
        out.push_back(std::move(z));
    }
    return out;
}

DeltaBarPoly delta_bar_poly(int r) {
    std::vector<Permutation> perms = all_permutations(r);
    std::vector<RatPoly> comps = gamma_ratio_components(r);
    RatPoly acc;
    for (size_t k = 0; k < perms.size(); ++k) {
        acc = perms[k].sign > 0 ? acc + comps[k] : acc - comps[k];
    }
    if (acc.degree() > static_cast<long>(r) * (r - 1))
        throw std::logic_error("delta_bar_poly: degree exceeded r(r-1)");
    DeltaBarPoly out;
    out.r = r;
    out.delta.assign(static_cast<size_t>(r * (r - 1) + 1), Rat(0));
    for (size_t i = 0; i < out.delta.size(); ++i) out.delta[i] = acc.coeff(i);
    return out;
}

Rat delta_bar_value(int r, long n) {
    if (n <= r) throw std::invalid_argument("delta_bar_value: needs n > r");
    DeltaBarPoly p = delta_bar_poly(r);
    Rat y(1, 2 * n);
    y.canonicalize();
    Rat acc(0);
    for (size_t i = p.delta.size(); i-- > 0;) acc = acc * y + p.delta[i];
    return acc;
}

Real xi_eval(const Real& t, int n_terms, const PrecCtx& ctx) {
    if (n_terms < 1) throw std::invalid_argument("xi_eval: n_terms must be >= 1");
    BetaTable& table = BetaTable::global();
    table.ensure_range(0, n_terms, ctx);
    const mpfr_prec_t prec = ctx.prec_bits();
    Real z = -(t.with_prec(prec) * t.with_prec(prec));
    Real sum(prec);
    Real zp = Real::of_long(1, prec);
    for (int k = 0; k < n_terms; ++k) {
        sum += table.beta(k, ctx) * zp;
        zp = zp * z;
    }
    Real tail = abs(table.beta(n_terms, ctx) * zp);
    sum.add_err_abs(tail);
    if (!sum.is_zero() && tail.value_log10() > sum.value_log10() - ctx.digits / 2.0)
        throw escalation_error("xi_eval: truncation tail not small at this argument");
    return sum;
}

} // namespace xidet
