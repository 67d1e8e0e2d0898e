#include "xidet/moments.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "xidet/quad.hpp"

namespace xidet {

namespace {

constexpr double kLn10 = 2.302585092994046;

// log10 of the kernel majorant 4 pi^2 e^{9t} exp(-pi e^{4t}) (valid for the
// scales used here: the factor 2 over the first series term covers the tail).
double log10_phi_majorant(double t) {
    return 1.5963597215255 + (9.0 * t - 3.141592653589793 * std::exp(4.0 * t)) / kLn10;
}

std::string now_iso8601() {
    auto now = std::chrono::system_clock::now();
    std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&tt, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// Upper cutoff: smallest t past every integrand's peak where each
// phi(t) t^{2n} (n_lo..n_hi) has dropped digits+guard+5 decades below its own
// maximum. Monotone decay past that point makes the remaining tail another
// factor below the quadrature tolerance.
double moment_cutoff(long n_lo, long n_hi, int decades, int extra_log_pow = 0) {
    double worst = 0.0;
    for (long n = n_lo; n <= n_hi; ++n) {
        auto l = [&](double t) {
            return log10_phi_majorant(t) + 2.0 * static_cast<double>(n) * std::log10(t) +
                   extra_log_pow * std::log10(1.0 + t);
        };
        double peak = -1e300;
        double t_peak = 0.015625;
        for (double t = 0.015625; t <= 12.0; t += 0.015625) {
            double v = l(t);
            if (v > peak) {
                peak = v;
                t_peak = t;
            }
        }
        double u = 0.0;
        for (double t = t_peak; t <= 24.0; t += 0.015625) {
            if (l(t) <= peak - decades) {
                u = t;
                break;
            }
        }
        if (u == 0.0) throw escalation_error("moment_cutoff: no truncation point below t=24");
        worst = std::max(worst, u);
    }
    return worst;
}

} // namespace

BetaTable& BetaTable::global() {
    static BetaTable table;
    return table;
}

void BetaTable::ensure_range(long n_lo, long n_hi, const PrecCtx& ctx) {
    if (n_lo < 0 || n_hi < n_lo) throw std::invalid_argument("BetaTable: bad range");
    {
        std::lock_guard<std::mutex> lock(mutex_);
        bool all = true;
        for (long n = n_lo; n <= n_hi && all; ++n) {
            auto it = entries_.find(n);
            if (it == entries_.end() || it->second.digits < ctx.digits) all = false;
        }
        if (all) return;
    }

    const mpfr_prec_t prec = ctx.prec_bits();
    const int dg = ctx.digits + ctx.guard;
    const double cutoff = moment_cutoff(n_lo, n_hi, dg + 5);
    const size_t count = static_cast<size_t>(n_hi - n_lo + 1);

    QuadSpec spec;
    spec.lower = Real(prec);
    spec.upper = Real::of_double(cutoff, prec);
    spec.rel_tol_exp10 = -dg + 5;
    spec.abs_tol = Real(prec);
    spec.max_level = 14;

    PhiSeriesParams params(ctx);
    auto eval_terms = [&](const Real& t, std::vector<Real>& terms) {
        Real fx = phi_value_uncached(t, params);
        Real t2 = t * t;
        Real p = n_lo == 0 ? Real::of_long(1, prec) : pow_si(t, 2 * n_lo);
        terms[0] = fx * p;
        for (size_t i = 1; i < count; ++i) {
            p = p * t2;
            terms[i] = fx * p;
        }
    };
    std::vector<Real> vals = integrate_many(eval_terms, count, spec, ctx);

    std::string stamp = now_iso8601();
    for (size_t i = 0; i < count; ++i) {
        long n = n_lo + static_cast<long>(i);
        BetaEntry e;
        e.n = n;
        e.digits = ctx.digits;
        e.b = vals[i];
        e.b.add_err_abs(abs(vals[i]) * pow10(-dg + 6, Real::kErrPrec * 2)); // truncated tail
        e.beta = e.b / Real::of_int(factorial(2 * n), prec);
        e.truncation_u = cutoff;
        e.timestamp = stamp;
        merge(e);
    }
}

Real BetaTable::beta(long n, const PrecCtx& ctx) {
    ensure_range(n, n, ctx);
    std::lock_guard<std::mutex> lock(mutex_);
    return entries_.at(n).beta;
}

Real BetaTable::b(long n, const PrecCtx& ctx) {
    ensure_range(n, n, ctx);
    std::lock_guard<std::mutex> lock(mutex_);
    return entries_.at(n).b;
}

std::vector<BetaEntry> BetaTable::snapshot() const {
    std::lock_guard<std::mutex> lock(mutex_);
    std::vector<BetaEntry> out;
    out.reserve(entries_.size());
    for (const auto& [n, e] : entries_) out.push_back(e);
    return out;
}

void BetaTable::merge(const BetaEntry& e) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = entries_.find(e.n);
    if (it == entries_.end() || it->second.digits < e.digits) entries_[e.n] = e;
}

void BetaTable::clear() {
    std::lock_guard<std::mutex> lock(mutex_);
    entries_.clear();
}

size_t BetaTable::size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return entries_.size();
}

namespace {

nlohmann::ordered_json entries_json(const std::vector<BetaEntry>& entries) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const BetaEntry& e : entries) {
        nlohmann::ordered_json j;
        j["n"] = e.n;
        j["digits"] = e.digits;
        j["value_decimal_string"] = e.beta.to_decimal_full();
        j["b_n_decimal_string"] = e.b.to_decimal_full();
        j["truncation_U"] = e.truncation_u;
        j["timestamp"] = e.timestamp;
        arr.push_back(std::move(j));
    }
    return arr;
}

} // namespace

std::string BetaTable::to_json_string() const {
    nlohmann::ordered_json arr = entries_json(snapshot());
    nlohmann::ordered_json doc;
    doc["format"] = "beta-table-v1";
    doc["checksum"] = hex64(fnv1a64(arr.dump()));
    doc["entries"] = std::move(arr);
    return doc.dump(2);
}

void BetaTable::merge_from_json_string(const std::string& docstr) {
    nlohmann::json doc = nlohmann::json::parse(docstr);
    if (doc.value("format", "") != "beta-table-v1")
        throw std::runtime_error("BetaTable: unrecognized cache format");
    nlohmann::json arr = doc.at("entries");
    // checksum over the canonical re-serialization
    std::vector<BetaEntry> parsed;
    for (const auto& j : arr) {
        BetaEntry e;
        e.n = j.at("n").get<long>();
        e.digits = j.at("digits").get<int>();
        PrecCtx c(e.digits);
        e.beta = Real::of_str(j.at("value_decimal_string").get<std::string>(), c.prec_bits());
        e.b = Real::of_str(j.at("b_n_decimal_string").get<std::string>(), c.prec_bits());
        e.truncation_u = j.at("truncation_U").get<double>();
        e.timestamp = j.at("timestamp").get<std::string>();
        parsed.push_back(std::move(e));
    }
    std::string expect = hex64(fnv1a64(entries_json(parsed).dump()));
    if (doc.at("checksum").get<std::string>() != expect)
        throw std::runtime_error("BetaTable: cache checksum mismatch");
    for (const BetaEntry& e : parsed) merge(e);
}

void BetaTable::save_json(const std::string& path) const {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("BetaTable: cannot write " + tmp);
        out << to_json_string() << '\n';
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("BetaTable: cannot rename into " + path);
}

void BetaTable::load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("BetaTable: cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    merge_from_json_string(ss.str());
}

std::vector<Real> moment_integrals(long n, int eta_hi, const Real& tau, const PrecCtx& ctx) {
    if (n < 2) throw std::invalid_argument("moment_integrals: n must be >= 2");
    if (eta_hi < 0) throw std::invalid_argument("moment_integrals: eta_hi must be >= 0");
    const mpfr_prec_t prec = ctx.prec_bits();
    const int dg = ctx.digits + ctx.guard;
    const double cutoff = moment_cutoff(n - 1, n - 1, dg + 5, eta_hi);
    const size_t count = static_cast<size_t>(eta_hi) + 1;

    QuadSpec spec;
    spec.lower = Real(prec);
    spec.upper = Real::of_double(cutoff, prec);
    spec.rel_tol_exp10 = -dg + 5;
    spec.abs_tol = Real(prec);
    spec.max_level = 14;

    PhiSeriesParams params(ctx);
    Real tt = tau.with_prec(prec);
    auto eval_terms = [&](const Real& t, std::vector<Real>& terms) {
        Real fx = phi_value_uncached(t, params) * pow_si(t, 2 * n - 2);
        Real shift = t - tt;
        terms[0] = fx;
        for (size_t i = 1; i < count; ++i) {
            fx = fx * shift;
            terms[i] = fx;
        }
    };
    return integrate_many(eval_terms, count, spec, ctx);
}

Real moment_integral(long n, int eta, const Real& tau, const PrecCtx& ctx) {
    return moment_integrals(n, eta, tau, ctx)[static_cast<size_t>(eta)];
}

Real find_peak(long n, const PrecCtx& ctx) {
    if (n < 2) throw std::invalid_argument("find_peak: n must be >= 2");
    // double-precision bracket on 9 + (2n-2)/t - 4 pi e^{4t}
    auto lead = [&](double t) {
        return 9.0 + static_cast<double>(2 * n - 2) / t - 4.0 * 3.141592653589793 * std::exp(4.0 * t);
    };
    double lo = 1e-6, hi = 16.0;
    if (lead(lo) <= 0.0 || lead(hi) >= 0.0) throw escalation_error("find_peak: bracket failure");
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (lead(mid) > 0.0 ? lo : hi) = mid;
    }

    // Newton on h(t) = phi'(t)/phi(t) + (2n-2)/t with the full kernel.
    const mpfr_prec_t prec = ctx.prec_bits();
    PhiSeriesParams params(ctx);
    Real t = Real::of_double(0.5 * (lo + hi), prec);
    Real w = Real::of_long(2 * n - 2, prec);
    for (int it = 0; it < 64; ++it) {
        std::vector<Real> d = phi_derivs_upto(t, 2, params);
        Real ratio = d[1] / d[0];
        Real h = ratio + w / t;
        Real hp = d[2] / d[0] - ratio * ratio - w / (t * t);
        Real step = h / hp;
        t = t - step;
        if (step.is_zero() || step.value_log10() < t.value_log10() - (ctx.digits + 5)) break;
        if (it == 63) throw escalation_error("find_peak: Newton refinement did not settle");
    }
    return t;
}

} // namespace xidet
