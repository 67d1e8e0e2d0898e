#include "xidet/verify.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <sstream>

#include "xidet/asympt.hpp"
#include "xidet/cvpoly.hpp"
#include "xidet/minors.hpp"
#include "xidet/moments.hpp"
#include "xidet/signreg.hpp"

namespace xidet {

namespace {

struct Check {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (detail.tellp() > 0) detail << "; ";
            detail << "FAILED: " << what;
        }
    }
    void note(const std::string& s) {
        if (detail.tellp() > 0) detail << "; ";
        detail << s;
    }
};

// Reference table for the Hankel determinants of the recurrence polynomials:
// exact integers through order 4, leading 15 digits above that.
struct WrRefExact {
    int r;
    long power;
    const char* value;
};

const WrRefExact kWrExact[] = {
    {2, 1, "240"},          {2, 2, "-192"},          {2, 3, "64"},
    {3, 3, "-860160"},      {3, 4, "737280"},        {3, 5, "-294912"},
    {3, 6, "65536"},        {4, 6, "190253629440"},  {4, 7, "-169114337280"},
    {4, 8, "72477573120"},  {4, 9, "-19327352832"},  {4, 10, "3221225472"},
};

struct WrRefLeading {
    int r;
    long power;
    const char* mantissa15; // signed, 15 digits
    int exp10;              // value = 0.mantissa * 10^exp10
};

const WrRefLeading kWrLeading[] = {
    {5, 10, "-329167393077068", 19}, {5, 11, "299243084615516", 19},
    {5, 12, "-132996926495785", 19}, {5, 13, "379991218559386", 18},
    {5, 14, "-759982437118771", 17}, {5, 15, "101330991615836", 17},
    {6, 15, "538444964246560", 28},  {6, 16, "-497026120842978", 28},
    {6, 17, "225920964019536", 28},  {6, 18, "-669395448946772", 27},
    {6, 19, "143441881917165", 27},  {6, 20, "-229507011067465", 26},
    {6, 21, "255007790074961", 25},  {7, 21, "-975629606681896", 39},
    {7, 22, "910587632903103", 39},  {7, 23, "-420271215186047", 39},
    {7, 24, "127354913692742", 39},  {7, 25, "-283010919317204", 38},
    {7, 26, "485161575972349", 37},  {7, 27, "-646882101296465", 36},
    {7, 28, "616078191710919", 35},
};

CriterionResult timed(int id, const std::string& name, const std::function<void(Check&)>& body) {
    CriterionResult res;
    res.id = id;
    res.name = name;
    auto t0 = std::chrono::steady_clock::now();
    Check c;
    try {
        body(c);
    } catch (const std::exception& e) {
        c.pass = false;
        c.note(std::string("exception: ") + e.what());
    }
    res.pass = c.pass;
    res.detail = c.detail.str();
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

void criterion1(Check& c, const PrecCtx&) {
    c.require(cv_poly(2).poly == IntPoly({Int(-15), Int(30), Int(-8)}), "p_2 mismatch");
    c.require(cv_poly(3).poly == IntPoly({Int(-75), Int(330), Int(-224), Int(32)}), "p_3 mismatch");
    for (int k = 1; k <= 30; ++k) {
        for (int j = 0; j <= k; ++j) {
            Rat lower = lower_rep_coeff(j, k);
            c.require(lower.get_den() == 1, "lower representation not integral");
            Int rec = cv_poly(k).poly.coeff(static_cast<size_t>(j));
            c.require(lower.get_num() == rec, "lower representation != recurrence");
            c.require(upper_rep_coeff(j, k - j) == rec, "upper representation != recurrence");
            if (!c.pass) return;
        }
    }
}

void criterion2(Check& c, const PrecCtx&) {
    for (int r = 2; r <= 4; ++r) {
        WrPoly w = wr_poly(r);
        for (const auto& ref : kWrExact) {
            if (ref.r != r) continue;
            c.require(w.gamma[static_cast<size_t>(ref.power)] == Int(ref.value),
                      "exact coefficient mismatch at r=" + std::to_string(r));
        }
        for (size_t j = 0; j < w.gamma.size(); ++j) {
            bool listed = false;
            for (const auto& ref : kWrExact)
                if (ref.r == r && ref.power == static_cast<long>(j)) listed = true;
            if (!listed)
                c.require(w.gamma[j] == 0, "unexpected extra coefficient at r=" + std::to_string(r));
        }
    }
    for (int r = 5; r <= 7; ++r) {
        WrPoly w = wr_poly(r);
        for (const auto& ref : kWrLeading) {
            if (ref.r != r) continue;
            Int printed = Int(ref.mantissa15) * pow_int(Int(10), static_cast<unsigned long>(ref.exp10 - 15));
            Int ulp = pow_int(Int(10), static_cast<unsigned long>(ref.exp10 - 15));
            Int diff = abs(w.gamma[static_cast<size_t>(ref.power)] - printed);
            c.require(diff <= ulp, "15-digit coefficient mismatch at r=" + std::to_string(r) +
                                       " power " + std::to_string(ref.power));
        }
    }
}

void criterion3(Check& c, const PrecCtx&) {
    for (int r = 2; r <= 10; ++r) {
        c.require(check_lemma61(r).ok, "low-order zero pattern failed at r=" + std::to_string(r));
        Conjecture2Report rep = check_conjecture2(r);
        c.require(rep.ok, "degree/leading-sign failed at r=" + std::to_string(r));
    }
}

void criterion4(Check& c, const PrecCtx&) {
    for (int r = 2; r <= 6; ++r) {
        WrPoly w = wr_poly(r);
        Rat closed = gamma_mu_closed_form(r);
        Rat expected = Rat(epsilon_sign(r)) * closed;
        c.require(Rat(w.gamma[static_cast<size_t>(w.mu_r)]) == expected,
                  "closed form mismatch at r=" + std::to_string(r));
    }
}

void criterion5(Check& c, const PrecCtx& ctx) {
    Lemma25Report rep = bounds_wronskian2(ctx);
    const mpfr_prec_t prec = ctx.prec_bits();
    c.require(rep.w2_closed_form_ok, "W_2 closed form mismatch");
    auto near = [&](const Real& v, double target, double tol) {
        return cmp(abs(v - Real::of_double(target, prec)), Real::of_double(tol, prec)) <= 0;
    };
    c.require(near(rep.t1_bound, 132.76, 1.0), "T1 bound constant");
    c.require(near(rep.t2_bound, 8.30, 0.3), "T2 bound constant");
    c.require(near(rep.t3_bound, 64.88, 1.0), "T3 bound constant");
    c.require(near(rep.t4_bound, 0.17, 0.02), "T4 bound constant");
    c.require(rep.w2_at_pi < -843L, "W_2(pi) not below -843");
    c.require(rep.bound_sum < -600L, "bound sum not below -600");
    c.note("W2(pi)=" + rep.w2_at_pi.to_decimal(8) + " sum=" + rep.bound_sum.to_decimal(8) +
           " T=[" + rep.t1_bound.to_decimal(5) + ", " + rep.t2_bound.to_decimal(5) + ", " +
           rep.t3_bound.to_decimal(5) + ", " + rep.t4_bound.to_decimal(5) + "]");
}

void criterion6(Check& c, const PrecCtx&) {
    PrecCtx base(100);
    BetaTable& table = BetaTable::global();
    table.ensure_range(0, 31, base);
    for (long n = 0; n <= 30; ++n)
        c.require(table.beta(n, base).definitely_positive(10.0),
                  "beta not positive at n=" + std::to_string(n));

    ScanReport turan = turan_check(30, base);
    c.require(turan.pass, "Turan inequality failed: " + turan.witness);
    c.note("min Turan margin " + turan.min_value);

    for (long n = 0; n <= 30; ++n)
        c.require(minor(MinorSpec{n, 2}, base).value.definitely_positive(10.0),
                  "D(n,2) not positive at n=" + std::to_string(n));
    for (long n = 0; n <= 15; ++n)
        c.require(minor(MinorSpec{n, 3}, base).value.definitely_positive(10.0),
                  "D(n,3) not positive at n=" + std::to_string(n));
    c.require(minor(MinorSpec{1, 3}, base).value.definitely_positive(10.0), "D(1,3)");
    c.require(minor(MinorSpec{1, 4}, base).value.definitely_positive(10.0), "D(1,4)");
    c.require(minor(MinorSpec{2, 4}, base).value.definitely_positive(10.0), "D(2,4)");

    // two-precision consistency on fresh tables
    BetaTable lo, hi;
    PrecCtx ctx_hi(140);
    lo.ensure_range(0, 30, base);
    hi.ensure_range(0, 30, ctx_hi);
    Real tol = pow10(-95, base.prec_bits());
    for (long n = 0; n <= 30; ++n) {
        Real a = lo.beta(n, base);
        Real b = hi.beta(n, ctx_hi);
        c.require(cmp(abs(a - b), tol * abs(b)) <= 0,
                  "two-precision agreement failed at n=" + std::to_string(n));
    }
}

void criterion7(Check& c, const PrecCtx&) {
    PrecCtx ctx(100);
    GridSpec grid;
    grid.u_min = 0.0;
    grid.u_max = 3.0;
    grid.step = 0.01;
    grid.refine_near_failure = true;

    std::vector<SignScanResult> scan = sign_scan(5, 0, grid, ctx);
    for (int p = 1; p <= 4; ++p)
        c.require(scan[static_cast<size_t>(p - 1)].all_positive,
                  "sign pattern failed for p=" + std::to_string(p));
    c.require(!scan[4].all_positive, "no failure witness found for p=5");
    if (!scan[4].all_positive && scan[4].witness_u) {
        std::ostringstream s;
        s << "p=5 failure witness at u=" << *scan[4].witness_u;
        if (scan[4].refined_crossing) s << " (crossing near " << *scan[4].refined_crossing << ")";
        c.note(s.str());
    }

    const int expected_m[] = {0, 0, 0, 1, 1, 1, 2, 4};
    std::ostringstream table_line;
    for (int r = 2; r <= 9; ++r) {
        MrResult mr = find_mr(r, 6, grid, ctx);
        c.require(mr.m == expected_m[r - 2],
                  "m(" + std::to_string(r) + ") = " + std::to_string(mr.m) + ", expected " +
                      std::to_string(expected_m[r - 2]));
        c.require(mr.eta == eta_from_m(mr.m, r), "eta(r) != k_L(m(r)) at r=" + std::to_string(r));
        table_line << "m(" << r << ")=" << mr.m << " eta=" << mr.eta << " ";
    }
    c.note(table_line.str());
}

void criterion8(Check& c, const PrecCtx& ctx) {
    const mpfr_prec_t prec = ctx.prec_bits();
    Real tol = pow10(-20, prec);
    for (double ud : {1.5, 2.0, 2.5, 3.0}) {
        Real u = Real::of_double(ud, prec);
        Real pi = Real::pi(prec);
        Real y = pi * exp(mul_2si(u, 2));
        for (int p = 1; p <= 4; ++p) {
            Real w = wronskian(u, p, 0, ctx);
            WrPoly wr = wr_poly(p);
            Real wp_signed = IntPoly(wr.gamma).eval_real(y); // epsilon_p W_p(y)
            Real wp = epsilon_sign(p) > 0 ? wp_signed : -wp_signed;
            Real norm = pow_si(pi * exp(Real::of_long(5, prec) * u - y), p);
            Real ratio = w / (norm * wp);
            c.require(cmp(abs(ratio - Real::of_long(1, prec)), tol) <= 0,
                      "hand-off ratio off at u=" + std::to_string(ud) + " p=" + std::to_string(p));
        }
    }
}

void criterion9(Check& c, const PrecCtx& ctx) {
    GridSpec grid;
    grid.u_min = 0.0;
    grid.u_max = 5.0;
    grid.step = 0.05;
    grid.refine_near_failure = false;
    ScanReport rep = q_scan(grid, ctx);
    c.require(rep.pass, "q reached a nonnegative value: " + rep.witness);
    c.note("max q = " + rep.max_value);

    std::mt19937 rng(20120815);
    std::uniform_real_distribution<double> dist(0.01, 5.0);
    for (int i = 0; i < 100; ++i) {
        double ud = dist(rng), vd = dist(rng);
        Real u = Real::of_double(ud, ctx.prec_bits());
        Real v = Real::of_double(vd, ctx.prec_bits());
        Real quv = q_eval(u, v, ctx);
        Real qvu = q_eval(v, u, ctx);
        Real gap = abs(quv - qvu);
        Real budget = quv.err() + qvu.err();
        c.require(cmp(gap, budget) <= 0, "symmetry gap above combined error bounds");
        if (!c.pass) return;
    }
}

void criterion10(Check& c, const PrecCtx&) {
    for (int r = 2; r <= 5; ++r) {
        DeltaBarPoly d = delta_bar_poly(r);
        for (long i = 0; i < mu_of(r); ++i)
            c.require(d.delta[static_cast<size_t>(i)] == 0,
                      "delta(" + std::to_string(i) + ") != 0 at r=" + std::to_string(r));
    }
    std::vector<RatPoly> z2 = gamma_ratio_components(2);
    c.require(z2[0] == RatPoly({Rat(1), Rat(3), Rat(2)}), "Z(1,y) != 1+3y+2y^2");
    c.require(z2[1] == RatPoly({Rat(1), Rat(-1)}), "Z(2,y) != 1-y");
}

void criterion11(Check& c, const PrecCtx&) {
    for (int r = 2; r <= 4; ++r) {
        Conjecture3Report rep = check_conjecture3(r);
        std::string msg = "zero pattern failed at r=" + std::to_string(r);
        if (!rep.violations.empty()) msg += " (" + rep.violations.front() + ")";
        c.require(rep.ok, msg);
    }
    CoeffArray a2 = expand_coefficients(2);
    c.require(a2.C.find({0, 0, 1}) == a2.C.end(), "C(0;0,1) != 0 for r=2");
    for (int r = 2; r <= 4; ++r) {
        CoeffArray arr = expand_coefficients(r);
        DeltaBarPoly d = delta_bar_poly(r);
        for (long i = 0; i <= static_cast<long>(r) * (r - 1); ++i) {
            auto it = arr.C.find({i, 0, 1});
            Rat got = it == arr.C.end() ? Rat(0) : it->second;
            c.require(got == d.delta[static_cast<size_t>(i)],
                      "C(i;0,1) != delta(i) at r=" + std::to_string(r) + " i=" + std::to_string(i));
        }
    }
}

void criterion12(Check& c, const PrecCtx& ctx) {
    Real tol = pow10(-10, ctx.prec_bits());
    for (long n : {20L, 50L}) {
        DominanceReport rep = dominance_diagnostic(n, ctx);
        c.require(cmp(rep.rel_error, tol) < 0,
                  "reconstruction error too large at n=" + std::to_string(n) + ": " +
                      rep.rel_error.to_decimal(5));
        c.require(rep.direct.definitely_positive(10.0), "scaled determinant not positive");
    }
    DominanceReport r50 = dominance_diagnostic(50, ctx);
    DominanceReport r500 = dominance_diagnostic(500, ctx);
    c.require(cmp(r500.ratio_10_02, r50.ratio_10_02) > 0,
              "(1,0)/(0,2) ratio did not grow from n=50 to n=500");
    c.note("ratio(50)=" + r50.ratio_10_02.to_decimal(6) +
           " ratio(500)=" + r500.ratio_10_02.to_decimal(6));
}

} // namespace

std::vector<CriterionResult> run_acceptance(
    const PrecCtx& ctx, const std::vector<int>& which,
    const std::function<void(const CriterionResult&)>& on_done) {
    struct Entry {
        int id;
        const char* name;
        std::function<void(Check&, const PrecCtx&)> fn;
    };
    const Entry entries[] = {
        {1, "recurrence polynomials: exact values and both representations", criterion1},
        {2, "Hankel polynomial tables, exact r<=4 and 15 digits r=5..7", criterion2},
        {3, "low-order zero pattern and degree/leading sign, r=2..10", criterion3},
        {4, "lowest surviving coefficient closed form, r=2..6", criterion4},
        {5, "order-2 bound suite", criterion5},
        {6, "coefficient positivity, Turan, minors at 100 digits", criterion6},
        {7, "sign-regularity scans and m(r) table, r=2..9", criterion7},
        {8, "large-u Wronskian hand-off", criterion8},
        {9, "q negativity grid and symmetry", criterion9},
        {10, "gamma-ratio polynomial zero pattern, r=2..5", criterion10},
        {11, "expansion coefficient zero pattern, r=2..4", criterion11},
        {12, "order-2 moment-expansion identity", criterion12},
    };
    std::vector<CriterionResult> out;
    for (const Entry& e : entries) {
        if (!which.empty() && std::find(which.begin(), which.end(), e.id) == which.end()) continue;
        CriterionResult res =
            timed(e.id, e.name, [&](Check& c) { e.fn(c, ctx); });
        if (on_done) on_done(res);
        out.push_back(std::move(res));
    }
    return out;
}

} // namespace xidet
