#include "xidet/cvpoly.hpp"

#include <deque>
#include <map>
#include <mutex>
#include <stdexcept>

#include "xidet/determinant.hpp"

namespace xidet {

namespace {

std::mutex g_cv_mutex;
std::deque<CvPoly> g_cv_cache; // index k-1; deque keeps references stable
std::deque<Int> g_abs_sum_cache;
std::map<int, std::vector<std::vector<Int>>> g_s_cache;

void extend_cv_cache(int k) {
    if (g_cv_cache.empty()) {
        CvPoly p1;
        p1.k = 1;
        p1.poly = IntPoly({Int(-3), Int(2)});
        g_cv_cache.push_back(p1);
    }
    while (static_cast<int>(g_cv_cache.size()) < k) {
        const IntPoly& p = g_cv_cache.back().poly;
        IntPoly next = p.derivative().shift_up(1) * Int(4) + p * Int(5) - p.shift_up(1) * Int(4);
        CvPoly c;
        c.k = static_cast<int>(g_cv_cache.size()) + 1;
        c.poly = std::move(next);
        if (c.poly.degree() != c.k)
            throw std::logic_error("cv_poly: recurrence degree drifted");
        g_cv_cache.push_back(std::move(c));
    }
}

} // namespace

const CvPoly& cv_poly(int k) {
    if (k < 1) throw std::invalid_argument("cv_poly: k must be >= 1");
    std::lock_guard<std::mutex> lock(g_cv_mutex);
    extend_cv_cache(k);
    return g_cv_cache[static_cast<size_t>(k - 1)];
}

Rat lower_rep_c(int j, int eta) {
    if (eta > j || eta < 0) throw std::invalid_argument("lower_rep_c: need 0 <= eta <= j");
    Int num = (2 * eta + 3);
    if (eta % 2 == 0) num = -num;
    Rat r(num, factorial(eta) * factorial(j - eta));
    r.canonicalize();
    return r;
}

Rat lower_rep_coeff(int j, int k) {
    if (j < 0 || k < 1) throw std::invalid_argument("lower_rep_coeff: need j >= 0, k >= 1");
    Rat acc(0);
    for (int eta = 0; eta <= j; ++eta)
        acc += lower_rep_c(j, eta) * Rat(pow_int(Int(4 * eta + 5), static_cast<unsigned long>(k - 1)));
    acc.canonicalize();
    return acc;
}

Int s_table(int base, int i, int j) {
    if (base != 5 && base != 9) throw std::invalid_argument("s_table: base must be 5 or 9");
    if (j < 0 || i <= 0) return 0;
    if (j == 0) return 1;
    std::lock_guard<std::mutex> lock(g_cv_mutex);
    auto& tab = g_s_cache[base];
    // tab[i][j], grown on demand; row 0 unused
    size_t need_i = static_cast<size_t>(i) + 1;
    size_t need_j = static_cast<size_t>(j) + 1;
    size_t have_i = tab.size();
    size_t have_j = have_i > 1 ? tab[1].size() : 0;
    if (need_i > have_i || need_j > have_j) {
        size_t ni = std::max(need_i, have_i);
        size_t nj = std::max(need_j, have_j);
        std::vector<std::vector<Int>> t(ni, std::vector<Int>(nj, Int(0)));
        for (size_t jj = 0; jj < nj; ++jj) t[1][jj] = pow_int(Int(base), jj);
        for (size_t ii = 2; ii < ni; ++ii) {
            t[ii][0] = 1;
            for (size_t jj = 1; jj < nj; ++jj)
                t[ii][jj] = t[ii - 1][jj] + t[ii][jj - 1] * Int(base + 4 * (static_cast<long>(ii) - 1));
        }
        tab = std::move(t);
    }
    return tab[static_cast<size_t>(i)][static_cast<size_t>(j)];
}

Int upper_rep_coeff(int i, int j) {
    if (i < 0 || j < 0) throw std::invalid_argument("upper_rep_coeff: need i, j >= 0");
    if (i + j < 1) throw std::invalid_argument("upper_rep_coeff: polynomial order i+j must be >= 1");
    Int acc(0);
    if (j >= 1) {
        Int t = Int(-3) * pow_int(Int(-4), static_cast<unsigned long>(i)) * s_table(5, i + 1, j - 1);
        acc += t;
    }
    if (i >= 1) {
        Int t = Int(2) * pow_int(Int(-4), static_cast<unsigned long>(i - 1)) * s_table(9, i, j);
        acc += t;
    }
    return acc;
}

Int partition_count(int i, int j) {
    if (i < 1 || j < 0) throw std::invalid_argument("partition_count: need i >= 1, j >= 0");
    return factorial(i + j - 1) / (factorial(j) * factorial(i - 1));
}

const Int& abs_coeff_sum(int k) {
    const CvPoly& p = cv_poly(k); // fills the poly cache first
    std::lock_guard<std::mutex> lock(g_cv_mutex);
    while (static_cast<int>(g_abs_sum_cache.size()) < k) {
        int kk = static_cast<int>(g_abs_sum_cache.size()) + 1;
        Int s(0);
        for (const Int& c : g_cv_cache[static_cast<size_t>(kk - 1)].poly.coeffs()) s += abs(c);
        g_abs_sum_cache.push_back(std::move(s));
    }
    (void)p;
    return g_abs_sum_cache[static_cast<size_t>(k - 1)];
}

WrPoly wr_poly(int r) {
    if (r < 1) throw std::invalid_argument("wr_poly: r must be >= 1");
    cv_poly(2 * r - 1);
    Mat<IntPoly> m(static_cast<size_t>(r));
    for (int i = 1; i <= r; ++i)
        for (int j = 1; j <= r; ++j) m(static_cast<size_t>(i - 1), static_cast<size_t>(j - 1)) = cv_poly(i + j - 1).poly;
    IntPoly det = det_poly(m);
    WrPoly out;
    out.r = r;
    out.mu_r = mu_of(r);
    out.mu_r_plus_1 = mu_of(r + 1);
    std::vector<Int> g = det.coeffs();
    if (epsilon_sign(r) < 0)
        for (auto& c : g) c = -c;
    out.gamma = std::move(g);
    return out;
}

Lemma61Report check_lemma61(int r) {
    if (r < 2) throw std::invalid_argument("check_lemma61: r must be >= 2");
    WrPoly w = wr_poly(r);
    Lemma61Report rep;
    rep.r = r;
    rep.ok = true;
    for (long j = 0; j < static_cast<long>(w.gamma.size()); ++j) {
        if (w.gamma[static_cast<size_t>(j)] != 0) {
            rep.first_nonzero = j;
            break;
        }
    }
    rep.ok = rep.first_nonzero >= w.mu_r;
    return rep;
}

Conjecture2Report check_conjecture2(int r) {
    if (r < 2) throw std::invalid_argument("check_conjecture2: r must be >= 2");
    WrPoly w = wr_poly(r);
    Conjecture2Report rep;
    rep.r = r;
    rep.degree = static_cast<long>(w.gamma.size()) - 1;
    rep.leading = w.gamma.empty() ? Int(0) : w.gamma.back();
    rep.ok = (rep.degree == w.mu_r_plus_1) && rep.leading > 0;
    return rep;
}

Rat gamma_mu_closed_form(int r) {
    if (r < 2) throw std::invalid_argument("gamma_mu_closed_form: r must be >= 2");
    Rat prod(1);
    for (int j = 0; j < r; ++j) prod *= lower_rep_c(j, j);
    Mat<Rat> v(static_cast<size_t>(r));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            v(static_cast<size_t>(i), static_cast<size_t>(j)) = Rat(pow_int(Int(5 + 4 * i), static_cast<unsigned long>(j)));
    Rat det = det_exact(v);
    Rat out = prod * det * det;
    out.canonicalize();
    return out;
}

Real c_bound(int j, const Real& y) {
    const mpfr_prec_t prec = y.prec();
    Real one = Real::of_long(1, prec);
    Real q = mul_2si(exp(mul_2si(-y, 1)), j + 2); // 2^{j+2} e^{-2y}
    if (!(q < 1)) throw std::invalid_argument("c_bound: 2^{j+2} e^{-2y} must be < 1");
    return one / (one - q);
}

Lemma25Report bounds_wronskian2(const PrecCtx& ctx) {
    const mpfr_prec_t prec = ctx.prec_bits();
    Lemma25Report rep;

    Mat<IntPoly> m(2);
    m(0, 0) = cv_poly(1).poly;
    m(0, 1) = cv_poly(2).poly;
    m(1, 0) = cv_poly(2).poly;
    m(1, 1) = cv_poly(3).poly;
    IntPoly w2 = det_poly(m);
    IntPoly closed = IntPoly({Int(0), Int(-240), Int(192), Int(-64)}); // 16y(-15+12y-4y^2)
    rep.w2_closed_form_ok = (w2 == closed);

    Real pi = Real::pi(prec);
    rep.w2_at_pi = w2.eval_real(pi);

    Real pi4 = pow_si(pi, 4);
    Real e3 = exp(Real::of_long(-3, prec) * pi);
    Real c0 = c_bound(0, pi), c1 = c_bound(1, pi), c2 = c_bound(2, pi);
    rep.t1_bound = mul_2si(c2 * pi4 * e3, 14);
    rep.t2_bound = mul_2si(c0 * pi4 * e3, 10);
    rep.t3_bound = mul_2si(c1 * pi4 * e3, 13);
    rep.t4_bound = mul_2si(c0 * c2 * pi4 * e3 * e3, 18);
    rep.bound_sum = rep.w2_at_pi + rep.t1_bound + rep.t2_bound + rep.t3_bound + rep.t4_bound;

    Real one = Real::of_long(1, prec);
    Real q_alt = mul_2si(exp(mul_2si(-pi, 1)), 2 * 2 + 3);
    rep.t1_bound_alt = mul_2si((one / (one - q_alt)) * pi4 * e3, 14);
    return rep;
}

} // namespace xidet
