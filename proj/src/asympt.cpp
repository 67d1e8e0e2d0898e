#include "xidet/asympt.hpp"

#include <algorithm>
#include <sstream>

#include "xidet/moments.hpp"

namespace xidet {

namespace {

void partitions_rec(long remaining, int parts_left, int part_cap, std::vector<int>& acc,
                    std::vector<std::vector<int>>& out) {
    if (parts_left == 0) {
        if (remaining == 0) out.push_back(acc);
        return;
    }
    int hi = static_cast<int>(std::min<long>(part_cap, remaining));
    int cap = acc.empty() ? hi : std::min(hi, acc.back());
    for (int next = cap; next >= 0; --next) {
        if (static_cast<long>(next) * parts_left < remaining) break;
        acc.push_back(next);
        partitions_rec(remaining - next, parts_left - 1, part_cap, acc, out);
        acc.pop_back();
    }
}

} // namespace

std::vector<PermComponent> components(int r) {
    if (r < 2 || r > 4) throw std::invalid_argument("components: r must be in 2..4");
    std::vector<Permutation> perms = all_permutations(r);
    std::vector<PermComponent> out;
    out.reserve(perms.size());
    for (size_t k = 0; k < perms.size(); ++k) {
        PermComponent c;
        c.k = static_cast<int>(k) + 1;
        c.q = perms[k].q;
        c.sign = perms[k].sign;
        long esum = 0;
        for (int i = 1; i <= r; ++i) {
            int nu = (perms[k].q[static_cast<size_t>(i - 1)] + 1) - i;
            c.nu.push_back(nu);
            long e = 2L * (nu + r - 1);
            c.exponents.push_back(e);
            esum += e;
        }
        if (esum != 2L * r * (r - 1))
            throw std::logic_error("components: exponent bookkeeping failed");
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<std::vector<SymMonomial>> monomial_basis(int r) {
    long m_hi = 2L * r * (r - 1);
    std::vector<std::vector<SymMonomial>> out(static_cast<size_t>(m_hi) + 1);
    for (long m = 0; m <= m_hi; ++m) {
        std::vector<std::vector<int>> parts;
        std::vector<int> acc;
        partitions_rec(m, r, 4 * (r - 1), acc, parts);
        // descending lexicographic order of the padded partitions
        std::sort(parts.begin(), parts.end(), std::greater<>());
        int j = 1;
        for (auto& p : parts) {
            SymMonomial s;
            s.m = m;
            s.j = j++;
            s.lambda = std::move(p);
            out[static_cast<size_t>(m)].push_back(std::move(s));
        }
    }
    return out;
}

long np_count(int r, long m) {
    auto basis = monomial_basis(r);
    if (m < 0 || m >= static_cast<long>(basis.size()))
        throw std::invalid_argument("np_count: m out of range");
    return static_cast<long>(basis[static_cast<size_t>(m)].size());
}

CoeffArray expand_coefficients(int r) {
    CoeffArray arr;
    arr.r = r;
    arr.comps = components(r);
    arr.monomials = monomial_basis(r);

    std::vector<Permutation> perms = all_permutations(r);

    // T(m,j,k): the symmetrized product of (1+x_i)^{e_i} expanded over the
    // monomial basis. The coefficient of one representative monomial of type
    // lambda is (1/r!) sum_sigma prod_i binom(e_i, lambda_{sigma(i)}); the
    // normalization multiplies back the orbit size r!/prod(mult!).
    for (const PermComponent& comp : arr.comps) {
        for (const auto& level : arr.monomials) {
            for (const SymMonomial& mono : level) {
                Int sum(0);
                for (const Permutation& sigma : perms) {
                    Int prod(1);
                    for (int i = 0; i < r; ++i) {
                        int li = mono.lambda[static_cast<size_t>(sigma.q[static_cast<size_t>(i)])];
                        prod *= binomial(comp.exponents[static_cast<size_t>(i)], li);
                        if (prod == 0) break;
                    }
                    sum += prod;
                }
                Int mult_prod(1);
                int run = 1;
                for (size_t i = 1; i <= mono.lambda.size(); ++i) {
                    if (i < mono.lambda.size() && mono.lambda[i] == mono.lambda[i - 1]) {
                        ++run;
                    } else {
                        mult_prod *= factorial(run);
                        run = 1;
                    }
                }
                Rat t(sum, mult_prod);
                t.canonicalize();
                if (t != 0) arr.T[{mono.m, mono.j, comp.k}] = t;
            }
        }
    }

    // z(i,k) from the gamma-ratio components
    std::vector<RatPoly> zc = gamma_ratio_components(r);
    arr.z.resize(zc.size());
    for (size_t k = 0; k < zc.size(); ++k) {
        arr.z[k].assign(static_cast<size_t>(r * (r - 1) + 1), Rat(0));
        for (size_t i = 0; i < arr.z[k].size(); ++i) arr.z[k][i] = zc[k].coeff(i);
    }

    // C(i;m,j) = sum_k sign(k) z(i,k) T(m,j,k)
    for (long i = 0; i <= static_cast<long>(r) * (r - 1); ++i) {
        for (const auto& level : arr.monomials) {
            for (const SymMonomial& mono : level) {
                Rat acc(0);
                for (const PermComponent& comp : arr.comps) {
                    auto it = arr.T.find({mono.m, mono.j, comp.k});
                    if (it == arr.T.end()) continue;
                    Rat term = arr.z[static_cast<size_t>(comp.k - 1)][static_cast<size_t>(i)] *
                               it->second;
                    acc += comp.sign > 0 ? term : -term;
                }
                acc.canonicalize();
                if (acc != 0) arr.C[{i, mono.m, mono.j}] = acc;
            }
        }
    }
    return arr;
}

Conjecture3Report check_conjecture3(int r) {
    CoeffArray arr = expand_coefficients(r);
    Conjecture3Report rep;
    rep.r = r;
    rep.ok = true;
    long rr = static_cast<long>(r) * (r - 1);
    for (long i = 0; i <= rr / 2 - 1; ++i) {
        for (long m = 0; m <= rr - 2 * i - 2; ++m) {
            for (const SymMonomial& mono : arr.monomials[static_cast<size_t>(m)]) {
                ++rep.zeros_required;
                auto it = arr.C.find({i, m, mono.j});
                if (it != arr.C.end() && it->second != 0) {
                    rep.ok = false;
                    std::ostringstream v;
                    v << "C(" << i << ";" << m << "," << mono.j << ") = " << it->second.get_str();
                    rep.violations.push_back(v.str());
                }
            }
        }
    }
    return rep;
}

DominanceReport dominance_diagnostic(long n, const PrecCtx& ctx) {
    if (n < 10) throw std::invalid_argument("dominance_diagnostic: n must be >= 10");
    const int r = 2;
    const mpfr_prec_t prec = ctx.prec_bits();
    CoeffArray arr = expand_coefficients(r);

    DominanceReport rep;
    rep.n = n;
    rep.tau = find_peak(n, ctx);

    // shifted peak moments J_eta, eta = 0..2r(r-1)
    long eta_hi = 2L * r * (r - 1);
    std::vector<Real> J = moment_integrals(n, static_cast<int>(eta_hi), rep.tau, ctx);

    // I(m,j) = tau^{2r(r-1)-m} * prod_parts J_{lambda_part} (orbit-averaged
    // products collapse to a single product for each partition type)
    auto I_of = [&](const SymMonomial& mono) {
        Real prod = Real::of_long(1, prec);
        for (int part : mono.lambda) prod = prod * J[static_cast<size_t>(part)];
        return pow_si(rep.tau, 2 * r * (r - 1) - static_cast<long>(mono.m)) * prod;
    };

    Real y = Real::of_rat(Rat(1, 2 * n), prec);
    Real recon(prec);
    Real term10(prec), term02(prec);
    for (const auto& [key, c] : arr.C) {
        auto [i, m, j] = key;
        const SymMonomial& mono = arr.monomials[static_cast<size_t>(m)][static_cast<size_t>(j - 1)];
        Real term = Real::of_rat(c, prec) * pow_si(y, i) * I_of(mono);
        recon += term;
        if (i == 1 && m == 0) term10 += term;
        if (i == 0 && m == 2) term02 += term;
    }
    rep.reconstructed = recon;
    rep.term_10 = term10;
    rep.term_02 = term02;
    rep.ratio_10_02 = abs(term10) / abs(term02);

    // direct route: sum_k sign(k) Z_k(y) prod_i b_{n + nu_i}
    BetaTable& table = BetaTable::global();
    table.ensure_range(n - r + 1, n + r - 1, ctx);
    std::vector<RatPoly> zc = gamma_ratio_components(r);
    Real direct(prec);
    for (const PermComponent& comp : arr.comps) {
        Real prod = zc[static_cast<size_t>(comp.k - 1)].eval_real(y);
        for (int nu : comp.nu) prod = prod * table.b(n + nu, ctx);
        direct += comp.sign > 0 ? prod : -prod;
    }
    rep.direct = direct;
    rep.rel_error = abs(recon - direct) / abs(direct);
    return rep;
}

} // namespace xidet
