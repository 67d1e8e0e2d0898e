#pragma once

#include <optional>
#include <vector>

#include "xidet/minors.hpp"
#include "xidet/phi.hpp"
#include "xidet/precision.hpp"

namespace xidet {

// Finite evaluation grid. Scans over it are evidence, not proofs; every
// report carries that caveat.
struct GridSpec {
    double u_min = 0.0;
    double u_max = 3.0;
    double step = 0.01;
    bool refine_near_failure = true;

    std::vector<double> points() const;
    std::string describe() const;
};

struct SignScanResult {
    int p = 0;
    int m = 0;
    bool all_positive = false;
    std::optional<double> witness_u;
    std::string witness_value;             // epsilon_p w_p at the witness
    std::optional<double> refined_crossing; // bisected sign-change location
    std::string min_scaled_value;          // min of the first-term-normalized value
};

// Hankel determinant of derivatives of Psi_m (m = 0 gives the kernel itself):
// w_p(u) = det | psi^(i+j-2)(u) |, evaluated with cancellation-aware
// precision escalation. The starting precision anticipates the known
// cancellation scale mu(p)*log10(pi e^{4u}).
Real wronskian(const Real& u, int p, int m, const PrecCtx& ctx);

// epsilon_p * w_p(u) > 0 over the grid for each p <= p_max.
std::vector<SignScanResult> sign_scan(int p_max, int m, const GridSpec& grid, const PrecCtx& ctx);

struct MrResult {
    int r = 0;
    int m = -1;
    long eta = -1;
    std::optional<double> last_failure_u; // where m-1 still failed
};

// Smallest m <= m_cap whose order-<=r sign pattern holds across the grid.
MrResult find_mr(int r, int m_cap, const GridSpec& grid, const PrecCtx& ctx);

// 3x3 bordered determinant in f = phi', f', f'' at u, v, u+v with a zero
// corner; its negativity on (0,inf)^2 is what the exceptional minor needs.
Real q_eval(const Real& u, const Real& v, const PrecCtx& ctx);

ScanReport q_scan(const GridSpec& grid, const PrecCtx& ctx);

} // namespace xidet
