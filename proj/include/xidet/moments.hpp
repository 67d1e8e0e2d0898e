#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "xidet/phi.hpp"
#include "xidet/precision.hpp"
#include "xidet/real.hpp"

namespace xidet {

// Power-series coefficients of the xi transform:
//   b_n    = Int_0^inf phi(u) u^{2n} du,     beta_n = b_n / (2n)!.
// Values are cached with provenance (working precision, truncation cutoff);
// recomputation at higher precision replaces lower-precision entries.
struct BetaEntry {
    long n = 0;
    int digits = 0;
    Real beta;
    Real b;
    double truncation_u = 0.0;
    std::string timestamp;
};

class BetaTable {
public:
    static BetaTable& global();

    // Make b_n/beta_n available at ctx.digits for every n in [n_lo, n_hi]
    // (one shared quadrature ladder for the whole contiguous range).
    void ensure_range(long n_lo, long n_hi, const PrecCtx& ctx);

    Real beta(long n, const PrecCtx& ctx);
    Real b(long n, const PrecCtx& ctx);

    std::vector<BetaEntry> snapshot() const;
    // Keeps the higher-precision entry per n.
    void merge(const BetaEntry& e);
    void clear();
    size_t size() const;

    // JSON document with a checksum over the entries; decimal strings
    // round-trip bit-exactly. Throws std::runtime_error on IO problems or a
    // checksum mismatch.
    void save_json(const std::string& path) const;
    void load_json(const std::string& path);
    std::string to_json_string() const;
    void merge_from_json_string(const std::string& doc);

private:
    mutable std::mutex mutex_;
    std::map<long, BetaEntry> entries_;
};

// Shifted peak moments Int_0^inf phi(t) t^{2n-2} (t-tau)^eta dt for
// eta = 0..eta_hi in one pass.
std::vector<Real> moment_integrals(long n, int eta_hi, const Real& tau, const PrecCtx& ctx);
Real moment_integral(long n, int eta, const Real& tau, const PrecCtx& ctx);

// Maximizer of phi(t) t^{2n-2}: bracketed on the leading-term logarithmic
// derivative 9 + (2n-2)/t - 4 pi e^{4t}, then Newton-polished against the
// full kernel.
Real find_peak(long n, const PrecCtx& ctx);

} // namespace xidet
