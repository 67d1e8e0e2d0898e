#pragma once

#include <functional>
#include <string>
#include <vector>

#include "xidet/precision.hpp"

namespace xidet {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double seconds = 0.0;
    std::string detail;
};

// Full verification battery. `which` empty means all; on_done fires after
// each criterion (progress reporting).
std::vector<CriterionResult> run_acceptance(
    const PrecCtx& ctx, const std::vector<int>& which = {},
    const std::function<void(const CriterionResult&)>& on_done = {});

} // namespace xidet
