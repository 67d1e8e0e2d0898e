#pragma once

#include <stdexcept>
#include <string>

namespace xidet {

// Raised when a floating computation has cancelled away so many digits that
// the result is indistinguishable from zero at the current working precision.
// Callers are expected to escalate precision and retry.
class precision_exhausted : public std::runtime_error {
public:
    explicit precision_exhausted(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an adaptive procedure (quadrature refinement, precision
// escalation ladder, peak bracketing) hits its configured ceiling.
class escalation_error : public std::runtime_error {
public:
    explicit escalation_error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid argument / domain violations keep std::invalid_argument.

} // namespace xidet
