#pragma once

#include <stdexcept>
#include <string>

namespace evofam {

// A solver or eigensolver failed numerically (non-finite result, no
// convergence, singular pivot).  The message carries the offending context.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

// A fixed-point iteration stopped contracting.
class divergence_error : public numeric_error {
public:
    explicit divergence_error(const std::string& what) : numeric_error(what) {}
};

}  // namespace evofam
