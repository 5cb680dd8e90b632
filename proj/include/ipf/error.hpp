#pragma once

#include <stdexcept>
#include <string>

namespace ipf {

/// Thrown for violated contracts: bad configs, mismatched inputs, degenerate state.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ipf
