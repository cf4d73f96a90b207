#pragma once

#include <stdexcept>
#include <string>

namespace permflow {

/// Invalid input: malformed file, non-oblong matrix, bad spec parameters,
/// domain violations (negative entries where nonnegativity is required, ...).
/// The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// A configured enumeration cap was exceeded (naive term count, subset count,
/// partition row limit). Signals that the caller must pick another algorithm
/// or raise the cap. The CLI maps this to exit code 3.
class CapError : public std::runtime_error {
public:
    explicit CapError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace permflow
