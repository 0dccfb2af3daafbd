#ifndef SLATEFREE_ERRORS_HPP
#define SLATEFREE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace slatefree {

struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// The brute-force oracle refuses instances beyond its state-slate budget.
struct capacity_error : std::runtime_error {
    explicit capacity_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when a marginal quantity is requested for a pair with r_{s,j} = 0.
struct undefined_marginal : std::runtime_error {
    explicit undefined_marginal(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace slatefree

#endif
