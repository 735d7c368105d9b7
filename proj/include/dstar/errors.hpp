#pragma once

#include <stdexcept>
#include <string>

namespace dstar {

/// Thrown when an uplink rate threshold cannot be met for any transmit
/// configuration (even with the DL turned off). `group` names the offending
/// user group: "pu" or "su".
struct InfeasibleError : std::runtime_error {
    std::string group;

    explicit InfeasibleError(std::string g)
        : std::runtime_error("uplink rate threshold unattainable for group " + g),
          group(std::move(g)) {}
};

} // namespace dstar
