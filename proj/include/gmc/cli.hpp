#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gmc/error.hpp"

namespace gmc::cli {

enum class Subcommand { kEstimate, kIntegrate, kParams, kBounds, kExperiment, kAdversary };

/// Bad command line: exit code 2.
struct UsageError : Error {
    using Error::Error;
};

struct CliInvocation {
    Subcommand subcommand = Subcommand::kParams;
    std::map<std::string, std::string> flags;  // flag name without dashes -> raw value
    std::optional<std::string> config_path;
};

/// args excludes the program name. Throws UsageError.
CliInvocation parse(const std::vector<std::string>& args);

/// Returns 0 on success, 1 on a computation error, 2 on a usage error.
int dispatch(const CliInvocation& inv, std::ostream& out, std::ostream& err);

/// parse + dispatch, with help and usage text routed to out/err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gmc::cli
