#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace dreadlock {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumeric = 1;
inline constexpr int kExitUsage = 2;

/// args[0] is the subcommand (trace-ray, land, scan-periodic, portrait,
/// hyperbolic, render). Reports go to `out` unless --out is given;
/// diagnostics go to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Flattens a TOML or JSON config file into "--key=value" tokens. A table
/// named after the subcommand overrides top-level keys. Top-level keys for
/// which `accepts` is false are skipped, so one file can serve several
/// subcommands; keys inside the subcommand's table are always kept.
std::vector<std::string> config_tokens(const std::string& path, const std::string& subcommand,
                                       const std::function<bool(const std::string&)>& accepts = {});

}  // namespace dreadlock
