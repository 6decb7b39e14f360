#pragma once

// Command-line front end. Exit codes: 0 success, 1 invalid input,
// 2 numerical failure.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rydimer/params.hpp"

namespace rydimer::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitNumerical = 2;

// Reads and validates a JSON parameter file.
ParameterSet parse_config(const std::string& path);

// Fixed CSV number format: 9 significant digits, '.' decimal.
std::string format_number(double v);

// args excludes the program name. A parameter override replaces --config
// (used by replay).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const std::optional<ParameterSet>& override_params = std::nullopt);
int run(int argc, char** argv);

}  // namespace rydimer::cli
