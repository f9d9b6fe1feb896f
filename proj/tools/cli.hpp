#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace zfr_cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitVerificationFailed = 2;

/// Parses args (without the program name), dispatches, and writes the
/// document to `out` or the --output file. Diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 17 significant digits, '.' separator, independent of the C locale.
std::string format_double(double v);

/// Pretty JSON with sorted keys and format_double numbers.
std::string dump_json(const nlohmann::json& j);

}  // namespace zfr_cli
