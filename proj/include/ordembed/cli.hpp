#pragma once

#include <string>
#include <vector>

namespace ordembed::cli {

inline constexpr const char* kToolVersion = "1.0.0";

/// Runs one subcommand. Returns 0 on success, 1 on validation errors and
/// bad usage, 2 on I/O errors.
int dispatch(int argc, const char* const* argv);
int dispatch(const std::vector<std::string>& args);  // args[0] is the program name

/// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(const std::string& data);

}  // namespace ordembed::cli
