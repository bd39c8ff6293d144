#pragma once

#include <iosfwd>
#include <string>

#include "hgsp/io.hpp"

namespace hgsp::cli {

using Json = io::Json;

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kOutDirEnv = "HGSP_OUT_DIR";

/// 0 ok, 2 configuration or input, 3 non-finite values, 4 violated assumption.
int exit_code(ErrorKind kind);

/// Resolved defaults of a subcommand; throws `config` for unknown commands.
Json default_config(const std::string& command);

/// `user` laid over `defaults`. Keys absent from the defaults and values of
/// the wrong JSON type raise `config` errors naming the key path.
Json merge_config(const Json& defaults, const Json& user, const std::string& path = "");

/// Applies "a.b=value"; the value is parsed as JSON when possible and taken
/// as a string otherwise. The key path must exist.
void apply_override(Json& config, const std::string& assignment);

/// Entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hgsp::cli
