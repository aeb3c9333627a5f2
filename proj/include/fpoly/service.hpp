#pragma once

// JSON front end shared by the C API and the command-line tool: spec parsing,
// schema checks and one handler per command.

#include "fpoly/json_io.hpp"
#include "fpoly/polyhedra.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fpoly {

inline constexpr const char* kToolVersion = "0.1.0";

/// Tool name, version and tolerance constants.
Json metadata_block();

/// Parses text; syntax errors become ValidationError "<source>:<line>:<column>: ...".
Json parse_json_text(const std::string& text, const std::string& source);

/// "octagon", "boost:<ell>" or { "dim", "generators", "label", "quotient_volume"? }.
std::shared_ptr<const FuchsianGroup> parse_group(const Json& spec, const std::string& path = "$");

/// { "group", "normals" } (extra keys listed in `allowed` are tolerated).
NormalFamily parse_family(const Json& spec, const std::string& path = "$",
                          const std::vector<std::string>& allowed = {});

SupportVector parse_support(const Json& spec, std::size_t n, const std::string& path);

Json polyhedron_json(const FuchsianPolyhedron& p);

struct CommandResult {
  int status = 0;      // 0 ok, 1 validation, 2 numeric
  std::string output;  // JSON or text; may hold a failure report
  std::string error;   // diagnostic for status != 0
};

/// Known command names, in usage order.
const std::vector<std::string>& command_names();

/// Runs `command` on an optional parsed input document and flag options.
CommandResult run_command(const std::string& command, const std::optional<Json>& input, const Json& options);

/// Text report of the closing octagon example; `table` receives the rows as JSON when non-null.
std::string paper_repro(Json* table = nullptr);

}  // namespace fpoly
