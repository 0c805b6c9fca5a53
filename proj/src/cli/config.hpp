#pragma once

// Flat "key = value" run configuration. Each key names a long option of the active
// subcommand; the file is expanded into "--key=value" arguments placed ahead of the command
// line so that explicit flags win.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace cpulse::cli {

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

/// Parses '#' comments, blank lines and "key = value" lines; throws PreconditionError on
/// malformed lines or duplicate keys.
ConfigEntries parse_config(const std::string& text);
ConfigEntries load_config(const std::filesystem::path& path);

/// Removes "--config PATH" / "--config=PATH" from `args` (after the subcommand) and splices
/// the file's entries in right after the subcommand name.
std::vector<std::string> expand_config(const std::vector<std::string>& args);

}  // namespace cpulse::cli
