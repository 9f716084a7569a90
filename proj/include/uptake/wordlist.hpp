#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>

namespace uptake {

/// One lowercase entry per line; blank lines and '#' comments are skipped.
std::set<std::string> parse_word_list(std::string_view text);

/// `token<TAB>value` per line, same comment rules. Throws MalformedRecord on bad lines.
std::map<std::string, double> parse_weighted_list(std::string_view text, std::string_view source);

std::string read_text_file(const std::string& path);

/// Contents of a bundled data file; throws Error(Io) if absent.
std::string_view bundled_text(std::string_view name);

/// Returns the file at `path` if non-empty, else the bundled file `fallback`.
std::string text_or_bundled(const std::string& path, std::string_view fallback);

std::string ascii_lower(std::string_view text);

}  // namespace uptake
