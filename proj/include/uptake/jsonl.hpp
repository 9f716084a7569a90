#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace uptake::jsonl {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

/// Calls `fn(line_no, object)` for every non-blank line. Lines that are not
/// JSON objects raise MalformedRecord.
void for_each_object(std::istream& in, std::string_view source,
                     const std::function<void(std::size_t, const Json&)>& fn);

// Typed field access; a missing or mistyped field raises MalformedRecord.
std::string require_string(const Json& obj, const char* key, std::string_view source, std::size_t line);
std::int64_t require_int(const Json& obj, const char* key, std::string_view source, std::size_t line);
bool require_bool(const Json& obj, const char* key, std::string_view source, std::size_t line);

}  // namespace uptake::jsonl
