#include "uptake/jsonl.hpp"

#include "uptake/error.hpp"

namespace uptake::jsonl {
namespace {

const Json& require_field(const Json& obj, const char* key, std::string_view source, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) throw MalformedRecord(source, line, std::string("missing field '") + key + "'");
  return *it;
}

}  // namespace

void for_each_object(std::istream& in, std::string_view source,
                     const std::function<void(std::size_t, const Json&)>& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json obj = Json::parse(line, nullptr, false);
    if (obj.is_discarded()) throw MalformedRecord(source, line_no, "invalid JSON");
    if (!obj.is_object()) throw MalformedRecord(source, line_no, "record is not a JSON object");
    fn(line_no, obj);
  }
}

std::string require_string(const Json& obj, const char* key, std::string_view source, std::size_t line) {
  const auto& v = require_field(obj, key, source, line);
  if (!v.is_string()) throw MalformedRecord(source, line, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::int64_t require_int(const Json& obj, const char* key, std::string_view source, std::size_t line) {
  const auto& v = require_field(obj, key, source, line);
  if (!v.is_number_integer()) throw MalformedRecord(source, line, std::string("field '") + key + "' must be an integer");
  return v.get<std::int64_t>();
}

bool require_bool(const Json& obj, const char* key, std::string_view source, std::size_t line) {
  const auto& v = require_field(obj, key, source, line);
  if (!v.is_boolean()) throw MalformedRecord(source, line, std::string("field '") + key + "' must be a boolean");
  return v.get<bool>();
}

}  // namespace uptake::jsonl
