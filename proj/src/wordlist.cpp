#include "uptake/wordlist.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "uptake/bundled.hpp"
#include "uptake/error.hpp"

namespace uptake {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    fn(line_no, line);
  }
}

}  // namespace

std::string ascii_lower(std::string_view text) {
  std::string out(text);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::set<std::string> parse_word_list(std::string_view text) {
  std::set<std::string> out;
  for_each_line(text, [&](std::size_t, std::string_view line) { out.insert(ascii_lower(line)); });
  return out;
}

std::map<std::string, double> parse_weighted_list(std::string_view text, std::string_view source) {
  std::map<std::string, double> out;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) throw MalformedRecord(source, line_no, "expected token<TAB>value");
    const auto token = trim(line.substr(0, tab));
    const auto value_text = trim(line.substr(tab + 1));
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(value_text.data(), value_text.data() + value_text.size(), value);
    if (token.empty() || ec != std::errc{} || ptr != value_text.data() + value_text.size()) {
      throw MalformedRecord(source, line_no, "unparseable entry '" + std::string(line) + "'");
    }
    out[ascii_lower(token)] = value;
  });
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string_view bundled_text(std::string_view name) {
  auto text = bundled::find(name);
  if (!text) throw Error(ErrorCode::Io, "no bundled data file " + std::string(name));
  return *text;
}

std::string text_or_bundled(const std::string& path, std::string_view fallback) {
  if (!path.empty()) return read_text_file(path);
  return std::string(bundled_text(fallback));
}

}  // namespace uptake
