#pragma once

#include <optional>
#include <string_view>
#include <vector>

// Read-only access to the files under data/, compiled into the library.
namespace uptake::bundled {

std::optional<std::string_view> find(std::string_view name);
std::vector<std::string_view> names();

}  // namespace uptake::bundled
