#pragma once

#include <string_view>

namespace uptake {

/// Binary class of a post. Influential is the positive class.
enum class Label { NonInfluential, Influential };

inline constexpr std::string_view to_string(Label label) {
  return label == Label::Influential ? "influential" : "non_influential";
}

/// +1 for Influential, -1 otherwise.
inline constexpr int to_sign(Label label) { return label == Label::Influential ? 1 : -1; }

}  // namespace uptake
