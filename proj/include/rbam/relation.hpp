#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace rbam {

/// Binary relation of a child argument towards its parent.
enum class Relation { Support, Attack };

inline constexpr Relation kRelations[] = {Relation::Support, Relation::Attack};

constexpr std::string_view to_string(Relation r) {
  return r == Relation::Support ? "support" : "attack";
}

/// Accepts the canonical lowercase names only.
inline std::optional<Relation> parse_relation(std::string_view s) {
  if (s == "support") return Relation::Support;
  if (s == "attack") return Relation::Attack;
  return std::nullopt;
}

constexpr Relation other(Relation r) {
  return r == Relation::Support ? Relation::Attack : Relation::Support;
}

}  // namespace rbam
