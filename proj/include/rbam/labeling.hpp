#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "rbam/relation.hpp"

namespace rbam {

enum class LabelKind { Support, Attack, Other, Unparseable };

std::string_view to_string(LabelKind k);
std::optional<LabelKind> parse_label_kind(std::string_view s);

struct NormalizedLabel {
  LabelKind kind = LabelKind::Unparseable;
  std::string other_text;  // set iff kind == Other

  std::optional<Relation> relation() const {
    if (kind == LabelKind::Support) return Relation::Support;
    if (kind == LabelKind::Attack) return Relation::Attack;
    return std::nullopt;
  }

  bool operator==(const NormalizedLabel&) const = default;
};

/// Lowercases, trims whitespace and trailing punctuation, then classifies by
/// prefix: "support..." / "attack...", any other single alphabetic word is
/// Other, everything else Unparseable.
NormalizedLabel normalize(std::string_view raw_text);

enum class LabelPolicy { Ignore, CountAsError };

std::string_view to_string(LabelPolicy p);
std::optional<LabelPolicy> parse_label_policy(std::string_view s);

/// How one prediction enters scoring.
struct Disposition {
  enum class Kind {
    Scored,    // enters the confusion matrix with `predicted`
    Error,     // enters as a miss for the gold class, predicts nothing
    Excluded,  // left out; counted as ignored
  };
  Kind kind = Kind::Excluded;
  std::optional<Relation> predicted;

  bool operator==(const Disposition&) const = default;
};

Disposition apply_policy(const NormalizedLabel& label, LabelPolicy policy);

}  // namespace rbam
