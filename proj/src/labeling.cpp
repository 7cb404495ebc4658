#include "rbam/labeling.hpp"

#include <algorithm>

#include "rbam/text.hpp"

namespace rbam {

namespace {

bool is_ascii_punct(char c) {
  return (c >= '!' && c <= '/') || (c >= ':' && c <= '@') || (c >= '[' && c <= '`') ||
         (c >= '{' && c <= '~');
}

bool is_ascii_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

}  // namespace

std::string_view to_string(LabelKind k) {
  switch (k) {
    case LabelKind::Support: return "support";
    case LabelKind::Attack: return "attack";
    case LabelKind::Other: return "other";
    case LabelKind::Unparseable: return "unparseable";
  }
  return "unparseable";
}

std::optional<LabelKind> parse_label_kind(std::string_view s) {
  for (auto k : {LabelKind::Support, LabelKind::Attack, LabelKind::Other, LabelKind::Unparseable})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

NormalizedLabel normalize(std::string_view raw_text) {
  std::string s = text::ascii_lower(text::trim(raw_text));
  while (!s.empty() && is_ascii_punct(s.back())) {
    s.pop_back();
    s = text::trim(s);
  }
  if (s.starts_with("support")) return {LabelKind::Support, {}};
  if (s.starts_with("attack")) return {LabelKind::Attack, {}};
  if (!s.empty() && std::all_of(s.begin(), s.end(), is_ascii_alpha))
    return {LabelKind::Other, s};
  return {LabelKind::Unparseable, {}};
}

std::string_view to_string(LabelPolicy p) {
  return p == LabelPolicy::Ignore ? "ignore" : "count_as_error";
}

std::optional<LabelPolicy> parse_label_policy(std::string_view s) {
  if (s == "ignore") return LabelPolicy::Ignore;
  if (s == "count_as_error") return LabelPolicy::CountAsError;
  return std::nullopt;
}

Disposition apply_policy(const NormalizedLabel& label, LabelPolicy policy) {
  if (auto rel = label.relation()) return {Disposition::Kind::Scored, rel};
  if (policy == LabelPolicy::CountAsError) return {Disposition::Kind::Error, std::nullopt};
  return {Disposition::Kind::Excluded, std::nullopt};
}

}  // namespace rbam
