#include "rbam/delimited.hpp"

#include <algorithm>
#include <fstream>

#include "rbam/error.hpp"

namespace rbam {

namespace {

// Reads one logical record; returns false at end of input.
bool read_record(std::istream& in, char delim, std::vector<std::string>& fields,
                 std::size_t& line) {
  fields.clear();
  int c = in.get();
  if (c == EOF) return false;
  std::string field;
  bool quoted = false;
  bool at_field_start = true;
  for (;; c = in.get()) {
    if (c == EOF) {
      fields.push_back(std::move(field));
      return true;
    }
    const char ch = static_cast<char>(c);
    if (quoted) {
      if (ch == '"') {
        if (in.peek() == '"') {
          field.push_back('"');
          in.get();
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++line;
        field.push_back(ch);
      }
      continue;
    }
    if (ch == '"' && at_field_start) {
      quoted = true;
      at_field_start = false;
    } else if (ch == delim) {
      fields.push_back(std::move(field));
      field.clear();
      at_field_start = true;
    } else if (ch == '\n' || ch == '\r') {
      if (ch == '\r' && in.peek() == '\n') in.get();
      ++line;
      fields.push_back(std::move(field));
      return true;
    } else {
      field.push_back(ch);
      at_field_start = false;
    }
  }
}

}  // namespace

DelimitedTable DelimitedTable::parse(std::istream& in, char delimiter) {
  DelimitedTable t;
  std::size_t line = 1;
  std::vector<std::string> fields;
  if (!read_record(in, delimiter, fields, line)) return t;
  if (!fields.empty() && fields[0].rfind("\xEF\xBB\xBF", 0) == 0) fields[0].erase(0, 3);
  t.header_ = fields;
  for (;;) {
    const std::size_t start = line;
    if (!read_record(in, delimiter, fields, line)) break;
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    fields.resize(std::max(fields.size(), t.header_.size()));
    t.rows_.push_back(fields);
    t.lines_.push_back(start);
  }
  return t;
}

DelimitedTable DelimitedTable::read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open " + path);
  auto t = parse(in, delimiter_for(path));
  t.source_ = path;
  return t;
}

char DelimitedTable::delimiter_for(const std::string& path) {
  auto ends_with = [&](std::string_view suffix) {
    return path.size() >= suffix.size() &&
           path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  return ends_with(".tsv") || ends_with(".tab") ? '\t' : ',';
}

std::optional<std::size_t> DelimitedTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header_.size(); ++i)
    if (header_[i] == name) return i;
  return std::nullopt;
}

std::size_t DelimitedTable::require_column(std::initializer_list<std::string_view> names) const {
  for (auto n : names)
    if (auto c = column(n)) return *c;
  std::string list;
  for (auto n : names) {
    if (!list.empty()) list += " | ";
    list += n;
  }
  throw LoadError((source_.empty() ? std::string("table") : source_) +
                  ": missing required column " + list);
}

const std::string& DelimitedTable::at(std::size_t row, std::size_t col) const {
  return rows_.at(row).at(col);
}

}  // namespace rbam
