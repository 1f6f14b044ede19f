#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rankaudit/dataset.hpp"

namespace rankaudit {

struct Assignment {
  AttrIndex attr;
  Code code;
  friend auto operator<=>(const Assignment&, const Assignment&) = default;
};

// A partial assignment attribute -> code, stored sorted by attribute index.
// The empty pattern matches every row.
class Pattern {
 public:
  Pattern() = default;
  explicit Pattern(std::vector<Assignment> assignments);

  const std::vector<Assignment>& assignments() const noexcept { return assignments_; }
  std::size_t size() const noexcept { return assignments_.size(); }
  bool empty() const noexcept { return assignments_.empty(); }

  // Largest assigned attribute index; only meaningful for non-empty patterns.
  AttrIndex max_attr() const { return assignments_.back().attr; }

  // Canonical encoding: each (attr, code) pair as 8 big-endian bytes.
  // Byte order of keys is the canonical pattern order.
  const std::string& key() const noexcept { return key_; }

  Pattern with(Assignment extra) const;
  Pattern without(std::size_t position) const;

  static Pattern from_key(const std::string& key);

  friend bool operator==(const Pattern& a, const Pattern& b) { return a.key_ == b.key_; }
  friend bool operator<(const Pattern& a, const Pattern& b) { return a.key_ < b.key_; }

 private:
  std::vector<Assignment> assignments_;
  std::string key_;
};

// Throws kSchemaMismatch when an attribute index or code is outside the schema.
void validate_pattern(const Pattern& p, const Schema& schema);

bool satisfies(const Dataset& data, RowIndex row, const Pattern& p);

inline bool matches(std::span<const Code> row, const Pattern& p) noexcept {
  for (const auto& [attr, code] : p.assignments()) {
    if (row[attr] != code) return false;
  }
  return true;
}

// True iff every assignment of `ancestor` also appears in `descendant`
// (reflexive).
bool contains(const Pattern& ancestor, const Pattern& descendant);
inline bool properly_contains(const Pattern& ancestor, const Pattern& descendant) {
  return ancestor.size() < descendant.size() && contains(ancestor, descendant);
}

// Parses "Attr=Label,Attr=Label" (labels may not contain ',').
Pattern parse_pattern(const Schema& schema, const std::string& text);
Pattern pattern_from_labels(const Schema& schema, const std::vector<std::pair<std::string, std::string>>& pairs);
std::string to_string(const Schema& schema, const Pattern& p);

// A set of patterns iterated in canonical order.
class PatternSet {
 public:
  using Map = std::map<std::string, Pattern>;

  bool insert(const Pattern& p) { return items_.emplace(p.key(), p).second; }
  bool erase(const Pattern& p) { return items_.erase(p.key()) > 0; }
  bool contains(const Pattern& p) const { return items_.count(p.key()) > 0; }
  std::size_t size() const noexcept { return items_.size(); }
  bool empty() const noexcept { return items_.empty(); }
  void clear() { items_.clear(); }

  bool has_proper_ancestor_of(const Pattern& p) const;
  std::vector<Pattern> proper_descendants_of(const Pattern& p) const;
  std::vector<Pattern> to_vector() const;

  Map::const_iterator begin() const { return items_.begin(); }
  Map::const_iterator end() const { return items_.end(); }

  friend bool operator==(const PatternSet& a, const PatternSet& b) = default;

 private:
  Map items_;
};

}  // namespace rankaudit
