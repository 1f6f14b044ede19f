#include "rankaudit/pattern.hpp"

#include <algorithm>

#include "rankaudit/error.hpp"

namespace rankaudit {

namespace {

void append_u32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>((v >> 24) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>(v & 0xff));
}

std::uint32_t read_u32(const std::string& in, std::size_t at) {
  std::uint32_t v = 0;
  for (std::size_t i = 0; i < 4; ++i) v = (v << 8) | static_cast<unsigned char>(in[at + i]);
  return v;
}

std::string encode(const std::vector<Assignment>& assignments) {
  std::string key;
  key.reserve(assignments.size() * 8);
  for (const auto& [attr, code] : assignments) {
    append_u32(key, attr);
    append_u32(key, code);
  }
  return key;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

}  // namespace

Pattern::Pattern(std::vector<Assignment> assignments) : assignments_(std::move(assignments)) {
  std::sort(assignments_.begin(), assignments_.end());
  for (std::size_t i = 1; i < assignments_.size(); ++i) {
    if (assignments_[i].attr == assignments_[i - 1].attr) {
      throw Error(ErrorCode::kSchemaMismatch,
                  "attribute " + std::to_string(assignments_[i].attr) + " assigned more than once");
    }
  }
  key_ = encode(assignments_);
}

Pattern Pattern::with(Assignment extra) const {
  std::vector<Assignment> next = assignments_;
  next.push_back(extra);
  return Pattern(std::move(next));
}

Pattern Pattern::without(std::size_t position) const {
  std::vector<Assignment> next = assignments_;
  next.erase(next.begin() + static_cast<std::ptrdiff_t>(position));
  return Pattern(std::move(next));
}

Pattern Pattern::from_key(const std::string& key) {
  if (key.size() % 8 != 0) throw Error(ErrorCode::kSchemaMismatch, "pattern key has a partial assignment");
  std::vector<Assignment> assignments;
  for (std::size_t at = 0; at < key.size(); at += 8) {
    assignments.push_back({read_u32(key, at), read_u32(key, at + 4)});
  }
  return Pattern(std::move(assignments));
}

void validate_pattern(const Pattern& p, const Schema& schema) {
  for (const auto& [attr, code] : p.assignments()) {
    if (attr >= schema.size()) {
      throw Error(ErrorCode::kSchemaMismatch, "attribute index " + std::to_string(attr) + " outside schema of " +
                                                  std::to_string(schema.size()) + " attributes");
    }
    if (code >= schema.domain_size(attr)) {
      throw Error(ErrorCode::kSchemaMismatch,
                  "code " + std::to_string(code) + " outside the domain of '" + schema.attribute(attr).name + "'");
    }
  }
}

bool satisfies(const Dataset& data, RowIndex row, const Pattern& p) {
  if (!p.empty() && p.max_attr() >= data.n_attributes()) {
    throw Error(ErrorCode::kSchemaMismatch, "attribute index " + std::to_string(p.max_attr()) +
                                                " outside schema of " + std::to_string(data.n_attributes()) +
                                                " attributes");
  }
  if (row >= data.n_rows()) throw Error(ErrorCode::kRangeError, "row " + std::to_string(row) + " out of range");
  return matches(data.row(row), p);
}

bool contains(const Pattern& ancestor, const Pattern& descendant) {
  const auto& a = ancestor.assignments();
  const auto& d = descendant.assignments();
  if (a.size() > d.size()) return false;
  std::size_t j = 0;
  for (const auto& item : a) {
    while (j < d.size() && d[j].attr < item.attr) ++j;
    if (j == d.size() || d[j] != item) return false;
    ++j;
  }
  return true;
}

Pattern pattern_from_labels(const Schema& schema, const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<Assignment> assignments;
  for (const auto& [name, label] : pairs) {
    const auto attr = schema.find(name);
    if (!attr) throw Error(ErrorCode::kSchemaMismatch, "unknown attribute '" + name + "'");
    const auto code = schema.find_code(*attr, label);
    if (!code) throw Error(ErrorCode::kSchemaMismatch, "attribute '" + name + "' has no value '" + label + "'");
    assignments.push_back({*attr, *code});
  }
  return Pattern(std::move(assignments));
}

Pattern parse_pattern(const Schema& schema, const std::string& text) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string body = trim(text);
  if (!body.empty() && body.front() == '{' && body.back() == '}') body = trim(body.substr(1, body.size() - 2));
  std::size_t start = 0;
  while (start < body.size()) {
    auto end = body.find(',', start);
    if (end == std::string::npos) end = body.size();
    const std::string item = trim(body.substr(start, end - start));
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::kParameter, "expected Attr=Value, got '" + item + "'");
    pairs.emplace_back(trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
    start = end + 1;
  }
  return pattern_from_labels(schema, pairs);
}

std::string to_string(const Schema& schema, const Pattern& p) {
  std::string out = "{";
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& [attr, code] = p.assignments()[i];
    if (i) out += ", ";
    out += schema.attribute(attr).name + "=" + schema.attribute(attr).domain.at(code);
  }
  return out + "}";
}

bool PatternSet::has_proper_ancestor_of(const Pattern& p) const {
  const std::size_t m = p.size();
  // Either scan the set or probe every proper subset, whichever is smaller.
  if (m >= 20 || items_.size() < (std::size_t{1} << m)) {
    for (const auto& [key, q] : items_) {
      if (properly_contains(q, p)) return true;
    }
    return false;
  }
  const auto& a = p.assignments();
  const std::size_t full = (std::size_t{1} << m) - 1;
  for (std::size_t mask = 0; mask < full; ++mask) {
    std::vector<Assignment> subset;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask & (std::size_t{1} << i)) subset.push_back(a[i]);
    }
    if (items_.count(encode(subset))) return true;
  }
  return false;
}

std::vector<Pattern> PatternSet::proper_descendants_of(const Pattern& p) const {
  std::vector<Pattern> out;
  for (const auto& [key, q] : items_) {
    if (properly_contains(p, q)) out.push_back(q);
  }
  return out;
}

std::vector<Pattern> PatternSet::to_vector() const {
  std::vector<Pattern> out;
  out.reserve(items_.size());
  for (const auto& [key, q] : items_) out.push_back(q);
  return out;
}

}  // namespace rankaudit
