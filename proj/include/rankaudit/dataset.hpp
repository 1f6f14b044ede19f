#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace rankaudit {

using Code = std::uint32_t;
using AttrIndex = std::uint32_t;
using RowIndex = std::uint32_t;

struct Attribute {
  std::string name;
  std::vector<std::string> domain;  // label of each code, in code order
  friend bool operator==(const Attribute&, const Attribute&) = default;
};

// Ordered list of categorical attributes. The order is the attribute index
// used by the search tree.
class Schema {
 public:
  Schema() = default;
  explicit Schema(std::vector<Attribute> attributes);

  std::size_t size() const noexcept { return attributes_.size(); }
  const Attribute& attribute(AttrIndex a) const { return attributes_.at(a); }
  const std::vector<Attribute>& attributes() const noexcept { return attributes_; }
  std::size_t domain_size(AttrIndex a) const { return attributes_.at(a).domain.size(); }

  std::optional<AttrIndex> find(const std::string& name) const;
  std::optional<Code> find_code(AttrIndex a, const std::string& label) const;

  friend bool operator==(const Schema&, const Schema&) = default;

 private:
  std::vector<Attribute> attributes_;
};

// Immutable table of category codes, stored row-major.
class Dataset {
 public:
  Dataset(Schema schema, std::vector<Code> codes);

  const Schema& schema() const noexcept { return schema_; }
  std::size_t n_rows() const noexcept { return n_rows_; }
  std::size_t n_attributes() const noexcept { return schema_.size(); }

  std::span<const Code> row(RowIndex r) const {
    return {codes_.data() + static_cast<std::size_t>(r) * schema_.size(), schema_.size()};
  }
  Code at(RowIndex r, AttrIndex a) const { return codes_[static_cast<std::size_t>(r) * schema_.size() + a]; }
  const std::vector<Code>& codes() const noexcept { return codes_; }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  Schema schema_;
  std::vector<Code> codes_;
  std::size_t n_rows_ = 0;
};

// Builds a dataset from string labels, assigning dense codes in
// first-appearance order per attribute.
class DatasetBuilder {
 public:
  explicit DatasetBuilder(std::vector<std::string> attribute_names);

  void add_row(const std::vector<std::string>& labels);
  std::size_t n_rows() const noexcept { return n_rows_; }
  Dataset build() const;

 private:
  std::vector<Attribute> attributes_;
  std::vector<std::unordered_map<std::string, Code>> lookup_;
  std::vector<Code> codes_;
  std::size_t n_rows_ = 0;
};

// Drops domain values that never occur and renumbers codes, preserving the
// relative order of the remaining labels.
Dataset restrict_to_active_domains(const Dataset& data);

}  // namespace rankaudit
