#include "rankaudit/dataset.hpp"

#include <unordered_set>

#include "rankaudit/error.hpp"

namespace rankaudit {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSchemaMismatch: return "schema-mismatch";
    case ErrorCode::kInvalidSchema: return "invalid-schema";
    case ErrorCode::kInvalidDataset: return "invalid-dataset";
    case ErrorCode::kMalformedRanking: return "malformed-ranking";
    case ErrorCode::kInvalidScore: return "invalid-score";
    case ErrorCode::kNonMonotoneSchedule: return "non-monotone-schedule";
    case ErrorCode::kRangeError: return "range-error";
    case ErrorCode::kBoundExceedsK: return "bound-exceeds-k";
    case ErrorCode::kUndefinedBound: return "undefined-bound";
    case ErrorCode::kNonPositiveAlpha: return "non-positive-alpha";
    case ErrorCode::kInvalidThreshold: return "invalid-threshold";
    case ErrorCode::kWrongMode: return "wrong-mode";
    case ErrorCode::kCacheCoherence: return "cache-coherence";
    case ErrorCode::kUndefinedSchedule: return "undefined-schedule";
    case ErrorCode::kTooLarge: return "too-large";
    case ErrorCode::kModeUnsupported: return "mode-unsupported";
    case ErrorCode::kEmptyGroup: return "empty-group";
    case ErrorCode::kParameter: return "parameter-error";
    case ErrorCode::kMissingColumn: return "missing-column";
    case ErrorCode::kNonNumeric: return "non-numeric";
    case ErrorCode::kNoRanking: return "no-ranking";
    case ErrorCode::kMalformedCsv: return "malformed-csv";
    case ErrorCode::kMalformedReport: return "malformed-report";
    case ErrorCode::kMalformedConfig: return "malformed-config";
    case ErrorCode::kIo: return "io-error";
  }
  return "unknown";
}

Schema::Schema(std::vector<Attribute> attributes) : attributes_(std::move(attributes)) {
  std::unordered_set<std::string> names;
  for (const auto& attr : attributes_) {
    if (!names.insert(attr.name).second) {
      throw Error(ErrorCode::kInvalidSchema, "duplicate attribute name '" + attr.name + "'");
    }
    if (attr.domain.empty()) {
      throw Error(ErrorCode::kInvalidSchema, "attribute '" + attr.name + "' has an empty domain");
    }
    std::unordered_set<std::string> labels;
    for (const auto& label : attr.domain) {
      if (!labels.insert(label).second) {
        throw Error(ErrorCode::kInvalidSchema,
                    "attribute '" + attr.name + "' lists label '" + label + "' twice");
      }
    }
  }
}

std::optional<AttrIndex> Schema::find(const std::string& name) const {
  for (AttrIndex a = 0; a < attributes_.size(); ++a) {
    if (attributes_[a].name == name) return a;
  }
  return std::nullopt;
}

std::optional<Code> Schema::find_code(AttrIndex a, const std::string& label) const {
  const auto& domain = attribute(a).domain;
  for (Code c = 0; c < domain.size(); ++c) {
    if (domain[c] == label) return c;
  }
  return std::nullopt;
}

Dataset::Dataset(Schema schema, std::vector<Code> codes) : schema_(std::move(schema)), codes_(std::move(codes)) {
  const std::size_t width = schema_.size();
  if (width == 0) throw Error(ErrorCode::kInvalidDataset, "dataset has no attributes");
  if (codes_.empty() || codes_.size() % width != 0) {
    throw Error(ErrorCode::kInvalidDataset, "code table is empty or not a whole number of rows");
  }
  n_rows_ = codes_.size() / width;
  for (std::size_t i = 0; i < codes_.size(); ++i) {
    const auto a = static_cast<AttrIndex>(i % width);
    if (codes_[i] >= schema_.domain_size(a)) {
      throw Error(ErrorCode::kInvalidDataset, "row " + std::to_string(i / width) + " has code " +
                                                  std::to_string(codes_[i]) + " outside the domain of '" +
                                                  schema_.attribute(a).name + "'");
    }
  }
}

DatasetBuilder::DatasetBuilder(std::vector<std::string> attribute_names) {
  attributes_.reserve(attribute_names.size());
  for (auto& name : attribute_names) attributes_.push_back({std::move(name), {}});
  lookup_.resize(attributes_.size());
}

void DatasetBuilder::add_row(const std::vector<std::string>& labels) {
  if (labels.size() != attributes_.size()) {
    throw Error(ErrorCode::kInvalidDataset, "row has " + std::to_string(labels.size()) + " values, expected " +
                                                std::to_string(attributes_.size()));
  }
  for (std::size_t a = 0; a < labels.size(); ++a) {
    auto [it, inserted] = lookup_[a].try_emplace(labels[a], static_cast<Code>(attributes_[a].domain.size()));
    if (inserted) attributes_[a].domain.push_back(labels[a]);
    codes_.push_back(it->second);
  }
  ++n_rows_;
}

Dataset DatasetBuilder::build() const { return Dataset(Schema(attributes_), codes_); }

Dataset restrict_to_active_domains(const Dataset& data) {
  const auto& schema = data.schema();
  std::vector<std::vector<bool>> present(schema.size());
  for (AttrIndex a = 0; a < schema.size(); ++a) present[a].assign(schema.domain_size(a), false);
  for (RowIndex r = 0; r < data.n_rows(); ++r) {
    for (AttrIndex a = 0; a < schema.size(); ++a) present[a][data.at(r, a)] = true;
  }
  std::vector<Attribute> attributes;
  std::vector<std::vector<Code>> remap(schema.size());
  for (AttrIndex a = 0; a < schema.size(); ++a) {
    Attribute attr{schema.attribute(a).name, {}};
    remap[a].assign(schema.domain_size(a), 0);
    for (Code c = 0; c < schema.domain_size(a); ++c) {
      if (!present[a][c]) continue;
      remap[a][c] = static_cast<Code>(attr.domain.size());
      attr.domain.push_back(schema.attribute(a).domain[c]);
    }
    attributes.push_back(std::move(attr));
  }
  std::vector<Code> codes(data.codes().size());
  for (std::size_t i = 0; i < codes.size(); ++i) {
    codes[i] = remap[i % schema.size()][data.codes()[i]];
  }
  return Dataset(Schema(std::move(attributes)), std::move(codes));
}

}  // namespace rankaudit
