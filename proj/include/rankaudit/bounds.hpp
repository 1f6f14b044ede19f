#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rankaudit/dataset.hpp"

namespace rankaudit {

// Exact non-negative rational num/den in lowest terms.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Fraction make(std::int64_t num, std::int64_t den);
  // Accepts "0.85", "17/20", "1".
  static Fraction parse(const std::string& text);

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_string() const;

  friend bool operator==(const Fraction&, const Fraction&) = default;
};

enum class BoundMode { kGlobal, kProportional };

std::string_view to_string(BoundMode mode);

// Lower-bound configuration of one audit. Positions k are 1-indexed.
struct BoundsSpec {
  BoundMode mode = BoundMode::kGlobal;
  std::size_t k_min = 1;
  std::size_t k_max = 1;
  std::int64_t size_threshold = 1;               // tau_s; patterns need size >= tau_s
  std::map<std::size_t, std::int64_t> lower_schedule;  // global mode: k -> L_k
  Fraction alpha;                                 // proportional mode

  // Expands a step function [(from_k, L)] over [k_min, k_max].
  static BoundsSpec global(std::int64_t size_threshold, std::size_t k_min, std::size_t k_max,
                           const std::vector<std::pair<std::size_t, std::int64_t>>& steps);
  static BoundsSpec proportional(std::int64_t size_threshold, std::size_t k_min, std::size_t k_max, Fraction alpha);

  std::int64_t lower_bound(std::size_t k) const;
};

// Throws Error with a distinct code for each broken invariant.
void validate_bounds(const BoundsSpec& spec, const Dataset& data);

// Parses "from:L,from:L" step lists; a bare "L" means flat from k_min.
std::vector<std::pair<std::size_t, std::int64_t>> parse_steps(const std::string& text, std::size_t k_min);

// The lower-bound violation test, with the proportional bound evaluated by
// integer cross-multiplication.
class BoundTest {
 public:
  BoundTest(const BoundsSpec& spec, std::size_t n_rows) : spec_(&spec), n_rows_(n_rows) {}

  const BoundsSpec& spec() const { return *spec_; }
  std::size_t n_rows() const { return n_rows_; }

  bool large_enough(std::int64_t size) const { return size >= spec_->size_threshold; }

  bool violates(std::int64_t topk_count, std::int64_t size, std::size_t k) const {
    if (spec_->mode == BoundMode::kGlobal) return topk_count < spec_->lower_bound(k);
    const auto& a = spec_->alpha;
    using Wide = __int128;
    return Wide(topk_count) * a.den * static_cast<Wide>(n_rows_) < Wide(a.num) * size * static_cast<Wide>(k);
  }

  // The bound the count is compared against at k (real-valued for reports).
  double bound_value(std::int64_t size, std::size_t k) const;

 private:
  const BoundsSpec* spec_;
  std::size_t n_rows_;
};

}  // namespace rankaudit
