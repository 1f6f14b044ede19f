#include "rankaudit/bounds.hpp"

#include <cctype>
#include <numeric>

#include "rankaudit/error.hpp"

namespace rankaudit {

namespace {

std::int64_t parse_int(const std::string& text, const std::string& what) {
  if (text.empty()) throw Error(ErrorCode::kParameter, "empty " + what);
  std::size_t used = 0;
  long long value = 0;
  try {
    value = std::stoll(text, &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::kParameter, "cannot parse " + what + " '" + text + "'");
  }
  if (used != text.size()) throw Error(ErrorCode::kParameter, "cannot parse " + what + " '" + text + "'");
  return value;
}

}  // namespace

Fraction Fraction::make(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorCode::kParameter, "fraction with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return {num, den};
}

Fraction Fraction::parse(const std::string& text) {
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    return make(parse_int(text.substr(0, slash), "numerator"), parse_int(text.substr(slash + 1), "denominator"));
  }
  const auto dot = text.find('.');
  if (dot == std::string::npos) return make(parse_int(text, "fraction"), 1);
  const std::string whole = text.substr(0, dot);
  const std::string frac = text.substr(dot + 1);
  if (frac.size() > 15 || frac.empty()) throw Error(ErrorCode::kParameter, "cannot parse decimal '" + text + "'");
  for (char c : frac) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw Error(ErrorCode::kParameter, "cannot parse decimal '" + text + "'");
    }
  }
  std::int64_t den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  const bool negative = !whole.empty() && whole.front() == '-';
  const std::int64_t int_part = whole.empty() || whole == "-" ? 0 : parse_int(whole, "decimal");
  const std::int64_t frac_part = parse_int(frac, "decimal");
  const std::int64_t magnitude = (int_part < 0 ? -int_part : int_part) * den + frac_part;
  return make(negative ? -magnitude : magnitude, den);
}

std::string Fraction::to_string() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

std::string_view to_string(BoundMode mode) {
  return mode == BoundMode::kGlobal ? "global" : "proportional";
}

BoundsSpec BoundsSpec::global(std::int64_t size_threshold, std::size_t k_min, std::size_t k_max,
                              const std::vector<std::pair<std::size_t, std::int64_t>>& steps) {
  BoundsSpec spec;
  spec.mode = BoundMode::kGlobal;
  spec.size_threshold = size_threshold;
  spec.k_min = k_min;
  spec.k_max = k_max;
  std::map<std::size_t, std::int64_t> sorted(steps.begin(), steps.end());
  if (sorted.size() != steps.size()) throw Error(ErrorCode::kParameter, "bound schedule repeats a from_k");
  for (std::size_t k = k_min; k <= k_max; ++k) {
    auto it = sorted.upper_bound(k);
    if (it == sorted.begin()) continue;  // undefined; reported by validate_bounds
    spec.lower_schedule[k] = std::prev(it)->second;
  }
  return spec;
}

BoundsSpec BoundsSpec::proportional(std::int64_t size_threshold, std::size_t k_min, std::size_t k_max,
                                    Fraction alpha) {
  BoundsSpec spec;
  spec.mode = BoundMode::kProportional;
  spec.size_threshold = size_threshold;
  spec.k_min = k_min;
  spec.k_max = k_max;
  spec.alpha = alpha;
  return spec;
}

std::int64_t BoundsSpec::lower_bound(std::size_t k) const {
  auto it = lower_schedule.find(k);
  if (it == lower_schedule.end()) {
    throw Error(ErrorCode::kUndefinedBound, "no lower bound defined for k=" + std::to_string(k));
  }
  return it->second;
}

void validate_bounds(const BoundsSpec& spec, const Dataset& data) {
  if (spec.k_min < 1 || spec.k_min > spec.k_max) {
    throw Error(ErrorCode::kRangeError, "k range [" + std::to_string(spec.k_min) + ", " +
                                            std::to_string(spec.k_max) + "] is empty or starts below 1");
  }
  if (spec.k_max > data.n_rows()) {
    throw Error(ErrorCode::kRangeError, "k_max=" + std::to_string(spec.k_max) + " exceeds the " +
                                            std::to_string(data.n_rows()) + " rows of the dataset");
  }
  if (spec.size_threshold < 1) {
    throw Error(ErrorCode::kInvalidThreshold, "size threshold must be a positive tuple count");
  }
  if (spec.mode == BoundMode::kProportional) {
    if (spec.alpha.num <= 0) throw Error(ErrorCode::kNonPositiveAlpha, "alpha must be > 0");
    return;
  }
  std::int64_t previous = 0;
  for (std::size_t k = spec.k_min; k <= spec.k_max; ++k) {
    auto it = spec.lower_schedule.find(k);
    if (it == spec.lower_schedule.end()) {
      throw Error(ErrorCode::kUndefinedBound, "no lower bound defined for k=" + std::to_string(k));
    }
    const std::int64_t bound = it->second;
    if (bound < 0) throw Error(ErrorCode::kUndefinedBound, "negative lower bound at k=" + std::to_string(k));
    if (bound > static_cast<std::int64_t>(k)) {
      throw Error(ErrorCode::kBoundExceedsK,
                  "L_" + std::to_string(k) + "=" + std::to_string(bound) + " exceeds the prefix length");
    }
    if (k > spec.k_min && bound < previous) {
      throw Error(ErrorCode::kNonMonotoneSchedule, "L_" + std::to_string(k) + "=" + std::to_string(bound) +
                                                       " is below L_" + std::to_string(k - 1) + "=" +
                                                       std::to_string(previous));
    }
    previous = bound;
  }
}

std::vector<std::pair<std::size_t, std::int64_t>> parse_steps(const std::string& text, std::size_t k_min) {
  std::vector<std::pair<std::size_t, std::int64_t>> steps;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    const std::string item = text.substr(start, end - start);
    if (const auto colon = item.find(':'); colon != std::string::npos) {
      const auto from = parse_int(item.substr(0, colon), "from_k");
      if (from < 1) throw Error(ErrorCode::kParameter, "from_k must be positive");
      steps.emplace_back(static_cast<std::size_t>(from), parse_int(item.substr(colon + 1), "lower bound"));
    } else {
      if (!steps.empty() || end != text.size()) {
        throw Error(ErrorCode::kParameter, "bounds must be 'L' or a list of 'from_k:L' steps");
      }
      steps.emplace_back(k_min, parse_int(item, "lower bound"));
    }
    start = end + 1;
  }
  return steps;
}

double BoundTest::bound_value(std::int64_t size, std::size_t k) const {
  if (spec_->mode == BoundMode::kGlobal) return static_cast<double>(spec_->lower_bound(k));
  return spec_->alpha.to_double() * static_cast<double>(size) * static_cast<double>(k) /
         static_cast<double>(n_rows_);
}

}  // namespace rankaudit
