#pragma once

#include <span>
#include <string>
#include <vector>

#include "rankaudit/ranking.hpp"

namespace rankaudit {

enum class SurrogateKind { kRidgeLinear, kRegressionTree };

std::string_view to_string(SurrogateKind kind);

struct SurrogateParams {
  SurrogateKind kind = SurrogateKind::kRidgeLinear;
  double ridge_lambda = 1e-6;
  std::size_t max_depth = 6;
};

// A regression model predicting a row's 1-indexed rank position from its
// categorical values. Lower predictions mean better ranks.
class SurrogateModel {
 public:
  struct TreeNode {
    // Internal nodes send rows with row[attr] == code to `left`.
    AttrIndex attr = 0;
    Code code = 0;
    int left = -1;
    int right = -1;
    double value = 0.0;  // leaf mean
    bool leaf() const { return left < 0; }
  };

  SurrogateKind kind() const noexcept { return kind_; }
  double predict(std::span<const Code> row) const;

  // Ridge-linear parameters; weight(a, c) is the coefficient of the one-hot
  // column for value c of attribute a.
  double intercept() const noexcept { return intercept_; }
  double weight(AttrIndex a, Code c) const { return weights_.at(a).at(c); }
  const std::vector<std::vector<double>>& weights() const noexcept { return weights_; }

  const std::vector<TreeNode>& tree() const noexcept { return tree_; }
  std::size_t leaf_count() const;
  std::size_t depth() const;

  double training_mse() const noexcept { return training_mse_; }
  // MSE of predicting the mean rank for every row.
  double baseline_mse() const noexcept { return baseline_mse_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  friend SurrogateModel fit_surrogate(const Dataset& data, const Ranking& ranking, const SurrogateParams& params);

 private:
  SurrogateKind kind_ = SurrogateKind::kRidgeLinear;
  double intercept_ = 0.0;
  std::vector<std::vector<double>> weights_;
  std::vector<TreeNode> tree_;
  double training_mse_ = 0.0;
  double baseline_mse_ = 0.0;
  std::vector<std::string> warnings_;
};

// Fits rows -> rank positions. Data whose rows are all identical yields a
// constant model and a warning.
SurrogateModel fit_surrogate(const Dataset& data, const Ranking& ranking, const SurrogateParams& params = {});

}  // namespace rankaudit
