#include "rankaudit/surrogate.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <functional>

#include "rankaudit/error.hpp"

namespace rankaudit {

std::string_view to_string(SurrogateKind kind) {
  return kind == SurrogateKind::kRidgeLinear ? "ridge-linear" : "regression-tree";
}

namespace {

bool all_rows_identical(const Dataset& data) {
  for (RowIndex r = 1; r < data.n_rows(); ++r) {
    if (!std::equal(data.row(r).begin(), data.row(r).end(), data.row(0).begin())) return false;
  }
  return true;
}

struct Moments {
  double count = 0.0;
  double sum = 0.0;
  double sum_sq = 0.0;
  void add(double y) {
    count += 1.0;
    sum += y;
    sum_sq += y * y;
  }
  double sse() const { return count > 0.0 ? sum_sq - sum * sum / count : 0.0; }
};

void fit_linear(const Dataset& data, const std::vector<double>& y, double lambda, double& intercept,
                std::vector<std::vector<double>>& weights) {
  const Schema& schema = data.schema();
  std::vector<Eigen::Index> offset(schema.size() + 1, 0);
  for (AttrIndex a = 0; a < schema.size(); ++a) offset[a + 1] = offset[a] + static_cast<Eigen::Index>(schema.domain_size(a));
  const Eigen::Index n = static_cast<Eigen::Index>(data.n_rows());
  const Eigen::Index p = offset.back();

  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, p);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto row = data.row(static_cast<RowIndex>(r));
    for (AttrIndex a = 0; a < schema.size(); ++a) x(r, offset[a] + row[a]) = 1.0;
  }
  const Eigen::Map<const Eigen::VectorXd> target(y.data(), n);
  const Eigen::RowVectorXd x_mean = x.colwise().mean();
  const double y_mean = target.mean();
  const Eigen::MatrixXd xc = x.rowwise() - x_mean;
  const Eigen::VectorXd yc = target.array() - y_mean;

  // The intercept is left unpenalized by fitting on centered data.
  Eigen::MatrixXd gram = xc.transpose() * xc;
  gram.diagonal().array() += lambda;
  const Eigen::VectorXd w = gram.ldlt().solve(xc.transpose() * yc);

  intercept = y_mean - x_mean.dot(w);
  weights.assign(schema.size(), {});
  for (AttrIndex a = 0; a < schema.size(); ++a) {
    for (Code c = 0; c < schema.domain_size(a); ++c) weights[a].push_back(w(offset[a] + c));
  }
}

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& data, const std::vector<double>& y, std::size_t max_depth,
              std::vector<SurrogateModel::TreeNode>& nodes)
      : data_(data), y_(y), max_depth_(max_depth), nodes_(nodes) {}

  int build(std::vector<RowIndex> rows, std::size_t depth) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    Moments all;
    for (RowIndex r : rows) all.add(y_[r]);
    nodes_[id].value = all.sum / all.count;
    if (depth >= max_depth_ || rows.size() < 2) return id;

    // Best one-vs-rest category split by variance reduction; ties keep the
    // first candidate in (attribute, code) order.
    const Schema& schema = data_.schema();
    double best_gain = 1e-9 * std::max(1.0, all.sse());
    AttrIndex best_attr = 0;
    Code best_code = 0;
    bool found = false;
    for (AttrIndex a = 0; a < schema.size(); ++a) {
      std::vector<Moments> by_code(schema.domain_size(a));
      for (RowIndex r : rows) by_code[data_.at(r, a)].add(y_[r]);
      for (Code c = 0; c < by_code.size(); ++c) {
        const Moments& in = by_code[c];
        if (in.count == 0.0 || in.count == all.count) continue;
        Moments out{all.count - in.count, all.sum - in.sum, all.sum_sq - in.sum_sq};
        const double gain = all.sse() - in.sse() - out.sse();
        if (gain > best_gain) {
          best_gain = gain;
          best_attr = a;
          best_code = c;
          found = true;
        }
      }
    }
    if (!found) return id;

    std::vector<RowIndex> left;
    std::vector<RowIndex> right;
    for (RowIndex r : rows) (data_.at(r, best_attr) == best_code ? left : right).push_back(r);
    rows.clear();
    rows.shrink_to_fit();
    const int l = build(std::move(left), depth + 1);
    const int rr = build(std::move(right), depth + 1);
    nodes_[id].attr = best_attr;
    nodes_[id].code = best_code;
    nodes_[id].left = l;
    nodes_[id].right = rr;
    return id;
  }

 private:
  const Dataset& data_;
  const std::vector<double>& y_;
  std::size_t max_depth_;
  std::vector<SurrogateModel::TreeNode>& nodes_;
};

}  // namespace

double SurrogateModel::predict(std::span<const Code> row) const {
  if (kind_ == SurrogateKind::kRidgeLinear) {
    double out = intercept_;
    for (AttrIndex a = 0; a < weights_.size(); ++a) out += weights_[a][row[a]];
    return out;
  }
  int id = 0;
  while (!tree_[id].leaf()) id = row[tree_[id].attr] == tree_[id].code ? tree_[id].left : tree_[id].right;
  return tree_[id].value;
}

std::size_t SurrogateModel::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(tree_.begin(), tree_.end(), [](const TreeNode& n) { return n.leaf(); }));
}

std::size_t SurrogateModel::depth() const {
  if (tree_.empty()) return 0;
  std::function<std::size_t(int)> walk = [&](int id) -> std::size_t {
    if (tree_[id].leaf()) return 0;
    return 1 + std::max(walk(tree_[id].left), walk(tree_[id].right));
  };
  return walk(0);
}

SurrogateModel fit_surrogate(const Dataset& data, const Ranking& ranking, const SurrogateParams& params) {
  if (data.n_rows() < 2) throw Error(ErrorCode::kParameter, "a surrogate needs at least two rows");
  if (ranking.size() != data.n_rows()) throw Error(ErrorCode::kMalformedRanking, "ranking/dataset size mismatch");
  if (params.ridge_lambda < 0.0) throw Error(ErrorCode::kParameter, "ridge lambda must be non-negative");

  std::vector<double> y(data.n_rows());
  for (RowIndex r = 0; r < data.n_rows(); ++r) y[r] = static_cast<double>(ranking.position_of(r));
  Moments all;
  for (double v : y) all.add(v);
  const double mean = all.sum / all.count;

  SurrogateModel model;
  model.kind_ = params.kind;
  model.baseline_mse_ = all.sse() / all.count;

  if (all_rows_identical(data)) {
    model.warnings_.push_back("fit-degenerate: every row has the same values; using a constant model");
    model.intercept_ = mean;
    model.weights_.assign(data.n_attributes(), {});
    for (AttrIndex a = 0; a < data.n_attributes(); ++a) model.weights_[a].assign(data.schema().domain_size(a), 0.0);
    model.tree_.push_back({0, 0, -1, -1, mean});
  } else if (params.kind == SurrogateKind::kRidgeLinear) {
    fit_linear(data, y, params.ridge_lambda, model.intercept_, model.weights_);
  } else {
    std::vector<RowIndex> rows(data.n_rows());
    for (RowIndex r = 0; r < rows.size(); ++r) rows[r] = r;
    TreeBuilder(data, y, params.max_depth, model.tree_).build(std::move(rows), 0);
  }

  double sse = 0.0;
  for (RowIndex r = 0; r < data.n_rows(); ++r) {
    const double e = model.predict(data.row(r)) - y[r];
    sse += e * e;
  }
  model.training_mse_ = sse / static_cast<double>(data.n_rows());
  return model;
}

}  // namespace rankaudit
