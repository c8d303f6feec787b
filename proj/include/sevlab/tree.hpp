#pragma once

#include <cstdint>
#include <vector>

#include "sevlab/matrix.hpp"
#include "sevlab/rng.hpp"

namespace sevlab {

enum class SplitCriterion { gini, entropy };

struct TreeNode {
    int feature = -1; // -1 for leaves
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double p1 = 0.0;       // weighted class-1 fraction at this node
    double weight = 0.0;   // total sample weight reaching this node
    double impurity = 0.0; // criterion value at this node
};

struct TreeParams {
    SplitCriterion criterion = SplitCriterion::gini;
    int max_depth = 12;
    int min_samples_leaf = 1;
    std::size_t mtry = 0;          // features tried per node; 0 = all
    bool random_thresholds = false; // extra-trees style: one uniform threshold per feature
};

// CART-style classification tree on weighted rows. Splits are only accepted
// when the weighted child impurity is strictly below the parent's.
class ClassificationTree {
  public:
    // binary_cols, when provided, marks columns holding only 0/1 values so
    // the builder can skip per-node sorting; callers fitting many trees on
    // one matrix should precompute it once.
    void fit(const Matrix& x, const Labels& y, const std::vector<double>& weights,
             const std::vector<std::size_t>& rows, const TreeParams& params, Rng& rng,
             std::vector<double>* importance = nullptr,
             const std::vector<bool>* binary_cols = nullptr);

    double predict_row(const double* row) const;
    const std::vector<TreeNode>& nodes() const { return nodes_; }
    void set_nodes(std::vector<TreeNode> nodes) { nodes_ = std::move(nodes); }

  private:
    std::vector<TreeNode> nodes_;
};

} // namespace sevlab
