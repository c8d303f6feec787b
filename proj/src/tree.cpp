#include "sevlab/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace sevlab {

namespace {

constexpr double kMinDecrease = 1e-12;

double impurity(SplitCriterion criterion, double w0, double w1) {
    const double w = w0 + w1;
    if (w <= 0.0) return 0.0;
    const double p1 = w1 / w;
    const double p0 = 1.0 - p1;
    if (criterion == SplitCriterion::gini) return 1.0 - p0 * p0 - p1 * p1;
    double h = 0.0;
    if (p0 > 0.0) h -= p0 * std::log(p0);
    if (p1 > 0.0) h -= p1 * std::log(p1);
    return h;
}

struct SplitChoice {
    int feature = -1;
    double threshold = 0.0;
    double decrease = 0.0; // weighted impurity decrease, absolute
    bool valid = false;
};

struct Builder {
    const Matrix& x;
    const Labels& y;
    const std::vector<double>& weights;
    TreeParams params;
    Rng& rng;
    std::vector<double>* importance;
    std::vector<TreeNode>& nodes;
    std::vector<bool> binary_col;

    // Scratch space reused across nodes.
    std::vector<std::pair<double, std::size_t>> sorted;

    SplitChoice best_threshold(const std::vector<std::size_t>& rows, std::size_t col,
                               double w0, double w1, double parent_imp) {
        SplitChoice out;
        out.feature = static_cast<int>(col);
        const double w = w0 + w1;

        if (params.random_thresholds) {
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            for (std::size_t r : rows) {
                const double v = x.at(r, col);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            if (!(hi > lo)) return out;
            const double t = lo + rng.uniform01() * (hi - lo);
            double lw0 = 0.0, lw1 = 0.0;
            std::size_t ln = 0;
            for (std::size_t r : rows) {
                if (x.at(r, col) <= t) {
                    ++ln;
                    if (y[r] == 1) lw1 += weights[r];
                    else lw0 += weights[r];
                }
            }
            const std::size_t rn = rows.size() - ln;
            if (ln < static_cast<std::size_t>(params.min_samples_leaf) ||
                rn < static_cast<std::size_t>(params.min_samples_leaf))
                return out;
            const double rw0 = w0 - lw0, rw1 = w1 - lw1;
            const double lw = lw0 + lw1, rw = rw0 + rw1;
            if (lw <= 0.0 || rw <= 0.0) return out;
            const double dec = w * parent_imp - lw * impurity(params.criterion, lw0, lw1) -
                               rw * impurity(params.criterion, rw0, rw1);
            if (dec > kMinDecrease) {
                out.threshold = t;
                out.decrease = dec;
                out.valid = true;
            }
            return out;
        }

        if (binary_col[col]) {
            double lw0 = 0.0, lw1 = 0.0;
            std::size_t ln = 0;
            for (std::size_t r : rows) {
                if (x.at(r, col) == 0.0) {
                    ++ln;
                    if (y[r] == 1) lw1 += weights[r];
                    else lw0 += weights[r];
                }
            }
            const std::size_t rn = rows.size() - ln;
            if (ln < static_cast<std::size_t>(params.min_samples_leaf) ||
                rn < static_cast<std::size_t>(params.min_samples_leaf))
                return out;
            const double rw0 = w0 - lw0, rw1 = w1 - lw1;
            const double lw = lw0 + lw1, rw = rw0 + rw1;
            if (lw <= 0.0 || rw <= 0.0) return out;
            const double dec = w * parent_imp - lw * impurity(params.criterion, lw0, lw1) -
                               rw * impurity(params.criterion, rw0, rw1);
            if (dec > kMinDecrease) {
                out.threshold = 0.5;
                out.decrease = dec;
                out.valid = true;
            }
            return out;
        }

        // Exact scan over sorted values.
        sorted.clear();
        for (std::size_t r : rows) sorted.push_back({x.at(r, col), r});
        std::sort(sorted.begin(), sorted.end());
        double lw0 = 0.0, lw1 = 0.0;
        for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
            const std::size_t r = sorted[i].second;
            if (y[r] == 1) lw1 += weights[r];
            else lw0 += weights[r];
            if (sorted[i].first == sorted[i + 1].first) continue;
            const std::size_t ln = i + 1;
            const std::size_t rn = sorted.size() - ln;
            if (ln < static_cast<std::size_t>(params.min_samples_leaf) ||
                rn < static_cast<std::size_t>(params.min_samples_leaf))
                continue;
            const double rw0 = w0 - lw0, rw1 = w1 - lw1;
            const double lw = lw0 + lw1, rw = rw0 + rw1;
            if (lw <= 0.0 || rw <= 0.0) continue;
            const double dec = w * parent_imp - lw * impurity(params.criterion, lw0, lw1) -
                               rw * impurity(params.criterion, rw0, rw1);
            if (dec > kMinDecrease && dec > out.decrease) {
                out.threshold = 0.5 * (sorted[i].first + sorted[i + 1].first);
                out.decrease = dec;
                out.valid = true;
            }
        }
        return out;
    }

    int build(std::vector<std::size_t> rows, int depth) {
        double w0 = 0.0, w1 = 0.0;
        for (std::size_t r : rows) {
            if (y[r] == 1) w1 += weights[r];
            else w0 += weights[r];
        }
        const double w = w0 + w1;
        TreeNode node;
        node.weight = w;
        node.p1 = w > 0.0 ? w1 / w : 0.0;
        node.impurity = impurity(params.criterion, w0, w1);
        const int id = static_cast<int>(nodes.size());
        nodes.push_back(node);

        if (depth >= params.max_depth || node.impurity <= 0.0 ||
            rows.size() < 2 * static_cast<std::size_t>(params.min_samples_leaf) ||
            rows.size() < 2)
            return id;

        // Candidate features, mtry at a time without replacement.
        const std::size_t d = x.cols();
        const std::size_t mtry = params.mtry == 0 ? d : std::min(params.mtry, d);
        const auto candidates = mtry == d
                                    ? [&] {
                                          std::vector<std::size_t> all(d);
                                          std::iota(all.begin(), all.end(), std::size_t{0});
                                          return all;
                                      }()
                                    : rng.sample_without_replacement(d, mtry);

        SplitChoice best;
        for (std::size_t col : candidates) {
            const SplitChoice c = best_threshold(rows, col, w0, w1, node.impurity);
            if (c.valid && (!best.valid || c.decrease > best.decrease)) best = c;
        }
        if (!best.valid) return id;

        std::vector<std::size_t> left, right;
        for (std::size_t r : rows) {
            if (x.at(r, static_cast<std::size_t>(best.feature)) <= best.threshold)
                left.push_back(r);
            else
                right.push_back(r);
        }
        if (left.empty() || right.empty()) return id;

        if (importance)
            (*importance)[static_cast<std::size_t>(best.feature)] += best.decrease;
        rows.clear();
        rows.shrink_to_fit();
        nodes[static_cast<std::size_t>(id)].feature = best.feature;
        nodes[static_cast<std::size_t>(id)].threshold = best.threshold;
        const int left_id = build(std::move(left), depth + 1);
        nodes[static_cast<std::size_t>(id)].left = left_id;
        const int right_id = build(std::move(right), depth + 1);
        nodes[static_cast<std::size_t>(id)].right = right_id;
        return id;
    }
};

} // namespace

void ClassificationTree::fit(const Matrix& x, const Labels& y,
                             const std::vector<double>& weights,
                             const std::vector<std::size_t>& rows, const TreeParams& params,
                             Rng& rng, std::vector<double>* importance,
                             const std::vector<bool>* binary_cols) {
    nodes_.clear();
    if (rows.empty()) fail(ErrorKind::EmptyMatrix, "tree fit on no rows");
    Builder builder{x, y, weights, params, rng, importance, nodes_, {}, {}};
    if (binary_cols) {
        builder.binary_col = *binary_cols;
    } else {
        builder.binary_col.resize(x.cols());
        for (std::size_t c = 0; c < x.cols(); ++c)
            builder.binary_col[c] = x.column_is_binary(c);
    }
    builder.build(rows, 0);
}

double ClassificationTree::predict_row(const double* row) const {
    int id = 0;
    while (nodes_[static_cast<std::size_t>(id)].feature >= 0) {
        const auto& n = nodes_[static_cast<std::size_t>(id)];
        id = row[n.feature] <= n.threshold ? n.left : n.right;
    }
    return nodes_[static_cast<std::size_t>(id)].p1;
}

} // namespace sevlab
