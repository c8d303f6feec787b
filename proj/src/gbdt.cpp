#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "sevlab/rng.hpp"
#include "models_impl.hpp"

namespace sevlab::detail {

namespace {

// Per-feature quantile binning. Bin b covers values in
// (upper[b-1], upper[b]]; thresholds for splits fall between bin uppers.
struct Binner {
    std::vector<std::vector<double>> uppers;     // per feature, ascending
    std::vector<std::vector<double>> thresholds; // split value after bin b
    std::vector<int> offsets;                    // flat histogram layout
    int total_bins = 0;

    void build(const Matrix& x, int max_bins) {
        const std::size_t d = x.cols();
        uppers.resize(d);
        thresholds.resize(d);
        offsets.resize(d + 1, 0);
        std::vector<double> values;
        for (std::size_t j = 0; j < d; ++j) {
            values.clear();
            for (std::size_t i = 0; i < x.rows(); ++i) values.push_back(x.at(i, j));
            std::sort(values.begin(), values.end());
            values.erase(std::unique(values.begin(), values.end()), values.end());
            auto& ub = uppers[j];
            if (static_cast<int>(values.size()) <= max_bins) {
                ub = values;
            } else {
                ub.reserve(static_cast<std::size_t>(max_bins));
                for (int b = 1; b <= max_bins; ++b) {
                    const std::size_t pos =
                        std::min(values.size() - 1,
                                 static_cast<std::size_t>(
                                     static_cast<double>(b) * values.size() / max_bins) -
                                     1);
                    if (ub.empty() || values[pos] != ub.back()) ub.push_back(values[pos]);
                }
                ub.back() = values.back();
            }
            // Splitting after bin b sends "value <= uppers[b]" left, which is
            // exactly the set of rows coded into bins 0..b.
            thresholds[j] = ub;
            offsets[j + 1] = offsets[j] + static_cast<int>(ub.size());
        }
        total_bins = offsets[d];
    }

    int bin_of(std::size_t feature, double v) const {
        const auto& ub = uppers[feature];
        const auto it = std::lower_bound(ub.begin(), ub.end(), v);
        return static_cast<int>(std::min<std::ptrdiff_t>(it - ub.begin(),
                                                         static_cast<std::ptrdiff_t>(ub.size()) - 1));
    }

    int n_bins(std::size_t feature) const { return static_cast<int>(uppers[feature].size()); }
};

struct SplitPlan {
    int feature = -1;
    int bin = -1; // last bin that goes left
    double threshold = 0.0;
    double gain = 0.0;
    double left_g = 0.0, left_h = 0.0;
    double right_g = 0.0, right_h = 0.0;
    bool valid = false;
};

struct NodeState {
    std::vector<std::uint32_t> rows;
    double sum_g = 0.0;
    double sum_h = 0.0;
    int node_id = -1;
    int depth = 0;
    SplitPlan plan;
};

struct TreeBuildCtx {
    const Binner& binner;
    const std::vector<std::uint16_t>& codes; // row-major bin codes
    std::size_t d;
    const std::vector<double>& grad;
    const std::vector<double>& hess;
    double lambda;
    double min_child_hess;
    bool random_thresholds;
    Rng& rng;
    std::vector<double> hist_g;
    std::vector<double> hist_h;

    double leaf_objective(double g, double h) const { return -0.5 * g * g / (h + lambda); }

    void find_best_split(NodeState& node) {
        node.plan = SplitPlan{};
        if (node.rows.size() < 2) return;
        hist_g.assign(static_cast<std::size_t>(binner.total_bins), 0.0);
        hist_h.assign(static_cast<std::size_t>(binner.total_bins), 0.0);
        for (std::uint32_t r : node.rows) {
            const std::uint16_t* code_row = codes.data() + static_cast<std::size_t>(r) * d;
            const double g = grad[r];
            const double h = hess[r];
            for (std::size_t j = 0; j < d; ++j) {
                const std::size_t slot =
                    static_cast<std::size_t>(binner.offsets[j]) + code_row[j];
                hist_g[slot] += g;
                hist_h[slot] += h;
            }
        }
        const double parent_obj = leaf_objective(node.sum_g, node.sum_h);
        for (std::size_t j = 0; j < d; ++j) {
            const int nb = binner.n_bins(j);
            if (nb < 2) continue;
            const std::size_t base = static_cast<std::size_t>(binner.offsets[j]);
            int lo = 0, hi = nb - 2; // candidate "last left bin" range
            if (random_thresholds) {
                // Extra-trees flavor: a single random boundary per feature.
                lo = hi = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(nb - 1)));
            }
            double lg = 0.0, lh = 0.0;
            for (int b = 0; b <= hi; ++b) {
                lg += hist_g[base + static_cast<std::size_t>(b)];
                lh += hist_h[base + static_cast<std::size_t>(b)];
                if (b < lo) continue;
                const double rg = node.sum_g - lg;
                const double rh = node.sum_h - lh;
                if (lh < min_child_hess || rh < min_child_hess) continue;
                const double gain =
                    parent_obj - leaf_objective(lg, lh) - leaf_objective(rg, rh);
                if (gain > 1e-12 && gain > node.plan.gain) {
                    node.plan.feature = static_cast<int>(j);
                    node.plan.bin = b;
                    node.plan.threshold = binner.thresholds[j][static_cast<std::size_t>(b)];
                    node.plan.gain = gain;
                    node.plan.left_g = lg;
                    node.plan.left_h = lh;
                    node.plan.right_g = rg;
                    node.plan.right_h = rh;
                    node.plan.valid = true;
                }
            }
        }
    }
};

} // namespace

std::vector<double> GbdtModel::raw_logits(const Matrix& x) const {
    std::vector<double> out(x.rows(), base_logit);
    for (const auto& tree : trees) {
        for (std::size_t i = 0; i < x.rows(); ++i) {
            const double* row = x.row(i);
            int id = 0;
            while (tree[static_cast<std::size_t>(id)].feature >= 0) {
                const auto& n = tree[static_cast<std::size_t>(id)];
                id = row[n.feature] <= n.threshold ? n.left : n.right;
            }
            out[i] += tree[static_cast<std::size_t>(id)].value;
        }
    }
    return out;
}

std::vector<double> GbdtModel::predict(const Matrix& x) const {
    auto out = raw_logits(x);
    for (double& z : out) z = sigmoid(z);
    return out;
}

TrainedModel train_gbdt(const ModelSpec& spec, const Matrix& x, const Labels& y,
                        const std::vector<double>& weights, const TrainConfig& cfg) {
    const auto& hp = spec.hp;
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();

    Binner binner;
    binner.build(x, hp.max_bins);
    std::vector<std::uint16_t> codes(n * d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j)
            codes[i * d + j] = static_cast<std::uint16_t>(binner.bin_of(j, x.at(i, j)));

    double total_w = 0.0, pos_w = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        total_w += weights[i];
        if (y[i] == 1) pos_w += weights[i];
    }
    const double prior = std::clamp(pos_w / total_w, 1e-6, 1.0 - 1e-6);

    auto impl = std::make_shared<GbdtModel>();
    impl->base_logit = std::log(prior / (1.0 - prior));

    std::vector<double> logits(n, impl->base_logit);
    std::vector<double> grad(n), hess(n);
    auto weighted_logloss = [&]() {
        double loss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double z = logits[i];
            const double sp =
                z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
            loss += weights[i] * (sp - (y[i] == 1 ? z : 0.0));
        }
        return loss / total_w;
    };

    TrainMeta meta;
    meta.seed = cfg.seed;
    Rng rng(mix64(cfg.seed, 0x6BD7ULL));
    TreeBuildCtx ctx{binner, codes,  d,   grad, hess, hp.gbdt_lambda, hp.min_child_hess,
                     spec.preset == SizePreset::xt, rng, {},   {}};

    const int max_leaves = hp.max_leaves;
    const int max_depth = spec.growth == Growth::level_wise ? hp.gbdt_max_depth : 48;

    for (int round = 0; round < hp.rounds; ++round) {
        for (std::size_t i = 0; i < n; ++i) {
            const double p = sigmoid(logits[i]);
            grad[i] = weights[i] * (p - (y[i] == 1 ? 1.0 : 0.0));
            hess[i] = std::max(weights[i] * p * (1.0 - p), 1e-16);
        }

        std::vector<GbdtNode> tree(1);
        NodeState root;
        root.rows.resize(n);
        std::iota(root.rows.begin(), root.rows.end(), std::uint32_t{0});
        for (std::size_t i = 0; i < n; ++i) {
            root.sum_g += grad[i];
            root.sum_h += hess[i];
        }
        root.node_id = 0;
        ctx.find_best_split(root);

        auto apply_split = [&](NodeState& node, std::vector<NodeState>& out_children) {
            const auto& plan = node.plan;
            auto& parent = tree[static_cast<std::size_t>(node.node_id)];
            parent.feature = plan.feature;
            parent.threshold = plan.threshold;
            NodeState left, right;
            left.depth = right.depth = node.depth + 1;
            for (std::uint32_t r : node.rows) {
                const int code =
                    codes[static_cast<std::size_t>(r) * d + static_cast<std::size_t>(plan.feature)];
                (code <= plan.bin ? left.rows : right.rows).push_back(r);
            }
            left.sum_g = plan.left_g;
            left.sum_h = plan.left_h;
            right.sum_g = plan.right_g;
            right.sum_h = plan.right_h;
            parent.left = static_cast<int>(tree.size());
            tree.emplace_back();
            parent.right = static_cast<int>(tree.size());
            tree.emplace_back();
            left.node_id = parent.left;
            right.node_id = parent.right;
            node.rows.clear();
            node.rows.shrink_to_fit();
            out_children.push_back(std::move(left));
            out_children.push_back(std::move(right));
        };

        auto finalize_leaf = [&](const NodeState& node) {
            tree[static_cast<std::size_t>(node.node_id)].value =
                -hp.gbdt_lr * node.sum_g / (node.sum_h + hp.gbdt_lambda);
        };

        if (spec.growth == Growth::level_wise) {
            std::vector<NodeState> frontier;
            frontier.push_back(std::move(root));
            while (!frontier.empty()) {
                std::vector<NodeState> next;
                for (auto& node : frontier) {
                    if (node.depth >= max_depth || !node.plan.valid) {
                        finalize_leaf(node);
                        continue;
                    }
                    std::vector<NodeState> children;
                    apply_split(node, children);
                    for (auto& c : children) {
                        ctx.find_best_split(c);
                        next.push_back(std::move(c));
                    }
                }
                frontier = std::move(next);
            }
        } else {
            // Leaf-wise: repeatedly split the pending leaf with the largest
            // gain until the leaf budget runs out.
            std::vector<NodeState> pending;
            pending.push_back(std::move(root));
            int leaves = 1;
            while (leaves < max_leaves) {
                int best = -1;
                for (std::size_t i = 0; i < pending.size(); ++i) {
                    const auto& node = pending[i];
                    if (!node.plan.valid || node.depth >= max_depth) continue;
                    if (best < 0 ||
                        node.plan.gain > pending[static_cast<std::size_t>(best)].plan.gain ||
                        (node.plan.gain == pending[static_cast<std::size_t>(best)].plan.gain &&
                         node.node_id < pending[static_cast<std::size_t>(best)].node_id))
                        best = static_cast<int>(i);
                }
                if (best < 0) break;
                NodeState node = std::move(pending[static_cast<std::size_t>(best)]);
                pending.erase(pending.begin() + best);
                std::vector<NodeState> children;
                apply_split(node, children);
                ++leaves;
                for (auto& c : children) {
                    ctx.find_best_split(c);
                    pending.push_back(std::move(c));
                }
            }
            for (auto& node : pending) finalize_leaf(node);
        }

        // Advance the ensemble prediction with the new tree.
        for (std::size_t i = 0; i < n; ++i) {
            int id = 0;
            while (tree[static_cast<std::size_t>(id)].feature >= 0) {
                const auto& node = tree[static_cast<std::size_t>(id)];
                id = x.at(i, static_cast<std::size_t>(node.feature)) <= node.threshold
                         ? node.left
                         : node.right;
            }
            logits[i] += tree[static_cast<std::size_t>(id)].value;
        }
        impl->trees.push_back(std::move(tree));
        meta.round_losses.push_back(weighted_logloss());
    }
    meta.rounds = hp.rounds;
    meta.final_train_loss = meta.round_losses.empty() ? weighted_logloss()
                                                      : meta.round_losses.back();
    return TrainedModel(spec, x.cols(), std::move(impl), meta);
}

} // namespace sevlab::detail
