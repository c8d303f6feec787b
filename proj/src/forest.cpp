#include <cmath>
#include <numeric>

#include "sevlab/rng.hpp"
#include "models_impl.hpp"

namespace sevlab::detail {

std::vector<double> ForestModel::predict(const Matrix& x) const {
    std::vector<double> out(x.rows(), 0.0);
    for (const auto& tree : trees)
        for (std::size_t i = 0; i < x.rows(); ++i) out[i] += tree.predict_row(x.row(i));
    for (double& p : out) p /= static_cast<double>(trees.size());
    return out;
}

TrainedModel train_forest(const ModelSpec& spec, const Matrix& x, const Labels& y,
                          const std::vector<double>& weights, const TrainConfig& cfg) {
    const auto& hp = spec.hp;
    const std::size_t n = x.rows();

    TreeParams tp;
    tp.criterion = spec.criterion;
    tp.max_depth = hp.max_depth;
    tp.min_samples_leaf = hp.min_samples_leaf;
    tp.random_thresholds = spec.kind == ModelKind::extra_trees;
    const bool single = spec.kind == ModelKind::tree;
    if (single) {
        tp.mtry = hp.mtry; // 0 = all features
    } else {
        tp.mtry = hp.mtry != 0
                      ? hp.mtry
                      : static_cast<std::size_t>(std::max(
                            1.0, std::floor(std::sqrt(static_cast<double>(x.cols())))));
    }
    const int n_trees = single ? 1 : hp.n_trees;
    const bool bootstrap = spec.kind == ModelKind::random_forest && hp.bootstrap_rows;

    std::vector<bool> binary_cols(x.cols());
    for (std::size_t c = 0; c < x.cols(); ++c) binary_cols[c] = x.column_is_binary(c);

    auto impl = std::make_shared<ForestModel>();
    impl->trees.resize(static_cast<std::size_t>(n_trees));
    std::vector<std::size_t> all_rows(n);
    std::iota(all_rows.begin(), all_rows.end(), std::size_t{0});
    for (int t = 0; t < n_trees; ++t) {
        Rng rng(mix64(cfg.seed, static_cast<std::uint64_t>(t), 0x73EEULL));
        std::vector<std::size_t> rows;
        if (bootstrap) {
            rows.resize(n);
            for (std::size_t i = 0; i < n; ++i) rows[i] = rng.index(n);
        } else {
            rows = all_rows;
        }
        impl->trees[static_cast<std::size_t>(t)].fit(x, y, weights, rows, tp, rng, nullptr,
                                                     &binary_cols);
    }

    TrainMeta meta;
    meta.seed = cfg.seed;
    meta.rounds = n_trees;
    return TrainedModel(spec, x.cols(), std::move(impl), meta);
}

} // namespace sevlab::detail
