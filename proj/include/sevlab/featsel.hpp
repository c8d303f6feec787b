#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "sevlab/matrix.hpp"

namespace sevlab {

enum class RankMethod { pearson, chi2, mutual_info, forest_importance, rfe_logistic };

const char* rank_method_name(RankMethod m);

struct FeatureRanking {
    RankMethod method;
    std::vector<double> scores;      // per column
    std::vector<std::size_t> order;  // all columns, best first, ties by index
};

// |Pearson r| between each column and the labels (phi coefficient on 0/1
// data). Constant columns score 0.
std::vector<double> pearson_scores(const Matrix& x, const Labels& y);

// Pearson chi-squared statistic of the 2x2 table (column vs label).
// Zero-expected cells contribute 0. Rejects fractional entries.
std::vector<double> chi2_scores(const Matrix& x, const Labels& y);

// Empirical mutual information in nats from the joint 2x2 frequency table,
// with 0*log 0 = 0. Rejects fractional entries.
std::vector<double> mutual_information_scores(const Matrix& x, const Labels& y);

struct ForestRankParams {
    int n_trees = 200;
    int max_depth = 12;
};

// Mean across trees of the total weighted Gini impurity decrease attributed
// to each column, normalized to sum to 1 over nonzero scores.
std::vector<double> forest_importance_scores(const Matrix& x, const Labels& y,
                                             const ForestRankParams& params,
                                             std::uint64_t seed);

FeatureRanking ranking_from_scores(RankMethod method, std::vector<double> scores);

struct RfeParams {
    std::size_t step = 1;        // columns removed per round (clamped)
    double step_frac = 0.0;      // when > 0, step = max(1, frac * surviving)
    int fit_epochs = 80;
    double fit_lr = 0.5;
};

// Repeatedly fits logistic regression on standardized surviving columns and
// drops the ones with the smallest |coefficient|. Last survivors rank first.
FeatureRanking rfe_logistic_ranking(const Matrix& x, const Labels& y,
                                    const RfeParams& params, std::uint64_t seed);

std::vector<std::size_t> top_k(const FeatureRanking& ranking, std::size_t k = 50);

struct SelectionResult {
    std::set<std::size_t> selected;
    std::map<std::size_t, std::vector<RankMethod>> provenance;
};

SelectionResult merge_union(const std::vector<std::pair<RankMethod, std::vector<std::size_t>>>& selections);

} // namespace sevlab
