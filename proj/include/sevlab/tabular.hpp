#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sevlab/matrix.hpp"
#include "sevlab/schema.hpp"

namespace sevlab {

struct SplitConfig {
    double train_frac = 0.7;
    int k_folds = 5;
    std::uint64_t seed = 0;
};

// Drops features with missing fraction > drop_threshold, mode-imputes those
// with missing fraction <= impute_threshold (ties to the lowest category
// code), and rejects anything in between.
RawTable apply_missing_policy(const RawTable& table, double drop_threshold = 0.5,
                              double impute_threshold = 0.1);

// One column per (feature, category) pair in schema order; SEV is returned
// as labels, never encoded.
std::pair<Matrix, std::optional<Labels>> one_hot_encode(const RawTable& table);

// Product columns of unordered base-column pairs whose absolute correlation
// with the labels exceeds min_abs_r. Constant products are never selected.
// The result is sorted by canonical parent order, so it does not depend on
// the base column order.
std::vector<ColumnId> gated_interactions(const Matrix& matrix, const Labels& labels,
                                         double min_abs_r = 0.40);

// Appends the given product columns (chosen by gated_interactions, possibly
// on a different row subset) to a matrix with the same base columns.
Matrix append_interactions(const Matrix& matrix, const std::vector<ColumnId>& ids);

// gate + append in one step.
Matrix generate_interactions(const Matrix& matrix, const Labels& labels,
                             double min_abs_r = 0.40);

struct SplitResult {
    Matrix train_x;
    Labels train_y;
    Matrix test_x;
    Labels test_y;
    std::vector<std::size_t> train_idx;
    std::vector<std::size_t> test_idx;
};

// Per class c, train receives exactly floor(train_frac * n_c) members chosen
// uniformly under the seed; the remainder go to test. Row order within each
// output is a seed-deterministic permutation.
SplitResult stratified_split(const Matrix& x, const Labels& y, const SplitConfig& cfg);

struct Fold {
    std::vector<std::size_t> train_idx;
    std::vector<std::size_t> valid_idx;
};

// Folds partition all indices; per class, fold sizes differ by at most one.
std::vector<Fold> stratified_kfold(std::size_t n_rows, const Labels& y,
                                   const SplitConfig& cfg);

} // namespace sevlab
