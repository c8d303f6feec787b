#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sevlab/matrix.hpp"

namespace sevlab {

enum class BalanceTechnique {
    class_weight,
    random_over,
    random_under,
    combined,
    smote,
    kmeans_smote,
    adasyn,
    kernel_smote,
    nearmiss1,
};

const char* balance_technique_name(BalanceTechnique t);
BalanceTechnique balance_technique_from_name(const std::string& name);

struct BalanceParams {
    BalanceTechnique technique = BalanceTechnique::smote;
    int k_neighbors = 5;        // NearMiss-1 uses 3
    double target_ratio = 1.0;  // desired |class 1| / |class 0|
    double bandwidth = 0.05;    // kernel_smote flip probability
    int n_clusters = 8;         // kmeans_smote
    double hs_weight = 4.0;     // class_weight
    bool binarize = false;      // threshold synthetic rows at 0.5
    std::uint64_t seed = 0;
};

enum class Origin : std::uint8_t { original, duplicated, synthetic };

struct ResampledSet {
    Matrix x;
    Labels y;
    std::vector<Origin> origin;
    // Input row behind each original/duplicated row; SIZE_MAX for synthetic.
    std::vector<std::size_t> source_row;
};

// weight_i = hs_weight if y_i = 1 else 1.
std::vector<double> class_weights(const Labels& y, double hs_weight = 4.0);

ResampledSet random_oversample(const Matrix& x, const Labels& y, const BalanceParams& p);
ResampledSet random_undersample(const Matrix& x, const Labels& y, const BalanceParams& p);
ResampledSet combined_over_under(const Matrix& x, const Labels& y, const BalanceParams& p);
ResampledSet smote(const Matrix& x, const Labels& y, const BalanceParams& p);
ResampledSet kmeans_smote(const Matrix& x, const Labels& y, const BalanceParams& p);
ResampledSet adasyn(const Matrix& x, const Labels& y, const BalanceParams& p);
ResampledSet kernel_smote(const Matrix& x, const Labels& y, const BalanceParams& p);
ResampledSet nearmiss1(const Matrix& x, const Labels& y, const BalanceParams& p);

struct BalanceOutcome {
    ResampledSet set;
    std::vector<double> weights; // nonempty only for class_weight
};

// Dispatch on params.technique. class_weight returns the input rows verbatim
// plus per-row weights; every other technique resamples.
BalanceOutcome apply_balance(const Matrix& x, const Labels& y, const BalanceParams& p);

// Euclidean k-nearest neighbors of each query row among candidate rows
// (self excluded when a query index appears among the candidates).
// Ties resolve to the lower candidate row index.
std::vector<std::vector<std::size_t>> k_nearest(const Matrix& x,
                                                const std::vector<std::size_t>& queries,
                                                const std::vector<std::size_t>& candidates,
                                                std::size_t k);

} // namespace sevlab
