#pragma once

#include <cstdint>
#include <vector>

#include "sevlab/matrix.hpp"

namespace sevlab {

// Fully-connected ReLU network with a single logit output. Parameters are
// stored flat (per layer: weights row-major [out x in], then biases) so the
// gradient can be checked against finite differences.
struct MlpNet {
    std::vector<int> sizes; // input, hidden..., 1
    std::vector<double> params;

    static MlpNet make(int inputs, const std::vector<int>& hidden, std::uint64_t seed);

    std::size_t param_count() const { return params.size(); }

    // Logits for a batch of rows.
    std::vector<double> forward(const Matrix& x, const std::vector<std::size_t>& rows) const;

    // Mean weighted BCE over the given rows; gradient w.r.t. params written
    // to *grad when non-null.
    double loss_and_grad(const Matrix& x, const Labels& y,
                         const std::vector<double>& weights,
                         const std::vector<std::size_t>& rows,
                         std::vector<double>* grad) const;
};

struct MlpTrainParams {
    int epochs = 100;
    double lr = 1e-3;
    int batch_size = 64;
};

// Adam with seeded shuffling; returns the final full-data training loss.
double mlp_train(MlpNet& net, const Matrix& x, const Labels& y,
                 const std::vector<double>& weights, const MlpTrainParams& params,
                 std::uint64_t seed);

} // namespace sevlab
