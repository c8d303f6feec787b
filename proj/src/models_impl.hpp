#pragma once

#include <vector>

#include "sevlab/logistic.hpp"
#include "sevlab/mlp.hpp"
#include "sevlab/models.hpp"
#include "sevlab/tree.hpp"

namespace sevlab::detail {

using nlohmann::json;

struct ConstantModel final : ModelImpl {
    double p = 0.5;
    std::vector<double> predict(const Matrix& x) const override {
        return std::vector<double>(x.rows(), p);
    }
    void save(json& out) const override;
};

struct LogisticModel final : ModelImpl {
    std::vector<double> beta; // [intercept, coefficients...]
    std::vector<double> predict(const Matrix& x) const override {
        return logistic_predict(x, beta);
    }
    void save(json& out) const override;
};

struct BayesLogitModel final : ModelImpl {
    // Column standardization applied before scoring.
    std::vector<double> mean;
    std::vector<double> sd;
    // Retained posterior draws, each [intercept, standardized coefficients...].
    std::vector<std::vector<double>> draws;
    double acceptance = 0.0;

    std::vector<double> predict(const Matrix& x) const override;
    void save(json& out) const override;
};

struct ForestModel final : ModelImpl {
    std::vector<ClassificationTree> trees;
    std::vector<double> predict(const Matrix& x) const override;
    void save(json& out) const override;
};

struct GbdtNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0; // leaf logit increment (learning rate applied)
};

struct GbdtModel final : ModelImpl {
    double base_logit = 0.0;
    std::vector<std::vector<GbdtNode>> trees;
    std::vector<double> predict(const Matrix& x) const override;
    std::vector<double> raw_logits(const Matrix& x) const;
    void save(json& out) const override;
};

struct MlpModel final : ModelImpl {
    MlpNet net;
    std::vector<double> predict(const Matrix& x) const override;
    void save(json& out) const override;
};

TrainedModel train_bayes_logit(const ModelSpec& spec, const Matrix& x, const Labels& y,
                               const std::vector<double>& weights, const TrainConfig& cfg);
TrainedModel train_forest(const ModelSpec& spec, const Matrix& x, const Labels& y,
                          const std::vector<double>& weights, const TrainConfig& cfg);
TrainedModel train_gbdt(const ModelSpec& spec, const Matrix& x, const Labels& y,
                        const std::vector<double>& weights, const TrainConfig& cfg);

} // namespace sevlab::detail
