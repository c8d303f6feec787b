#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "sevlab/matrix.hpp"
#include "sevlab/tree.hpp"

namespace sevlab {

enum class ModelKind { logistic, bayes_logit, tree, random_forest, extra_trees, gbdt, mlp };
enum class Growth { level_wise, leaf_wise };
enum class SizePreset { base, large, xt };

const char* model_kind_name(ModelKind k);

struct Hyperparams {
    // logistic
    double logit_lr = 0.1;
    int logit_epochs = 500;
    double logit_l2 = 1e-4;
    // bayes_logit
    double prior_sd = 2.5;
    double intercept_prior_sd = 10.0;
    int mcmc_burn_in = 2000;
    int mcmc_kept = 8000;
    int mcmc_thin = 4;
    int map_epochs = 200;
    double target_accept = 0.30;
    // trees / forests
    int n_trees = 200;
    int max_depth = 12;
    int min_samples_leaf = 1;
    std::size_t mtry = 0; // 0 = sqrt(d) for forests, all for single trees
    bool bootstrap_rows = true; // random_forest only
    // gbdt
    int rounds = 100;
    double gbdt_lr = 0.1;
    int gbdt_max_depth = 6;
    int max_leaves = 31;
    double gbdt_lambda = 1.0;
    double min_child_hess = 1e-3;
    int max_bins = 64;
    // mlp
    std::vector<int> hidden = {64, 32};
    int mlp_epochs = 100;
    double mlp_lr = 1e-3;
    int batch_size = 64;
};

struct ModelSpec {
    ModelKind kind = ModelKind::logistic;
    SplitCriterion criterion = SplitCriterion::gini; // trees/forests
    Growth growth = Growth::level_wise;              // gbdt
    SizePreset preset = SizePreset::base;            // gbdt/mlp
    Hyperparams hp;
};

struct TrainConfig {
    std::uint64_t seed = 0;
    std::vector<double> weights; // empty = unweighted
};

struct TrainMeta {
    std::uint64_t seed = 0;
    int rounds = 0;
    double final_train_loss = 0.0;
    std::vector<double> round_losses; // gbdt: weighted log-loss after each round
    double mcmc_acceptance = 0.0;
    bool constant = false; // degenerate single-class fit
};

class ModelImpl {
  public:
    virtual ~ModelImpl() = default;
    virtual std::vector<double> predict(const Matrix& x) const = 0;
    virtual void save(nlohmann::json& out) const = 0;
};

class TrainedModel {
  public:
    TrainedModel() = default;
    TrainedModel(ModelSpec spec, std::size_t n_cols, std::shared_ptr<const ModelImpl> impl,
                 TrainMeta meta)
        : spec_(std::move(spec)), n_cols_(n_cols), impl_(std::move(impl)),
          meta_(std::move(meta)) {}

    // P(HS) per row, all values in [0, 1]. Throws ColumnMismatch when the
    // column layout differs from training.
    std::vector<double> predict_proba(const Matrix& x) const;

    const ModelSpec& spec() const { return spec_; }
    const TrainMeta& meta() const { return meta_; }
    std::size_t n_cols() const { return n_cols_; }
    const ModelImpl* impl() const { return impl_.get(); }

  private:
    ModelSpec spec_;
    std::size_t n_cols_ = 0;
    std::shared_ptr<const ModelImpl> impl_;
    TrainMeta meta_;
};

// Single-class training degenerates to a constant-probability model instead
// of throwing, so extreme balancing configurations never crash a matrix run.
TrainedModel train(const ModelSpec& spec, const Matrix& x, const Labels& y,
                   const TrainConfig& cfg);

Labels predict_label(const std::vector<double>& probs, double threshold = 0.5);

struct PosteriorSummary {
    // Index 0 is the intercept, then one entry per column (original scale).
    std::vector<double> mean;
    std::vector<double> sd;
    std::vector<double> q025;
    std::vector<double> q975;
    double acceptance_rate = 0.0;
};

PosteriorSummary posterior_summary(const TrainedModel& model);

nlohmann::json save_model(const TrainedModel& model);
TrainedModel load_model(const nlohmann::json& doc);

// The 12 report slots, in results-table order.
struct ModelSlot {
    std::string name;
    ModelSpec spec;
};

enum class RunPreset { standard, fast };

std::vector<ModelSlot> model_slots(RunPreset preset);
const ModelSlot& model_slot_by_name(const std::string& name, RunPreset preset);

} // namespace sevlab
