#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sevlab/balance.hpp"
#include "sevlab/featsel.hpp"
#include "sevlab/matrix.hpp"
#include "sevlab/metrics.hpp"
#include "sevlab/models.hpp"
#include "sevlab/tabular.hpp"

namespace sevlab {

enum class SelectionKind {
    none,
    pearson,
    forest_importance,
    rfe,
    chi2,
    mutual_info,
    merged_top50,
};

const char* selection_label(SelectionKind s); // results-table wording

struct DatasetConfig {
    int id = 0; // 1..19
    SelectionKind selection = SelectionKind::none;
    std::optional<BalanceParams> balancing;
    std::string unsupported; // nonempty for accepted-but-unsupported slots
    std::string balancing_label = "None";
};

struct ExperimentPlan {
    std::vector<DatasetConfig> datasets;
    std::vector<ModelSlot> models;
    SplitConfig split;
    std::size_t top_k = 50;
    double interaction_min_abs_r = 0.40;
    RunPreset preset = RunPreset::standard;
    bool mimic_paper_leakage = false; // rank/gate on the full dataset, as published
    bool cv_before_balance = false;   // balance inside each fold instead
};

// The 19 training-dataset configurations plus the 12 model slots.
ExperimentPlan plan_from_table6(const SplitConfig& split,
                                RunPreset preset = RunPreset::standard);

struct CvSummary {
    MetricsReport mean;
    MetricsReport sd;
    int folds = 0;
};

struct CellResult {
    int dataset_id = 0;
    std::string model_name;
    std::string selection_label;
    std::string balancing_label;
    std::string status = "ok"; // "ok" or "skipped"
    std::string skip_reason;
    MetricsReport test_metrics;
    CvSummary cv;
};

struct ResultsTable {
    std::vector<CellResult> cells;
    std::uint64_t seed = 0;
    std::string data_fingerprint;
    std::string config_hash;

    bool operator==(const ResultsTable& other) const;
};

// Column subsets per selection kind, resolved once per run on the ranking
// base (training split by default, full data under mimic_paper_leakage).
struct ResolvedSelections {
    std::vector<std::size_t> columns[7]; // indexed by SelectionKind
};

ResolvedSelections resolve_selections(const Matrix& x, const Labels& y,
                                      std::size_t top_k, std::uint64_t seed);

// One (training dataset, model) cell: restrict columns, balance the training
// rows only, cross-validate, fit, and score the untouched test set.
CellResult run_cell(const DatasetConfig& cfg, const ModelSlot& slot,
                    const Matrix& train_x, const Labels& train_y,
                    const Matrix& test_x, const Labels& test_y,
                    const ResolvedSelections& selections, const SplitConfig& split,
                    bool cv_before_balance, std::uint64_t seed);

// Executes every plan cell with a per-cell seed derived from
// (seed, dataset id, model slot), so results are independent of worker
// count and scheduling.
ResultsTable run_matrix(const ExperimentPlan& plan, const Matrix& x, const Labels& y,
                        int workers, std::uint64_t seed);

enum class ReportFormat { csv, markdown, json };

std::string render_results(const ResultsTable& table, ReportFormat format);
void emit_results(const ResultsTable& table, ReportFormat format, const std::string& path);
ResultsTable results_from_json(const nlohmann::json& doc);
nlohmann::json results_to_json(const ResultsTable& table);

struct OverlapReport {
    MetricsReport balanced_pool;
    MetricsReport standard;
    long pool_ls = 0;
    long pool_hs = 0;
};

// Arm A undersamples the full dataset with NearMiss-1 before splitting, arm B
// runs the ordinary pipeline on the NearMiss-1 training configuration; both
// use the Bayesian logit slot.
OverlapReport overlap_experiment(const Matrix& x, const Labels& y, const SplitConfig& split,
                                 RunPreset preset, std::uint64_t seed);

} // namespace sevlab
