#include "sevlab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "sevlab/csv.hpp"
#include "sevlab/log.hpp"
#include "sevlab/rng.hpp"

namespace sevlab {

using nlohmann::json;

const char* selection_label(SelectionKind s) {
    switch (s) {
        case SelectionKind::none: return "None";
        case SelectionKind::pearson: return "Pearson's Correlation";
        case SelectionKind::forest_importance: return "Feature Importance Using Random Forest";
        case SelectionKind::rfe: return "Recursive Feature Elimination Using Logistic Regression";
        case SelectionKind::chi2: return "Chi-squared Test Statistics";
        case SelectionKind::mutual_info: return "Discriminative Mutual Information";
        case SelectionKind::merged_top50: return "Top Ranked Features Merged from Various Feature Selection Methods";
    }
    return "?";
}

ExperimentPlan plan_from_table6(const SplitConfig& split, RunPreset preset) {
    ExperimentPlan plan;
    plan.split = split;
    plan.preset = preset;
    plan.models = model_slots(preset);

    auto balance = [](BalanceTechnique t) {
        BalanceParams p;
        p.technique = t;
        if (t == BalanceTechnique::nearmiss1) p.k_neighbors = 3;
        return p;
    };
    auto add = [&plan](int id, SelectionKind sel, std::optional<BalanceParams> bal,
                       std::string label, std::string unsupported = {}) {
        DatasetConfig cfg;
        cfg.id = id;
        cfg.selection = sel;
        cfg.balancing = std::move(bal);
        cfg.balancing_label = std::move(label);
        cfg.unsupported = std::move(unsupported);
        plan.datasets.push_back(std::move(cfg));
    };
    const auto merged = SelectionKind::merged_top50;
    add(1, SelectionKind::none, std::nullopt, "None");
    add(2, SelectionKind::none, balance(BalanceTechnique::class_weight),
        "High Severity Weight = 4");
    add(3, SelectionKind::pearson, std::nullopt, "None");
    add(4, SelectionKind::forest_importance, std::nullopt, "None");
    add(5, SelectionKind::rfe, std::nullopt, "None");
    add(6, SelectionKind::chi2, std::nullopt, "None");
    add(7, SelectionKind::mutual_info, std::nullopt, "None");
    add(8, merged, std::nullopt, "None");
    add(9, merged, balance(BalanceTechnique::class_weight), "High Severity Weight = 4");
    add(10, merged, balance(BalanceTechnique::smote), "Oversampling Using SMOTE");
    add(11, merged, balance(BalanceTechnique::kmeans_smote), "Oversampling Using Kmeans-SMOTE");
    add(12, merged, balance(BalanceTechnique::adasyn), "Oversampling Using ADASYN");
    add(13, merged, balance(BalanceTechnique::random_over),
        "Oversampling Using Random-OverSampler");
    add(14, merged, balance(BalanceTechnique::kernel_smote),
        "Oversampling Using Kernel-based Synthetic Minority Oversampling (K-SMOTE)");
    add(15, merged, std::nullopt, "Oversampling Using WGAN-GP", "WGAN-GP");
    add(16, merged, std::nullopt, "Oversampling Using Conditional WGAN-GP",
        "Conditional WGAN-GP");
    add(17, merged, balance(BalanceTechnique::nearmiss1), "Undersampling Using NearMiss 1");
    add(18, merged, balance(BalanceTechnique::random_under),
        "Undersampling Using Random-UnderSampler");
    add(19, merged, balance(BalanceTechnique::combined),
        "Combination of Random-OverSampler and Random-UnderSampler");
    return plan;
}

ResolvedSelections resolve_selections(const Matrix& x, const Labels& y, std::size_t top_k,
                                      std::uint64_t seed) {
    ResolvedSelections out;
    std::vector<std::size_t> all(x.cols());
    for (std::size_t j = 0; j < x.cols(); ++j) all[j] = j;
    out.columns[static_cast<int>(SelectionKind::none)] = all;

    const auto pearson = ranking_from_scores(RankMethod::pearson, pearson_scores(x, y));
    const auto chi2 = ranking_from_scores(RankMethod::chi2, chi2_scores(x, y));
    const auto mi =
        ranking_from_scores(RankMethod::mutual_info, mutual_information_scores(x, y));
    ForestRankParams fp;
    const auto forest = ranking_from_scores(
        RankMethod::forest_importance,
        forest_importance_scores(x, y, fp, mix64(seed, 0xF1F1ULL)));
    RfeParams rp;
    // Full single-column elimination is quadratic in width; a 20% step keeps
    // the resolved ranking stable at a fraction of the fits.
    rp.step_frac = 0.20;
    const auto rfe = rfe_logistic_ranking(x, y, rp, mix64(seed, 0x4FEULL));

    auto assign = [&](SelectionKind kind, const FeatureRanking& r) {
        auto picked = sevlab::top_k(r, top_k);
        std::sort(picked.begin(), picked.end());
        out.columns[static_cast<int>(kind)] = std::move(picked);
    };
    assign(SelectionKind::pearson, pearson);
    assign(SelectionKind::chi2, chi2);
    assign(SelectionKind::mutual_info, mi);
    assign(SelectionKind::forest_importance, forest);
    assign(SelectionKind::rfe, rfe);

    const auto merged = merge_union({
        {RankMethod::pearson, sevlab::top_k(pearson, top_k)},
        {RankMethod::forest_importance, sevlab::top_k(forest, top_k)},
        {RankMethod::rfe_logistic, sevlab::top_k(rfe, top_k)},
        {RankMethod::chi2, sevlab::top_k(chi2, top_k)},
        {RankMethod::mutual_info, sevlab::top_k(mi, top_k)},
    });
    out.columns[static_cast<int>(SelectionKind::merged_top50)]
        .assign(merged.selected.begin(), merged.selected.end());
    return out;
}

namespace {

Labels subset_labels(const Labels& y, const std::vector<std::size_t>& idx) {
    Labels out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(y[i]);
    return out;
}

MetricsReport evaluate_model(const TrainedModel& model, const Matrix& x, const Labels& y) {
    const auto probs = model.predict_proba(x);
    const auto preds = predict_label(probs);
    MetricsReport r = classification_metrics(confusion(y, preds));
    bool both = false, any0 = false, any1 = false;
    for (int v : y) {
        any0 |= v == 0;
        any1 |= v == 1;
    }
    both = any0 && any1;
    r.roc_auc = both ? roc_auc(y, probs) : 0.0;
    return r;
}

struct Accum {
    double sum = 0.0;
    double sum2 = 0.0;
    int n = 0;
    void add(double v) {
        sum += v;
        sum2 += v * v;
        ++n;
    }
    double mean() const { return n ? sum / n : 0.0; }
    double sd() const {
        if (n < 2) return 0.0;
        const double m = mean();
        return std::sqrt(std::max(0.0, (sum2 - n * m * m) / (n - 1)));
    }
};

CvSummary summarize_folds(const std::vector<MetricsReport>& reports) {
    Accum acc[8];
    for (const auto& r : reports) {
        const double vals[8] = {r.accuracy, r.ls_precision, r.hs_precision, r.ls_recall,
                                r.hs_recall, r.ls_f1, r.hs_f1, r.roc_auc};
        for (int i = 0; i < 8; ++i) acc[i].add(vals[i]);
    }
    CvSummary cv;
    cv.folds = static_cast<int>(reports.size());
    double* means[8] = {&cv.mean.accuracy, &cv.mean.ls_precision, &cv.mean.hs_precision,
                        &cv.mean.ls_recall, &cv.mean.hs_recall, &cv.mean.ls_f1,
                        &cv.mean.hs_f1, &cv.mean.roc_auc};
    double* sds[8] = {&cv.sd.accuracy, &cv.sd.ls_precision, &cv.sd.hs_precision,
                      &cv.sd.ls_recall, &cv.sd.hs_recall, &cv.sd.ls_f1, &cv.sd.hs_f1,
                      &cv.sd.roc_auc};
    for (int i = 0; i < 8; ++i) {
        *means[i] = acc[i].mean();
        *sds[i] = acc[i].sd();
    }
    return cv;
}

std::vector<double> subset_weights(const std::vector<double>& weights,
                                   const std::vector<std::size_t>& idx) {
    if (weights.empty()) return {};
    std::vector<double> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(weights[i]);
    return out;
}

} // namespace

CellResult run_cell(const DatasetConfig& cfg, const ModelSlot& slot, const Matrix& train_x,
                    const Labels& train_y, const Matrix& test_x, const Labels& test_y,
                    const ResolvedSelections& selections, const SplitConfig& split,
                    bool cv_before_balance, std::uint64_t seed) {
    CellResult cell;
    cell.dataset_id = cfg.id;
    cell.model_name = slot.name;
    cell.selection_label = selection_label(cfg.selection);
    cell.balancing_label = cfg.balancing_label;
    if (!cfg.unsupported.empty()) {
        cell.status = "skipped";
        cell.skip_reason = cfg.unsupported;
        return cell;
    }

    try {
        const auto& cols = selections.columns[static_cast<int>(cfg.selection)];
        const Matrix tr_x = cfg.selection == SelectionKind::none ? train_x
                                                                 : train_x.select_columns(cols);
        const Matrix te_x = cfg.selection == SelectionKind::none ? test_x
                                                                 : test_x.select_columns(cols);

        BalanceParams bal;
        bool has_balance = cfg.balancing.has_value();
        if (has_balance) {
            bal = *cfg.balancing;
            bal.seed = mix64(seed, 0xBA1ULL);
        }

        // Balance the training rows only; the test set is never touched.
        Matrix fit_x = tr_x;
        Labels fit_y = train_y;
        std::vector<double> fit_w;
        if (has_balance) {
            const auto outcome = apply_balance(tr_x, train_y, bal);
            fit_x = outcome.set.x;
            fit_y = outcome.set.y;
            fit_w = outcome.weights;
        }

        SplitConfig cv_cfg = split;
        cv_cfg.seed = mix64(seed, 0xCFULL);
        std::vector<MetricsReport> fold_reports;
        if (cv_before_balance && has_balance &&
            bal.technique != BalanceTechnique::class_weight) {
            // Leakage-free variant: fold the original training set and
            // balance each fold's training part separately.
            const auto folds = stratified_kfold(tr_x.rows(), train_y, cv_cfg);
            for (std::size_t f = 0; f < folds.size(); ++f) {
                BalanceParams fold_bal = bal;
                fold_bal.seed = mix64(seed, 0xCF2ULL, f);
                const auto ftr_x = tr_x.select_rows(folds[f].train_idx);
                Labels ftr_y = subset_labels(train_y, folds[f].train_idx);
                const auto outcome = apply_balance(ftr_x, ftr_y, fold_bal);
                TrainConfig tc;
                tc.seed = mix64(seed, 0xCF3ULL, f);
                tc.weights = outcome.weights;
                const auto model = train(slot.spec, outcome.set.x, outcome.set.y, tc);
                const auto fva_x = tr_x.select_rows(folds[f].valid_idx);
                const Labels fva_y = subset_labels(train_y, folds[f].valid_idx);
                fold_reports.push_back(evaluate_model(model, fva_x, fva_y));
            }
        } else {
            const auto folds = stratified_kfold(fit_x.rows(), fit_y, cv_cfg);
            for (std::size_t f = 0; f < folds.size(); ++f) {
                const auto ftr_x = fit_x.select_rows(folds[f].train_idx);
                const Labels ftr_y = subset_labels(fit_y, folds[f].train_idx);
                TrainConfig tc;
                tc.seed = mix64(seed, 0xCF3ULL, f);
                tc.weights = subset_weights(fit_w, folds[f].train_idx);
                const auto model = train(slot.spec, ftr_x, ftr_y, tc);
                const auto fva_x = fit_x.select_rows(folds[f].valid_idx);
                const Labels fva_y = subset_labels(fit_y, folds[f].valid_idx);
                fold_reports.push_back(evaluate_model(model, fva_x, fva_y));
            }
        }
        cell.cv = summarize_folds(fold_reports);

        TrainConfig tc;
        tc.seed = mix64(seed, 0xF17ULL);
        tc.weights = fit_w;
        const auto model = train(slot.spec, fit_x, fit_y, tc);
        cell.test_metrics = evaluate_model(model, te_x, test_y);
    } catch (const SevError& e) {
        cell.status = "skipped";
        cell.skip_reason = e.what();
    }
    return cell;
}

ResultsTable run_matrix(const ExperimentPlan& plan, const Matrix& x, const Labels& y,
                        int workers, std::uint64_t seed) {
    SplitConfig split = plan.split;
    split.seed = mix64(seed, 0xD47AULL);
    auto parts = stratified_split(x, y, split);

    // The interaction gate and feature rankings are fit on the training split
    // by default; the leakage flag reproduces the published full-data fit.
    // The chosen product columns are appended to both splits.
    const auto gate = plan.mimic_paper_leakage
                          ? gated_interactions(x, y, plan.interaction_min_abs_r)
                          : gated_interactions(parts.train_x, parts.train_y,
                                               plan.interaction_min_abs_r);
    parts.train_x = append_interactions(parts.train_x, gate);
    parts.test_x = append_interactions(parts.test_x, gate);

    ResolvedSelections selections;
    if (plan.mimic_paper_leakage) {
        const Matrix full = append_interactions(x, gate);
        selections = resolve_selections(full, y, plan.top_k, mix64(seed, 0x5E1ULL));
    } else {
        selections =
            resolve_selections(parts.train_x, parts.train_y, plan.top_k, mix64(seed, 0x5E1ULL));
    }

    const std::uint64_t test_before = fingerprint(parts.test_x, parts.test_y);

    struct Task {
        std::size_t ds;
        std::size_t slot;
    };
    std::vector<Task> tasks;
    for (std::size_t d = 0; d < plan.datasets.size(); ++d)
        for (std::size_t m = 0; m < plan.models.size(); ++m) tasks.push_back({d, m});

    ResultsTable table;
    table.cells.resize(tasks.size());
    table.seed = seed;

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t t = next.fetch_add(1);
            if (t >= tasks.size()) return;
            const auto& task = tasks[t];
            const auto& ds = plan.datasets[task.ds];
            const auto& slot = plan.models[task.slot];
            const std::uint64_t cell_seed =
                mix64(seed, static_cast<std::uint64_t>(ds.id),
                      static_cast<std::uint64_t>(task.slot));
            SEVLAB_DEBUG("cell dataset=", ds.id, " model=", slot.name);
            table.cells[t] =
                run_cell(ds, slot, parts.train_x, parts.train_y, parts.test_x, parts.test_y,
                         selections, plan.split, plan.cv_before_balance, cell_seed);
        }
    };
    const int n_threads = std::max(1, workers);
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    if (fingerprint(parts.test_x, parts.test_y) != test_before)
        fail(ErrorKind::Internal, "test set mutated during the matrix run");

    std::ostringstream fp;
    fp << std::hex << fingerprint(x, y);
    table.data_fingerprint = fp.str();
    std::ostringstream cfg_hash;
    cfg_hash << std::hex
             << mix64(mix64(seed, plan.datasets.size(), plan.models.size()),
                      static_cast<std::uint64_t>(plan.top_k),
                      (plan.mimic_paper_leakage ? 2ULL : 0ULL) |
                          (plan.cv_before_balance ? 1ULL : 0ULL));
    table.config_hash = cfg_hash.str();
    return table;
}

// ---- rendering ---------------------------------------------------------------

namespace {

const std::vector<std::string> kResultColumns = {
    "Training Dataset Number", "Feature Selection Technique", "Data Balancing Technique",
    "Model", "Accuracy", "LS Precision", "HS Precision", "LS Recall", "HS Recall",
    "LS F1 Score", "HS F1 Score", "ROC AUC"};

std::string format2(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << v;
    return os.str();
}

std::vector<std::string> cell_row(const CellResult& c) {
    std::vector<std::string> row;
    row.push_back(std::to_string(c.dataset_id));
    row.push_back(c.selection_label);
    row.push_back(c.balancing_label);
    row.push_back(c.model_name);
    if (c.status != "ok") {
        row.push_back("SKIPPED: " + c.skip_reason);
        for (int i = 0; i < 7; ++i) row.push_back("");
        return row;
    }
    const auto& m = c.test_metrics;
    for (double v : {m.accuracy, m.ls_precision, m.hs_precision, m.ls_recall, m.hs_recall,
                     m.ls_f1, m.hs_f1, m.roc_auc})
        row.push_back(format2(v));
    return row;
}

json metrics_to_json(const MetricsReport& m) {
    return json{{"accuracy", m.accuracy},     {"ls_precision", m.ls_precision},
                {"hs_precision", m.hs_precision}, {"ls_recall", m.ls_recall},
                {"hs_recall", m.hs_recall},   {"ls_f1", m.ls_f1},
                {"hs_f1", m.hs_f1},           {"roc_auc", m.roc_auc}};
}

MetricsReport metrics_from_json(const json& j) {
    MetricsReport m;
    m.accuracy = j.at("accuracy").get<double>();
    m.ls_precision = j.at("ls_precision").get<double>();
    m.hs_precision = j.at("hs_precision").get<double>();
    m.ls_recall = j.at("ls_recall").get<double>();
    m.hs_recall = j.at("hs_recall").get<double>();
    m.ls_f1 = j.at("ls_f1").get<double>();
    m.hs_f1 = j.at("hs_f1").get<double>();
    m.roc_auc = j.at("roc_auc").get<double>();
    return m;
}

} // namespace

bool ResultsTable::operator==(const ResultsTable& other) const {
    return results_to_json(*this) == results_to_json(other);
}

nlohmann::json results_to_json(const ResultsTable& table) {
    json doc;
    doc["seed"] = table.seed;
    doc["data_fingerprint"] = table.data_fingerprint;
    doc["config_hash"] = table.config_hash;
    json cells = json::array();
    for (const auto& c : table.cells) {
        json jc;
        jc["dataset"] = c.dataset_id;
        jc["selection"] = c.selection_label;
        jc["balancing"] = c.balancing_label;
        jc["model"] = c.model_name;
        jc["status"] = c.status;
        if (c.status == "ok") {
            jc["metrics"] = metrics_to_json(c.test_metrics);
            jc["cv_mean"] = metrics_to_json(c.cv.mean);
            jc["cv_sd"] = metrics_to_json(c.cv.sd);
            jc["cv_folds"] = c.cv.folds;
        } else {
            jc["skip_reason"] = c.skip_reason;
        }
        cells.push_back(std::move(jc));
    }
    doc["cells"] = std::move(cells);
    return doc;
}

ResultsTable results_from_json(const nlohmann::json& doc) {
    ResultsTable table;
    try {
        table.seed = doc.at("seed").get<std::uint64_t>();
        table.data_fingerprint = doc.value("data_fingerprint", "");
        table.config_hash = doc.value("config_hash", "");
        for (const auto& jc : doc.at("cells")) {
            CellResult c;
            c.dataset_id = jc.at("dataset").get<int>();
            c.selection_label = jc.at("selection").get<std::string>();
            c.balancing_label = jc.at("balancing").get<std::string>();
            c.model_name = jc.at("model").get<std::string>();
            c.status = jc.at("status").get<std::string>();
            if (c.status == "ok") {
                c.test_metrics = metrics_from_json(jc.at("metrics"));
                c.cv.mean = metrics_from_json(jc.at("cv_mean"));
                c.cv.sd = metrics_from_json(jc.at("cv_sd"));
                c.cv.folds = jc.value("cv_folds", 0);
            } else {
                c.skip_reason = jc.value("skip_reason", "");
            }
            table.cells.push_back(std::move(c));
        }
    } catch (const json::exception& e) {
        fail(ErrorKind::Malformed, std::string("results json: ") + e.what());
    }
    return table;
}

std::string render_results(const ResultsTable& table, ReportFormat format) {
    if (table.cells.empty()) fail(ErrorKind::EmptyMatrix, "results table is empty");
    std::ostringstream os;
    switch (format) {
        case ReportFormat::csv: {
            auto emit = [&os](const std::vector<std::string>& row) {
                for (std::size_t i = 0; i < row.size(); ++i) {
                    if (i) os << ',';
                    os << csv_escape(row[i]);
                }
                os << '\n';
            };
            emit(kResultColumns);
            for (const auto& c : table.cells) emit(cell_row(c));
            break;
        }
        case ReportFormat::markdown: {
            auto emit = [&os](const std::vector<std::string>& row) {
                os << '|';
                for (const auto& f : row) os << ' ' << f << " |";
                os << '\n';
            };
            emit(kResultColumns);
            std::vector<std::string> rule(kResultColumns.size(), "---");
            emit(rule);
            for (const auto& c : table.cells) emit(cell_row(c));
            break;
        }
        case ReportFormat::json:
            os << results_to_json(table).dump(1) << '\n';
            break;
    }
    return os.str();
}

void emit_results(const ResultsTable& table, ReportFormat format, const std::string& path) {
    const std::string body = render_results(table, format);
    std::ofstream out(path);
    if (!out) fail(ErrorKind::IoError, "cannot write " + path);
    out << body;
    if (!out) fail(ErrorKind::IoError, "write failed for " + path);
}

OverlapReport overlap_experiment(const Matrix& x, const Labels& y, const SplitConfig& split,
                                 RunPreset preset, std::uint64_t seed) {
    const auto plan = plan_from_table6(split, preset);
    const DatasetConfig* nearmiss_cfg = nullptr;
    for (const auto& d : plan.datasets)
        if (d.id == 17) nearmiss_cfg = &d;
    const auto& bml = model_slot_by_name("BML", preset);

    SplitConfig split_b = split;
    split_b.seed = mix64(seed, 0xD47AULL);
    auto parts = stratified_split(x, y, split_b);
    const auto gate =
        gated_interactions(parts.train_x, parts.train_y, plan.interaction_min_abs_r);
    parts.train_x = append_interactions(parts.train_x, gate);
    parts.test_x = append_interactions(parts.test_x, gate);
    const auto selections =
        resolve_selections(parts.train_x, parts.train_y, plan.top_k, mix64(seed, 0x5E1ULL));

    OverlapReport report;

    // Arm B: the standard protocol, NearMiss-1 applied to the training rows.
    const std::uint64_t cell_seed = mix64(seed, 17ULL, 0ULL);
    const auto cell = run_cell(*nearmiss_cfg, bml, parts.train_x, parts.train_y, parts.test_x,
                               parts.test_y, selections, split, false, cell_seed);
    if (cell.status != "ok")
        fail(ErrorKind::Internal, "standard arm failed: " + cell.skip_reason);
    report.standard = cell.test_metrics;

    // Arm A: NearMiss-1 over the full dataset first, then split the balanced
    // pool and train on its training share.
    const auto& cols = selections.columns[static_cast<int>(SelectionKind::merged_top50)];
    const Matrix full_x = append_interactions(x, gate).select_columns(cols);
    BalanceParams p = *nearmiss_cfg->balancing;
    p.seed = mix64(seed, 0xA1ULL);
    const auto pool = nearmiss1(full_x, y, p);
    for (int v : pool.y) (v == 1 ? report.pool_hs : report.pool_ls)++;

    SplitConfig split_a = split;
    split_a.seed = mix64(seed, 0xA2ULL);
    const auto pool_parts = stratified_split(pool.x, pool.y, split_a);
    TrainConfig tc;
    tc.seed = mix64(seed, 0xA3ULL);
    const auto model = train(bml.spec, pool_parts.train_x, pool_parts.train_y, tc);
    const auto probs = model.predict_proba(pool_parts.test_x);
    report.balanced_pool = classification_metrics(confusion(pool_parts.test_y, predict_label(probs)));
    report.balanced_pool.roc_auc = roc_auc(pool_parts.test_y, probs);
    return report;
}

} // namespace sevlab
