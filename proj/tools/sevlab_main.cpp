#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sevlab/balance.hpp"
#include "sevlab/csv.hpp"
#include "sevlab/error.hpp"
#include "sevlab/experiment.hpp"
#include "sevlab/featsel.hpp"
#include "sevlab/log.hpp"
#include "sevlab/metrics.hpp"
#include "sevlab/models.hpp"
#include "sevlab/rng.hpp"
#include "sevlab/synthgen.hpp"
#include "sevlab/tabular.hpp"

namespace {

using nlohmann::json;
using namespace sevlab;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
    if (seed) return *seed;
    std::random_device rd;
    const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    std::cerr << "seed: " << s << " (random; pass --seed to reproduce)\n";
    return s;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::IoError, "cannot open " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        fail(ErrorKind::Malformed, path + ": " + e.what());
    }
    return doc;
}

void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::IoError, "cannot write " + path);
    out << body;
    if (!out) fail(ErrorKind::IoError, "write failed for " + path);
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

// Matrix-with-SEV CSV (the `prepare`/`balance` interchange format).
void write_encoded_csv(const std::string& path, const Matrix& x, const Labels& y,
                       const std::vector<double>* weights = nullptr) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header;
    for (const auto& c : x.columns()) header.push_back(c.name());
    header.push_back("SEV");
    if (weights) header.push_back("WEIGHT");
    rows.push_back(header);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        std::vector<std::string> row;
        row.reserve(header.size());
        for (std::size_t j = 0; j < x.cols(); ++j) {
            const double v = x.at(i, j);
            row.push_back(v == static_cast<long>(v)
                              ? std::to_string(static_cast<long>(v))
                              : format_double(v));
        }
        row.push_back(std::to_string(y[i]));
        if (weights) row.push_back(format_double((*weights)[i]));
        rows.push_back(std::move(row));
    }
    write_csv(path, rows);
}

struct LoadedMatrix {
    Matrix x;
    Labels y;
};

LoadedMatrix load_encoded(const std::string& path, bool require_labels = true) {
    const EncodedCsv csv = read_encoded_csv(path);
    if (require_labels && !csv.has_labels)
        fail(ErrorKind::Malformed, path + " lacks a SEV column");
    LoadedMatrix out;
    out.x = Matrix(csv.values.size(), csv.column_names.size());
    for (std::size_t j = 0; j < csv.column_names.size(); ++j) {
        // Recover base/interaction identity from the column name.
        const std::string& name = csv.column_names[j];
        ColumnId id;
        const auto xpos = name.find("_x_");
        auto parse_base = [](const std::string& s, int pos) {
            const auto us = s.rfind('_');
            ColumnId b;
            b.header = s.substr(0, us);
            b.code = us == std::string::npos ? 0 : std::stoi(s.substr(us + 1));
            b.schema_pos = pos;
            return b;
        };
        if (xpos == std::string::npos) {
            id = parse_base(name, static_cast<int>(j));
        } else {
            id = ColumnId::product(parse_base(name.substr(0, xpos), static_cast<int>(j)),
                                   parse_base(name.substr(xpos + 3), static_cast<int>(j) + 1));
        }
        out.x.columns()[j] = id;
    }
    for (std::size_t i = 0; i < csv.values.size(); ++i)
        for (std::size_t j = 0; j < csv.column_names.size(); ++j)
            out.x.at(i, j) = csv.values[i][j];
    out.y = csv.labels;
    return out;
}

ReportFormat parse_format(const std::string& name) {
    if (name == "csv") return ReportFormat::csv;
    if (name == "markdown") return ReportFormat::markdown;
    if (name == "json") return ReportFormat::json;
    fail(ErrorKind::Malformed, "unknown format '" + name + "'");
}

struct MatrixConfig {
    std::uint64_t seed = 0;
    bool seed_set = false;
    SplitConfig split;
    std::string data_source = "synthetic";
    std::string marginal_spec = "data/marginals.json";
    std::string csv_path;
    long n_ls = 4217;
    long n_hs = 1134;
    std::string plan_kind = "table6";
    std::vector<std::pair<int, std::string>> explicit_cells;
    bool mimic_paper_leakage = false;
    bool cv_before_balance = false;
    std::string preset = "standard";
};

MatrixConfig parse_matrix_config(const json& doc) {
    MatrixConfig cfg;
    if (doc.contains("seed")) {
        cfg.seed = doc["seed"].get<std::uint64_t>();
        cfg.seed_set = true;
    }
    if (doc.contains("split")) {
        cfg.split.train_frac = doc["split"].value("train_frac", 0.7);
        cfg.split.k_folds = doc["split"].value("k_folds", 5);
    }
    if (doc.contains("data")) {
        const auto& d = doc["data"];
        cfg.data_source = d.value("source", "synthetic");
        cfg.marginal_spec = d.value("marginal_spec", cfg.marginal_spec);
        cfg.csv_path = d.value("path", "");
        cfg.n_ls = d.value("n_ls", cfg.n_ls);
        cfg.n_hs = d.value("n_hs", cfg.n_hs);
    }
    if (doc.contains("plan")) {
        if (doc["plan"].is_string()) {
            cfg.plan_kind = doc["plan"].get<std::string>();
        } else {
            cfg.plan_kind = "cells";
            for (const auto& c : doc["plan"].at("cells"))
                cfg.explicit_cells.push_back(
                    {c.at("dataset").get<int>(), c.at("model").get<std::string>()});
        }
    }
    if (doc.contains("flags")) {
        cfg.mimic_paper_leakage = doc["flags"].value("mimic_paper_leakage", false);
        cfg.cv_before_balance = doc["flags"].value("cv_before_balance", false);
    }
    cfg.preset = doc.value("preset", "standard");
    return cfg;
}

// Build the base one-hot matrix from the configured data source.
LoadedMatrix load_config_data(const MatrixConfig& cfg, std::uint64_t seed) {
    RawTable raw;
    if (cfg.data_source == "synthetic") {
        const auto spec = load_marginal_spec(cfg.marginal_spec);
        SyntheticConfig sc;
        sc.n_ls = cfg.n_ls;
        sc.n_hs = cfg.n_hs;
        sc.seed = mix64(seed, 0xDA7AULL);
        raw = sample_dataset(spec, sc);
    } else if (cfg.data_source == "csv") {
        if (cfg.csv_path.empty()) fail(ErrorKind::Malformed, "data.path required for csv source");
        const auto spec = load_marginal_spec(cfg.marginal_spec);
        raw = read_raw_csv(cfg.csv_path, spec.schema());
        raw = apply_missing_policy(raw);
    } else {
        fail(ErrorKind::Malformed, "unknown data source '" + cfg.data_source + "'");
    }
    if (!raw.labels) fail(ErrorKind::Malformed, "data has no SEV labels");
    auto [x, labels] = one_hot_encode(raw);
    return {std::move(x), std::move(*labels)};
}

int run(int argc, char** argv) {
    CLI::App app{"Crash-severity imbalanced-classification laboratory"};
    app.require_subcommand(1);

    // ---- synth ----
    auto* synth = app.add_subcommand("synth", "Sample a synthetic dataset from a marginal spec");
    std::string synth_spec = "data/marginals.json";
    long synth_ls = 4217, synth_hs = 1134;
    std::optional<std::uint64_t> synth_seed;
    std::string synth_out, synth_mode = "urn";
    synth->add_option("--spec", synth_spec, "Marginal spec JSON")->required();
    synth->add_option("--n-ls", synth_ls, "LS row count");
    synth->add_option("--n-hs", synth_hs, "HS row count");
    synth->add_option("--seed", synth_seed, "RNG seed");
    synth->add_option("--sampling", synth_mode, "urn or iid")
        ->check(CLI::IsMember({"urn", "iid"}));
    synth->add_option("--out", synth_out, "Output CSV")->required();

    // ---- prepare ----
    auto* prepare = app.add_subcommand(
        "prepare", "Missing-value policy, one-hot encoding, and interaction terms");
    std::string prep_spec, prep_in, prep_out;
    double prep_gate = 0.40;
    prepare->add_option("--spec", prep_spec, "Marginal/schema spec JSON")->required();
    prepare->add_option("--in", prep_in, "Raw CSV")->required();
    prepare->add_option("--out", prep_out, "Encoded CSV")->required();
    prepare->add_option("--min-abs-r", prep_gate, "Interaction correlation gate");

    // ---- select ----
    auto* select = app.add_subcommand("select", "Rank columns and export scores");
    std::string sel_in, sel_out, sel_method = "pearson";
    std::size_t sel_k = 50;
    std::optional<std::uint64_t> sel_seed;
    select->add_option("--in", sel_in, "Encoded CSV")->required();
    select->add_option("--method", sel_method, "Ranking method")
        ->check(CLI::IsMember({"pearson", "chi2", "mutual_info", "forest_importance",
                               "rfe_logistic", "merged"}));
    select->add_option("--k", sel_k, "Top-k cut");
    select->add_option("--seed", sel_seed, "RNG seed");
    select->add_option("--out", sel_out, "Ranking CSV")->required();

    // ---- balance ----
    auto* balance = app.add_subcommand("balance", "Apply one balancing technique");
    std::string bal_in, bal_out, bal_technique = "smote";
    BalanceParams bal_params;
    std::optional<std::uint64_t> bal_seed;
    balance->add_option("--technique", bal_technique, "Balancing technique")->required();
    balance->add_option("--in", bal_in, "Encoded CSV")->required();
    balance->add_option("--out", bal_out, "Output CSV")->required();
    balance->add_option("--ratio", bal_params.target_ratio, "Target HS/LS ratio");
    balance->add_option("--k-neighbors", bal_params.k_neighbors, "Neighbor count");
    balance->add_option("--bandwidth", bal_params.bandwidth, "Kernel flip probability");
    balance->add_option("--clusters", bal_params.n_clusters, "KMeans cluster count");
    balance->add_option("--hs-weight", bal_params.hs_weight, "HS class weight");
    balance->add_flag("--binarize", bal_params.binarize, "Threshold synthetic rows at 0.5");
    balance->add_option("--seed", bal_seed, "RNG seed");

    // ---- train ----
    auto* train_cmd = app.add_subcommand("train", "Train one model slot");
    std::string train_in, train_out, train_model = "BML", train_preset = "standard";
    std::optional<std::uint64_t> train_seed;
    train_cmd->add_option("--model", train_model, "Model slot name")->required();
    train_cmd->add_option("--in", train_in, "Encoded CSV")->required();
    train_cmd->add_option("--out", train_out, "Model artifact JSON")->required();
    train_cmd->add_option("--preset", train_preset, "standard or fast")
        ->check(CLI::IsMember({"standard", "fast"}));
    train_cmd->add_option("--seed", train_seed, "RNG seed");

    // ---- evaluate ----
    auto* evaluate = app.add_subcommand("evaluate", "Score a model artifact on a dataset");
    std::string eval_model, eval_in, eval_out, eval_format = "json";
    evaluate->add_option("--model-file", eval_model, "Model artifact JSON")->required();
    evaluate->add_option("--in", eval_in, "Encoded CSV")->required();
    evaluate->add_option("--out", eval_out, "Metrics output");
    evaluate->add_option("--format", eval_format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    // ---- matrix ----
    auto* matrix = app.add_subcommand("matrix", "Run the training-dataset x model matrix");
    std::string matrix_config, matrix_out, matrix_format = "csv", matrix_preset;
    std::optional<std::uint64_t> matrix_seed;
    int matrix_workers = 1;
    bool matrix_leak = false, matrix_cvb = false;
    matrix->add_option("--config", matrix_config, "Experiment config JSON")->required();
    matrix->add_option("--out", matrix_out, "Results file")->required();
    matrix->add_option("--format", matrix_format, "csv, markdown, or json")
        ->check(CLI::IsMember({"csv", "markdown", "json"}));
    matrix->add_option("--seed", matrix_seed, "RNG seed (overrides config)");
    matrix->add_option("--workers", matrix_workers, "Worker thread count");
    matrix->add_option("--preset", matrix_preset, "standard or fast (overrides config)")
        ->check(CLI::IsMember({"standard", "fast"}));
    matrix->add_flag("--mimic-paper-leakage", matrix_leak,
                     "Fit rankings and the interaction gate on the full dataset");
    matrix->add_flag("--cv-before-balance", matrix_cvb, "Balance inside each CV fold");

    // ---- overlap ----
    auto* overlap = app.add_subcommand("overlap", "Class-overlap experiment (both arms)");
    std::string ov_config, ov_out, ov_preset;
    std::optional<std::uint64_t> ov_seed;
    overlap->add_option("--config", ov_config, "Experiment config JSON")->required();
    overlap->add_option("--out", ov_out, "Report JSON (optional)");
    overlap->add_option("--seed", ov_seed, "RNG seed (overrides config)");
    overlap->add_option("--preset", ov_preset, "standard or fast (overrides config)")
        ->check(CLI::IsMember({"standard", "fast"}));

    // ---- report ----
    auto* report = app.add_subcommand("report", "Re-render a results JSON file");
    std::string rep_in, rep_out, rep_format = "markdown";
    report->add_option("--in", rep_in, "Results JSON")->required();
    report->add_option("--out", rep_out, "Output file")->required();
    report->add_option("--format", rep_format, "csv, markdown, or json")
        ->check(CLI::IsMember({"csv", "markdown", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e);
            return 0;
        }
        std::cerr << e.what() << "\n\n" << app.help() << "\n";
        return 2;
    }

    if (synth->parsed()) {
        const auto spec = load_marginal_spec(synth_spec);
        SyntheticConfig sc;
        sc.n_ls = synth_ls;
        sc.n_hs = synth_hs;
        sc.seed = resolve_seed(synth_seed);
        sc.mode = synth_mode == "urn" ? SamplingMode::urn : SamplingMode::iid;
        const auto table = sample_dataset(spec, sc);
        write_raw_csv(table, synth_out);
        std::cout << "wrote " << table.n_rows() << " rows to " << synth_out << "\n";
    } else if (prepare->parsed()) {
        const auto spec = load_marginal_spec(prep_spec);
        auto raw = read_raw_csv(prep_in, spec.schema());
        raw = apply_missing_policy(raw);
        auto [x, labels] = one_hot_encode(raw);
        if (!labels) fail(ErrorKind::Malformed, prep_in + " lacks a SEV column");
        const Matrix augmented = generate_interactions(x, *labels, prep_gate);
        write_encoded_csv(prep_out, augmented, *labels);
        std::cout << "wrote " << augmented.rows() << " rows x " << augmented.cols()
                  << " columns to " << prep_out << "\n";
    } else if (select->parsed()) {
        const auto data = load_encoded(sel_in);
        const std::uint64_t seed = resolve_seed(sel_seed);
        std::vector<std::pair<std::string, FeatureRanking>> rankings;
        auto add = [&](RankMethod m) {
            switch (m) {
                case RankMethod::pearson:
                    rankings.push_back({"pearson", ranking_from_scores(
                                                       m, pearson_scores(data.x, data.y))});
                    break;
                case RankMethod::chi2:
                    rankings.push_back(
                        {"chi2", ranking_from_scores(m, chi2_scores(data.x, data.y))});
                    break;
                case RankMethod::mutual_info:
                    rankings.push_back({"mutual_info",
                                        ranking_from_scores(
                                            m, mutual_information_scores(data.x, data.y))});
                    break;
                case RankMethod::forest_importance:
                    rankings.push_back(
                        {"forest_importance",
                         ranking_from_scores(m, forest_importance_scores(
                                                    data.x, data.y, {}, mix64(seed, 1)))});
                    break;
                case RankMethod::rfe_logistic: {
                    RfeParams rp;
                    rp.step_frac = 0.20;
                    rankings.push_back(
                        {"rfe_logistic", rfe_logistic_ranking(data.x, data.y, rp, seed)});
                    break;
                }
            }
        };
        if (sel_method == "merged") {
            for (auto m : {RankMethod::pearson, RankMethod::chi2, RankMethod::mutual_info,
                           RankMethod::forest_importance, RankMethod::rfe_logistic})
                add(m);
        } else {
            for (auto m : {RankMethod::pearson, RankMethod::chi2, RankMethod::mutual_info,
                           RankMethod::forest_importance, RankMethod::rfe_logistic})
                if (sel_method == rank_method_name(m)) add(m);
        }
        std::vector<std::vector<std::string>> rows;
        rows.push_back({"column", "method", "score", "rank"});
        for (const auto& [name, ranking] : rankings) {
            const auto cut = top_k(ranking, sel_k);
            for (std::size_t r = 0; r < cut.size(); ++r) {
                const std::size_t col = cut[r];
                rows.push_back({data.x.columns()[col].name(), name,
                                format_double(ranking.scores[col]), std::to_string(r + 1)});
            }
        }
        write_csv(sel_out, rows);
        std::cout << "wrote " << rows.size() - 1 << " ranking rows to " << sel_out << "\n";
    } else if (balance->parsed()) {
        const auto data = load_encoded(bal_in);
        bal_params.technique = balance_technique_from_name(bal_technique);
        if (bal_params.technique == BalanceTechnique::nearmiss1 &&
            balance->count("--k-neighbors") == 0)
            bal_params.k_neighbors = 3;
        bal_params.seed = resolve_seed(bal_seed);
        const auto outcome = apply_balance(data.x, data.y, bal_params);
        if (bal_params.technique == BalanceTechnique::class_weight) {
            write_encoded_csv(bal_out, outcome.set.x, outcome.set.y, &outcome.weights);
        } else {
            write_encoded_csv(bal_out, outcome.set.x, outcome.set.y);
        }
        std::cout << "wrote " << outcome.set.x.rows() << " rows to " << bal_out << "\n";
    } else if (train_cmd->parsed()) {
        const auto data = load_encoded(train_in);
        const auto preset =
            train_preset == "fast" ? RunPreset::fast : RunPreset::standard;
        const auto& slot = model_slot_by_name(train_model, preset);
        TrainConfig tc;
        tc.seed = resolve_seed(train_seed);
        const auto model = train(slot.spec, data.x, data.y, tc);
        json doc = save_model(model);
        doc["slot"] = train_model;
        json cols = json::array();
        for (const auto& c : data.x.columns()) cols.push_back(c.name());
        doc["columns"] = std::move(cols);
        write_text(train_out, doc.dump(1) + "\n");
        std::cout << "trained " << train_model << " on " << data.x.rows() << " rows; wrote "
                  << train_out << "\n";
    } else if (evaluate->parsed()) {
        const json doc = read_json_file(eval_model);
        const auto model = load_model(doc);
        const auto data = load_encoded(eval_in);
        if (doc.contains("columns")) {
            const auto cols = doc["columns"].get<std::vector<std::string>>();
            if (cols.size() != data.x.cols())
                fail(ErrorKind::ColumnMismatch, "artifact expects " +
                                                    std::to_string(cols.size()) + " columns");
            for (std::size_t j = 0; j < cols.size(); ++j)
                if (cols[j] != data.x.columns()[j].name())
                    fail(ErrorKind::ColumnMismatch, "column " + std::to_string(j) +
                                                        " is " + data.x.columns()[j].name() +
                                                        ", artifact expects " + cols[j]);
        }
        const auto probs = model.predict_proba(data.x);
        MetricsReport m = classification_metrics(confusion(data.y, predict_label(probs)));
        bool has0 = false, has1 = false;
        for (int v : data.y) (v ? has1 : has0) = true;
        if (has0 && has1) m.roc_auc = roc_auc(data.y, probs);
        json out{{"accuracy", m.accuracy},
                 {"ls_precision", m.ls_precision},
                 {"hs_precision", m.hs_precision},
                 {"ls_recall", m.ls_recall},
                 {"hs_recall", m.hs_recall},
                 {"ls_f1", m.ls_f1},
                 {"hs_f1", m.hs_f1},
                 {"roc_auc", m.roc_auc},
                 {"rows", data.x.rows()}};
        std::string body;
        if (eval_format == "json") {
            body = out.dump(1) + "\n";
        } else {
            std::ostringstream os;
            os << "accuracy,ls_precision,hs_precision,ls_recall,hs_recall,ls_f1,hs_f1,roc_auc\n";
            os << m.accuracy << ',' << m.ls_precision << ',' << m.hs_precision << ','
               << m.ls_recall << ',' << m.hs_recall << ',' << m.ls_f1 << ',' << m.hs_f1
               << ',' << m.roc_auc << "\n";
            body = os.str();
        }
        if (eval_out.empty()) std::cout << body;
        else write_text(eval_out, body);
    } else if (matrix->parsed()) {
        const MatrixConfig cfg = parse_matrix_config(read_json_file(matrix_config));
        std::uint64_t seed;
        if (matrix_seed) seed = *matrix_seed;
        else if (cfg.seed_set) seed = cfg.seed;
        else seed = resolve_seed(std::nullopt);
        const std::string preset_name =
            !matrix_preset.empty() ? matrix_preset : cfg.preset;
        const RunPreset preset =
            preset_name == "fast" ? RunPreset::fast : RunPreset::standard;

        SplitConfig split = cfg.split;
        ExperimentPlan plan = plan_from_table6(split, preset);
        plan.mimic_paper_leakage = cfg.mimic_paper_leakage || matrix_leak;
        plan.cv_before_balance = cfg.cv_before_balance || matrix_cvb;
        if (cfg.plan_kind == "cells") {
            std::vector<DatasetConfig> datasets;
            std::vector<ModelSlot> models;

            // Keep only the requested cells; the full cross product of the
            // named datasets and models is executed.
            for (const auto& [ds, model] : cfg.explicit_cells) {
                bool have_ds = false;
                for (const auto& d : datasets) have_ds |= d.id == ds;
                if (!have_ds) {
                    bool found = false;
                    for (const auto& d : plan.datasets)
                        if (d.id == ds) {
                            datasets.push_back(d);
                            found = true;
                        }
                    if (!found) fail(ErrorKind::Malformed, "unknown dataset id in plan");
                }
                bool have_m = false;
                for (const auto& m : models) have_m |= m.name == model;
                if (!have_m) models.push_back(model_slot_by_name(model, preset));
            }
            plan.datasets = std::move(datasets);
            plan.models = std::move(models);
        } else if (cfg.plan_kind != "table6") {
            fail(ErrorKind::Malformed, "plan must be \"table6\" or an explicit cell list");
        }

        const auto data = load_config_data(cfg, seed);
        const auto table = run_matrix(plan, data.x, data.y, matrix_workers, seed);
        emit_results(table, parse_format(matrix_format), matrix_out);
        std::size_t ok = 0;
        for (const auto& c : table.cells) ok += c.status == "ok" ? 1 : 0;
        std::cout << "matrix complete: " << table.cells.size() << " cells, " << ok
                  << " ok, " << table.cells.size() - ok << " skipped; wrote " << matrix_out
                  << "\n";
    } else if (overlap->parsed()) {
        const MatrixConfig cfg = parse_matrix_config(read_json_file(ov_config));
        std::uint64_t seed;
        if (ov_seed) seed = *ov_seed;
        else if (cfg.seed_set) seed = cfg.seed;
        else seed = resolve_seed(std::nullopt);
        const std::string preset_name = !ov_preset.empty() ? ov_preset : cfg.preset;
        const RunPreset preset =
            preset_name == "fast" ? RunPreset::fast : RunPreset::standard;
        const auto data = load_config_data(cfg, seed);
        const auto report = overlap_experiment(data.x, data.y, cfg.split, preset, seed);
        auto arm = [](const MetricsReport& m) {
            return json{{"accuracy", m.accuracy},     {"ls_precision", m.ls_precision},
                        {"hs_precision", m.hs_precision}, {"ls_recall", m.ls_recall},
                        {"hs_recall", m.hs_recall},   {"ls_f1", m.ls_f1},
                        {"hs_f1", m.hs_f1},           {"roc_auc", m.roc_auc}};
        };
        json out{{"balanced_pool", arm(report.balanced_pool)},
                 {"standard", arm(report.standard)},
                 {"pool_ls", report.pool_ls},
                 {"pool_hs", report.pool_hs},
                 {"seed", seed}};
        const std::string body = out.dump(1) + "\n";
        std::cout << body;
        if (!ov_out.empty()) write_text(ov_out, body);
    } else if (report->parsed()) {
        const auto table = results_from_json(read_json_file(rep_in));
        emit_results(table, parse_format(rep_format), rep_out);
        std::cout << "wrote " << rep_out << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const SevError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
