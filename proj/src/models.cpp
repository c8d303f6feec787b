#include "sevlab/models.hpp"

#include <algorithm>
#include <cmath>

#include "sevlab/rng.hpp"
#include "models_impl.hpp"

namespace sevlab {

using detail::json;

const char* model_kind_name(ModelKind k) {
    switch (k) {
        case ModelKind::logistic: return "logistic";
        case ModelKind::bayes_logit: return "bayes_logit";
        case ModelKind::tree: return "tree";
        case ModelKind::random_forest: return "random_forest";
        case ModelKind::extra_trees: return "extra_trees";
        case ModelKind::gbdt: return "gbdt";
        case ModelKind::mlp: return "mlp";
    }
    return "?";
}

namespace {

constexpr double kProbClamp = 1e-6;

ModelKind model_kind_from_name(const std::string& name) {
    for (auto k : {ModelKind::logistic, ModelKind::bayes_logit, ModelKind::tree,
                   ModelKind::random_forest, ModelKind::extra_trees, ModelKind::gbdt,
                   ModelKind::mlp})
        if (name == model_kind_name(k)) return k;
    fail(ErrorKind::Malformed, "unknown model kind '" + name + "'");
}

void check_training_input(const Matrix& x, const Labels& y,
                          const std::vector<double>& weights) {
    check_labels(y, x.rows());
    for (double v : x.data())
        if (!std::isfinite(v)) fail(ErrorKind::NonFinite, "non-finite matrix entry");
    if (!weights.empty()) {
        if (weights.size() != x.rows())
            fail(ErrorKind::LengthMismatch, "weights length mismatch");
        for (double w : weights)
            if (!(w > 0.0) || !std::isfinite(w))
                fail(ErrorKind::Malformed, "weights must be positive and finite");
    }
}

} // namespace

std::vector<double> TrainedModel::predict_proba(const Matrix& x) const {
    if (!impl_) fail(ErrorKind::Internal, "predicting with an empty model");
    if (x.cols() != n_cols_)
        fail(ErrorKind::ColumnMismatch, "model expects " + std::to_string(n_cols_) +
                                            " columns, got " + std::to_string(x.cols()));
    auto out = impl_->predict(x);
    for (double& p : out) {
        if (!std::isfinite(p)) fail(ErrorKind::NonFinite, "non-finite prediction");
        p = std::clamp(p, 0.0, 1.0);
    }
    return out;
}

Labels predict_label(const std::vector<double>& probs, double threshold) {
    Labels out(probs.size(), 0);
    for (std::size_t i = 0; i < probs.size(); ++i)
        if (probs[i] >= threshold) out[i] = 1;
    return out;
}

TrainedModel train(const ModelSpec& spec, const Matrix& x, const Labels& y,
                   const TrainConfig& cfg) {
    check_training_input(x, y, cfg.weights);
    const std::vector<double> weights =
        cfg.weights.empty() ? std::vector<double>(x.rows(), 1.0) : cfg.weights;

    // Single-class input degenerates to a constant-probability model.
    long n1 = 0;
    for (int v : y) n1 += v;
    if (x.rows() == 0 || n1 == 0 || static_cast<std::size_t>(n1) == y.size()) {
        const double rate = x.rows() == 0 ? 0.5
                                          : static_cast<double>(n1) / static_cast<double>(y.size());
        auto impl = std::make_shared<detail::ConstantModel>();
        impl->p = std::clamp(rate, kProbClamp, 1.0 - kProbClamp);
        TrainMeta meta;
        meta.seed = cfg.seed;
        meta.constant = true;
        return TrainedModel(spec, x.cols(), std::move(impl), meta);
    }

    switch (spec.kind) {
        case ModelKind::logistic: {
            LogisticFitParams lp;
            lp.lr = spec.hp.logit_lr;
            lp.epochs = spec.hp.logit_epochs;
            lp.l2 = spec.hp.logit_l2;
            auto impl = std::make_shared<detail::LogisticModel>();
            impl->beta = logistic_fit(x, y, weights, lp);
            TrainMeta meta;
            meta.seed = cfg.seed;
            meta.rounds = lp.epochs;
            meta.final_train_loss =
                logistic_loss_grad(x, y, weights, impl->beta, lp.l2, nullptr);
            return TrainedModel(spec, x.cols(), std::move(impl), meta);
        }
        case ModelKind::bayes_logit:
            return detail::train_bayes_logit(spec, x, y, weights, cfg);
        case ModelKind::tree:
        case ModelKind::random_forest:
        case ModelKind::extra_trees:
            return detail::train_forest(spec, x, y, weights, cfg);
        case ModelKind::gbdt:
            return detail::train_gbdt(spec, x, y, weights, cfg);
        case ModelKind::mlp: {
            auto impl = std::make_shared<detail::MlpModel>();
            impl->net = MlpNet::make(static_cast<int>(x.cols()), spec.hp.hidden, cfg.seed);
            MlpTrainParams mp;
            mp.epochs = spec.hp.mlp_epochs;
            mp.lr = spec.hp.mlp_lr;
            mp.batch_size = spec.hp.batch_size;
            TrainMeta meta;
            meta.seed = cfg.seed;
            meta.rounds = mp.epochs;
            meta.final_train_loss = mlp_train(impl->net, x, y, weights, mp, cfg.seed);
            return TrainedModel(spec, x.cols(), std::move(impl), meta);
        }
    }
    fail(ErrorKind::Internal, "unhandled model kind");
}

// ---- model slots ------------------------------------------------------------

std::vector<ModelSlot> model_slots(RunPreset preset) {
    const bool fast = preset == RunPreset::fast;
    auto tune = [fast](ModelSpec spec) {
        if (!fast) return spec;
        auto& hp = spec.hp;
        hp.logit_epochs = 120;
        hp.map_epochs = 80;
        hp.mcmc_burn_in = 100;
        hp.mcmc_kept = 400;
        hp.n_trees = 30;
        hp.max_depth = 10;
        hp.rounds = spec.preset == SizePreset::large ? 50 : 25;
        hp.gbdt_max_depth = 5;
        hp.max_leaves = 15;
        hp.hidden = spec.preset == SizePreset::large ? std::vector<int>{48, 24}
                                                     : std::vector<int>{32, 16};
        hp.mlp_epochs = 12;
        hp.batch_size = 128;
        return spec;
    };

    auto make = [&](ModelKind kind, SplitCriterion crit, Growth growth, SizePreset size) {
        ModelSpec spec;
        spec.kind = kind;
        spec.criterion = crit;
        spec.growth = growth;
        spec.preset = size;
        auto& hp = spec.hp;
        if (kind == ModelKind::gbdt) {
            hp.rounds = size == SizePreset::large ? 300 : 100;
        } else if (kind == ModelKind::mlp) {
            hp.hidden = size == SizePreset::large ? std::vector<int>{128, 64, 32}
                                                  : std::vector<int>{64, 32};
        }
        return tune(spec);
    };

    const auto g = SplitCriterion::gini;
    const auto e = SplitCriterion::entropy;
    const auto lvl = Growth::level_wise;
    const auto leaf = Growth::leaf_wise;
    return {
        {"BML", make(ModelKind::bayes_logit, g, lvl, SizePreset::base)},
        {"CatBoost", make(ModelKind::gbdt, g, lvl, SizePreset::base)},
        {"ExtraTreesEntr", make(ModelKind::extra_trees, e, lvl, SizePreset::base)},
        {"ExtraTreesGini", make(ModelKind::extra_trees, g, lvl, SizePreset::base)},
        {"LightGBM", make(ModelKind::gbdt, g, leaf, SizePreset::base)},
        {"LightGBMLarge", make(ModelKind::gbdt, g, leaf, SizePreset::large)},
        {"LightGBMXT", make(ModelKind::gbdt, g, leaf, SizePreset::xt)},
        {"NeuralNetFastAI", make(ModelKind::mlp, g, lvl, SizePreset::large)},
        {"NeuralNetTorch", make(ModelKind::mlp, g, lvl, SizePreset::base)},
        {"RandomForestEntr", make(ModelKind::random_forest, e, lvl, SizePreset::base)},
        {"RandomForestGini", make(ModelKind::random_forest, g, lvl, SizePreset::base)},
        {"XGBoost", make(ModelKind::gbdt, g, lvl, SizePreset::large)},
    };
}

const ModelSlot& model_slot_by_name(const std::string& name, RunPreset preset) {
    static std::vector<ModelSlot> standard = model_slots(RunPreset::standard);
    static std::vector<ModelSlot> fast = model_slots(RunPreset::fast);
    auto& slots = preset == RunPreset::fast ? fast : standard;
    for (const auto& s : slots)
        if (s.name == name) return s;
    fail(ErrorKind::Malformed, "unknown model slot '" + name + "'");
}

// ---- serialization ----------------------------------------------------------

namespace {

json spec_to_json(const ModelSpec& spec) {
    json j;
    j["kind"] = model_kind_name(spec.kind);
    j["criterion"] = spec.criterion == SplitCriterion::gini ? "gini" : "entropy";
    j["growth"] = spec.growth == Growth::level_wise ? "level_wise" : "leaf_wise";
    j["preset"] = spec.preset == SizePreset::base
                      ? "base"
                      : (spec.preset == SizePreset::large ? "large" : "xt");
    j["hidden"] = spec.hp.hidden;
    return j;
}

ModelSpec spec_from_json(const json& j) {
    ModelSpec spec;
    spec.kind = model_kind_from_name(j.at("kind").get<std::string>());
    spec.criterion = j.value("criterion", "gini") == std::string("gini")
                         ? SplitCriterion::gini
                         : SplitCriterion::entropy;
    spec.growth = j.value("growth", "level_wise") == std::string("level_wise")
                      ? Growth::level_wise
                      : Growth::leaf_wise;
    const std::string p = j.value("preset", "base");
    spec.preset = p == "large" ? SizePreset::large
                               : (p == "xt" ? SizePreset::xt : SizePreset::base);
    if (j.contains("hidden")) spec.hp.hidden = j["hidden"].get<std::vector<int>>();
    return spec;
}

json tree_to_json(const std::vector<TreeNode>& nodes) {
    json arr = json::array();
    for (const auto& n : nodes)
        arr.push_back({n.feature, n.threshold, n.left, n.right, n.p1});
    return arr;
}

std::vector<TreeNode> tree_from_json(const json& arr) {
    std::vector<TreeNode> nodes;
    for (const auto& e : arr) {
        TreeNode n;
        n.feature = e.at(0).get<int>();
        n.threshold = e.at(1).get<double>();
        n.left = e.at(2).get<int>();
        n.right = e.at(3).get<int>();
        n.p1 = e.at(4).get<double>();
        nodes.push_back(n);
    }
    return nodes;
}

} // namespace

namespace detail {

void ConstantModel::save(json& out) const { out["p"] = p; }

void LogisticModel::save(json& out) const { out["beta"] = beta; }

void BayesLogitModel::save(json& out) const {
    out["mean"] = mean;
    out["sd"] = sd;
    out["draws"] = draws;
    out["acceptance"] = acceptance;
}

void ForestModel::save(json& out) const {
    json arr = json::array();
    for (const auto& t : trees) arr.push_back(tree_to_json(t.nodes()));
    out["trees"] = std::move(arr);
}

void GbdtModel::save(json& out) const {
    out["base_logit"] = base_logit;
    json arr = json::array();
    for (const auto& t : trees) {
        json tj = json::array();
        for (const auto& n : t)
            tj.push_back({n.feature, n.threshold, n.left, n.right, n.value});
        arr.push_back(std::move(tj));
    }
    out["trees"] = std::move(arr);
}

void MlpModel::save(json& out) const {
    out["sizes"] = net.sizes;
    out["params"] = net.params;
}

} // namespace detail

nlohmann::json save_model(const TrainedModel& model) {
    json doc;
    doc["format_version"] = 1;
    doc["spec"] = spec_to_json(model.spec());
    doc["n_cols"] = model.n_cols();
    doc["constant"] = model.meta().constant;
    doc["seed"] = model.meta().seed;
    json params;
    model.impl()->save(params);
    doc["params"] = std::move(params);
    return doc;
}

TrainedModel load_model(const nlohmann::json& doc) {
    try {
        if (doc.at("format_version").get<int>() != 1)
            fail(ErrorKind::Malformed, "unsupported model format version");
        const ModelSpec spec = spec_from_json(doc.at("spec"));
        const auto n_cols = doc.at("n_cols").get<std::size_t>();
        const auto& params = doc.at("params");
        TrainMeta meta;
        meta.seed = doc.value("seed", std::uint64_t{0});
        meta.constant = doc.value("constant", false);

        std::shared_ptr<ModelImpl> impl;
        if (meta.constant) {
            auto m = std::make_shared<detail::ConstantModel>();
            m->p = params.at("p").get<double>();
            impl = std::move(m);
        } else if (spec.kind == ModelKind::logistic) {
            auto m = std::make_shared<detail::LogisticModel>();
            m->beta = params.at("beta").get<std::vector<double>>();
            impl = std::move(m);
        } else if (spec.kind == ModelKind::bayes_logit) {
            auto m = std::make_shared<detail::BayesLogitModel>();
            m->mean = params.at("mean").get<std::vector<double>>();
            m->sd = params.at("sd").get<std::vector<double>>();
            m->draws = params.at("draws").get<std::vector<std::vector<double>>>();
            m->acceptance = params.value("acceptance", 0.0);
            impl = std::move(m);
        } else if (spec.kind == ModelKind::gbdt) {
            auto m = std::make_shared<detail::GbdtModel>();
            m->base_logit = params.at("base_logit").get<double>();
            for (const auto& tj : params.at("trees")) {
                std::vector<detail::GbdtNode> t;
                for (const auto& e : tj) {
                    detail::GbdtNode n;
                    n.feature = e.at(0).get<int>();
                    n.threshold = e.at(1).get<double>();
                    n.left = e.at(2).get<int>();
                    n.right = e.at(3).get<int>();
                    n.value = e.at(4).get<double>();
                    t.push_back(n);
                }
                m->trees.push_back(std::move(t));
            }
            impl = std::move(m);
        } else if (spec.kind == ModelKind::mlp) {
            auto m = std::make_shared<detail::MlpModel>();
            m->net.sizes = params.at("sizes").get<std::vector<int>>();
            m->net.params = params.at("params").get<std::vector<double>>();
            impl = std::move(m);
        } else {
            auto m = std::make_shared<detail::ForestModel>();
            for (const auto& tj : params.at("trees")) {
                ClassificationTree t;
                t.set_nodes(tree_from_json(tj));
                m->trees.push_back(std::move(t));
            }
            impl = std::move(m);
        }
        return TrainedModel(spec, n_cols, std::move(impl), meta);
    } catch (const json::exception& e) {
        fail(ErrorKind::Malformed, std::string("model artifact: ") + e.what());
    }
}

} // namespace sevlab
