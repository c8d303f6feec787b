#include "sevlab/featsel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sevlab/logistic.hpp"
#include "sevlab/rng.hpp"
#include "sevlab/tree.hpp"

namespace sevlab {

const char* rank_method_name(RankMethod m) {
    switch (m) {
        case RankMethod::pearson: return "pearson";
        case RankMethod::chi2: return "chi2";
        case RankMethod::mutual_info: return "mutual_info";
        case RankMethod::forest_importance: return "forest_importance";
        case RankMethod::rfe_logistic: return "rfe_logistic";
    }
    return "?";
}

namespace {

void require_binary(const Matrix& x, const char* op) {
    if (!x.all_binary())
        fail(ErrorKind::FractionalInput, std::string(op) + " requires 0/1 entries");
}

// 2x2 joint counts of column j against the labels.
struct Joint {
    double n11 = 0, n10 = 0, n01 = 0, n00 = 0;
    double n() const { return n11 + n10 + n01 + n00; }
};

Joint joint_counts(const Matrix& x, const Labels& y, std::size_t j) {
    Joint t;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const bool xv = x.at(i, j) != 0.0;
        const bool yv = y[i] == 1;
        if (xv && yv) ++t.n11;
        else if (xv) ++t.n10;
        else if (yv) ++t.n01;
        else ++t.n00;
    }
    return t;
}

} // namespace

std::vector<double> pearson_scores(const Matrix& x, const Labels& y) {
    check_labels(y, x.rows());
    const std::size_t n = x.rows();
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    const double vy = my * (1.0 - my);
    std::vector<double> scores(x.cols(), 0.0);
    if (vy <= 0.0) return scores;
    for (std::size_t j = 0; j < x.cols(); ++j) {
        double sum = 0.0, sum2 = 0.0, sumy = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = x.at(i, j);
            sum += v;
            sum2 += v * v;
            if (y[i] == 1) sumy += v;
        }
        const double mx = sum / n;
        const double vx = sum2 / n - mx * mx;
        if (vx <= 0.0) continue;
        const double cov = sumy / n - mx * my;
        scores[j] = std::abs(cov / std::sqrt(vx * vy));
    }
    return scores;
}

std::vector<double> chi2_scores(const Matrix& x, const Labels& y) {
    check_labels(y, x.rows());
    require_binary(x, "chi2_scores");
    std::vector<double> scores(x.cols(), 0.0);
    for (std::size_t j = 0; j < x.cols(); ++j) {
        const Joint t = joint_counts(x, y, j);
        const double n = t.n();
        if (n == 0) continue;
        const double row1 = t.n11 + t.n10, row0 = t.n01 + t.n00;
        const double col1 = t.n11 + t.n01, col0 = t.n10 + t.n00;
        const double obs[4] = {t.n11, t.n10, t.n01, t.n00};
        const double exp[4] = {row1 * col1 / n, row1 * col0 / n, row0 * col1 / n,
                               row0 * col0 / n};
        double stat = 0.0;
        for (int c = 0; c < 4; ++c)
            if (exp[c] > 0.0) stat += (obs[c] - exp[c]) * (obs[c] - exp[c]) / exp[c];
        scores[j] = stat;
    }
    return scores;
}

std::vector<double> mutual_information_scores(const Matrix& x, const Labels& y) {
    check_labels(y, x.rows());
    require_binary(x, "mutual_information_scores");
    std::vector<double> scores(x.cols(), 0.0);
    for (std::size_t j = 0; j < x.cols(); ++j) {
        const Joint t = joint_counts(x, y, j);
        const double n = t.n();
        if (n == 0) continue;
        const double px1 = (t.n11 + t.n10) / n, px0 = 1.0 - px1;
        const double py1 = (t.n11 + t.n01) / n, py0 = 1.0 - py1;
        const double p[4] = {t.n11 / n, t.n10 / n, t.n01 / n, t.n00 / n};
        const double marg[4] = {px1 * py1, px1 * py0, px0 * py1, px0 * py0};
        double mi = 0.0;
        for (int c = 0; c < 4; ++c)
            if (p[c] > 0.0 && marg[c] > 0.0) mi += p[c] * std::log(p[c] / marg[c]);
        scores[j] = std::max(mi, 0.0);
    }
    return scores;
}

FeatureRanking ranking_from_scores(RankMethod method, std::vector<double> scores) {
    FeatureRanking r;
    r.method = method;
    r.order.resize(scores.size());
    std::iota(r.order.begin(), r.order.end(), std::size_t{0});
    std::stable_sort(r.order.begin(), r.order.end(), [&scores](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });
    r.scores = std::move(scores);
    return r;
}

std::vector<double> forest_importance_scores(const Matrix& x, const Labels& y,
                                             const ForestRankParams& params,
                                             std::uint64_t seed) {
    check_labels(y, x.rows());
    const std::size_t n = x.rows();
    const std::vector<double> weights(n, 1.0);
    std::vector<double> importance(x.cols(), 0.0);

    TreeParams tp;
    tp.criterion = SplitCriterion::gini;
    tp.max_depth = params.max_depth;
    tp.mtry = static_cast<std::size_t>(
        std::max(1.0, std::floor(std::sqrt(static_cast<double>(x.cols())))));

    std::vector<bool> binary_cols(x.cols());
    for (std::size_t c = 0; c < x.cols(); ++c) binary_cols[c] = x.column_is_binary(c);

    for (int t = 0; t < params.n_trees; ++t) {
        Rng rng(mix64(seed, static_cast<std::uint64_t>(t), 0xF07E57ULL));
        std::vector<std::size_t> rows(n);
        for (std::size_t i = 0; i < n; ++i) rows[i] = rng.index(n); // bootstrap
        ClassificationTree tree;
        tree.fit(x, y, weights, rows, tp, rng, &importance, &binary_cols);
    }

    double total = 0.0;
    for (double v : importance) total += v;
    if (total > 0.0)
        for (double& v : importance) v /= total;
    return importance;
}

FeatureRanking rfe_logistic_ranking(const Matrix& x, const Labels& y,
                                    const RfeParams& params, std::uint64_t seed) {
    (void)seed; // the logistic fit is deterministic
    check_labels(y, x.rows());
    const std::size_t d = x.cols();
    const std::size_t n = x.rows();
    if (d == 0) fail(ErrorKind::EmptyMatrix, "rfe on empty matrix");

    std::vector<std::size_t> surviving(d);
    std::iota(surviving.begin(), surviving.end(), std::size_t{0});
    std::vector<int> round_eliminated(d, 0);
    std::vector<double> last_abs_coef(d, 0.0);
    const std::vector<double> weights(n, 1.0);

    int round = 0;
    while (surviving.size() > 1) {
        ++round;
        // Standardize surviving columns so coefficient magnitudes compare.
        Matrix sub = x.select_columns(surviving);
        for (std::size_t j = 0; j < sub.cols(); ++j) {
            double mean = 0.0, var = 0.0;
            for (std::size_t i = 0; i < n; ++i) mean += sub.at(i, j);
            mean /= n;
            for (std::size_t i = 0; i < n; ++i) {
                const double c = sub.at(i, j) - mean;
                var += c * c;
            }
            var /= n;
            const double sd = var > 0.0 ? std::sqrt(var) : 1.0;
            for (std::size_t i = 0; i < n; ++i)
                sub.at(i, j) = (sub.at(i, j) - mean) / sd;
        }
        LogisticFitParams lp;
        lp.epochs = params.fit_epochs;
        lp.lr = params.fit_lr;
        const auto beta = logistic_fit(sub, y, weights, lp);

        std::vector<std::pair<double, std::size_t>> ranked; // (|coef|, position)
        for (std::size_t j = 0; j < surviving.size(); ++j) {
            last_abs_coef[surviving[j]] = std::abs(beta[j + 1]);
            ranked.push_back({std::abs(beta[j + 1]), j});
        }
        std::sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first < b.first;
            return surviving[a.second] < surviving[b.second];
        });

        std::size_t step = params.step;
        if (params.step_frac > 0.0)
            step = std::max<std::size_t>(
                1, static_cast<std::size_t>(params.step_frac * surviving.size()));
        // A step past the remaining columns clears them all in this round.
        step = std::min(step, surviving.size());
        std::vector<bool> drop(surviving.size(), false);
        for (std::size_t k = 0; k < step && k < ranked.size(); ++k)
            drop[ranked[k].second] = true;

        std::vector<std::size_t> next;
        for (std::size_t j = 0; j < surviving.size(); ++j) {
            if (drop[j]) round_eliminated[surviving[j]] = round;
            else next.push_back(surviving[j]);
        }
        surviving = std::move(next);
    }
    const int final_round = round + 1;
    for (std::size_t c : surviving) round_eliminated[c] = final_round;

    // Later elimination round ranks first; within a round, larger |coef|
    // first, then ascending column index.
    FeatureRanking r;
    r.method = RankMethod::rfe_logistic;
    r.scores.resize(d);
    for (std::size_t c = 0; c < d; ++c) r.scores[c] = round_eliminated[c];
    r.order.resize(d);
    std::iota(r.order.begin(), r.order.end(), std::size_t{0});
    std::sort(r.order.begin(), r.order.end(), [&](std::size_t a, std::size_t b) {
        if (round_eliminated[a] != round_eliminated[b])
            return round_eliminated[a] > round_eliminated[b];
        if (last_abs_coef[a] != last_abs_coef[b]) return last_abs_coef[a] > last_abs_coef[b];
        return a < b;
    });
    return r;
}

std::vector<std::size_t> top_k(const FeatureRanking& ranking, std::size_t k) {
    if (k < 1) fail(ErrorKind::Malformed, "top_k requires k >= 1");
    const std::size_t m = std::min(k, ranking.order.size());
    return {ranking.order.begin(), ranking.order.begin() + m};
}

SelectionResult merge_union(
    const std::vector<std::pair<RankMethod, std::vector<std::size_t>>>& selections) {
    if (selections.empty()) fail(ErrorKind::Malformed, "merge_union needs >= 1 selection");
    SelectionResult out;
    for (const auto& [method, cols] : selections) {
        for (std::size_t c : cols) {
            out.selected.insert(c);
            out.provenance[c].push_back(method);
        }
    }
    return out;
}

} // namespace sevlab
