#include "sevlab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sevlab {

ConfusionMatrix confusion(const Labels& y_true, const Labels& y_pred) {
    if (y_true.size() != y_pred.size())
        fail(ErrorKind::LengthMismatch, "confusion: length mismatch");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] != 0 && y_true[i] != 1)
            fail(ErrorKind::Malformed, "labels must be 0 or 1");
        if (y_pred[i] != 0 && y_pred[i] != 1)
            fail(ErrorKind::Malformed, "predictions must be 0 or 1");
        if (y_true[i] == 1) {
            if (y_pred[i] == 1) ++cm.tp;
            else ++cm.fn;
        } else {
            if (y_pred[i] == 1) ++cm.fp;
            else ++cm.tn;
        }
    }
    return cm;
}

namespace {

double ratio_or_zero(double num, double den) { return den > 0.0 ? num / den : 0.0; }

double f1(double precision, double recall) {
    const double den = precision + recall;
    return den > 0.0 ? 2.0 * precision * recall / den : 0.0;
}

} // namespace

MetricsReport classification_metrics(const ConfusionMatrix& cm) {
    if (cm.total() <= 0) fail(ErrorKind::EmptyMatrix, "empty confusion matrix");
    MetricsReport r;
    r.accuracy = static_cast<double>(cm.tp + cm.tn) / cm.total();
    r.hs_precision = ratio_or_zero(cm.tp, cm.tp + cm.fp);
    r.hs_recall = ratio_or_zero(cm.tp, cm.tp + cm.fn);
    // LS metrics come from the mirrored matrix (tn plays the positive role).
    r.ls_precision = ratio_or_zero(cm.tn, cm.tn + cm.fn);
    r.ls_recall = ratio_or_zero(cm.tn, cm.tn + cm.fp);
    r.hs_f1 = f1(r.hs_precision, r.hs_recall);
    r.ls_f1 = f1(r.ls_precision, r.ls_recall);
    return r;
}

double roc_auc(const Labels& y_true, const std::vector<double>& scores) {
    if (y_true.size() != scores.size())
        fail(ErrorKind::LengthMismatch, "roc_auc: length mismatch");
    long n1 = 0;
    for (int v : y_true) n1 += v == 1 ? 1 : 0;
    const long n0 = static_cast<long>(y_true.size()) - n1;
    if (n1 == 0 || n0 == 0) fail(ErrorKind::SingleClass, "roc_auc needs both classes");
    for (double s : scores)
        if (!std::isfinite(s)) fail(ErrorKind::NonFinite, "roc_auc: non-finite score");

    // Mann-Whitney with average ranks for ties.
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&scores](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double avg_rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (std::size_t t = i; t <= j; ++t)
            if (y_true[order[t]] == 1) rank_sum_pos += avg_rank;
        i = j + 1;
    }
    const double u = rank_sum_pos - static_cast<double>(n1) * (n1 + 1) / 2.0;
    return u / (static_cast<double>(n1) * static_cast<double>(n0));
}

} // namespace sevlab
