#pragma once

#include <cstddef>
#include <vector>

#include "sevlab/matrix.hpp"

namespace sevlab {

// Positive class = HS (label 1).
struct ConfusionMatrix {
    long tp = 0;
    long fp = 0;
    long tn = 0;
    long fn = 0;

    long total() const { return tp + fp + tn + fn; }
};

struct MetricsReport {
    double accuracy = 0.0;
    double ls_precision = 0.0;
    double hs_precision = 0.0;
    double ls_recall = 0.0;
    double hs_recall = 0.0;
    double ls_f1 = 0.0;
    double hs_f1 = 0.0;
    double roc_auc = 0.0;
};

ConfusionMatrix confusion(const Labels& y_true, const Labels& y_pred);

// All Table-style per-class metrics. Zero-denominator precision/recall are
// defined as 0 so degenerate classifiers still render. roc_auc is left 0;
// callers fill it from roc_auc() when scores are available.
MetricsReport classification_metrics(const ConfusionMatrix& cm);

// Normalized Mann-Whitney statistic: pairs where an HS score exceeds an LS
// score count 1, ties count 1/2. Equals the trapezoidal ROC area.
double roc_auc(const Labels& y_true, const std::vector<double>& scores);

} // namespace sevlab
