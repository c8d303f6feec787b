#include "sevlab/logistic.hpp"

#include <cmath>

namespace sevlab {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

namespace {

// log(1 + e^z) without overflow.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

} // namespace

double logistic_loss_grad(const Matrix& x, const Labels& y,
                          const std::vector<double>& weights,
                          const std::vector<double>& beta, double l2,
                          std::vector<double>* grad) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    if (beta.size() != d + 1) fail(ErrorKind::LengthMismatch, "beta size mismatch");
    double total_w = 0.0;
    for (double w : weights) total_w += w;
    if (grad) grad->assign(d + 1, 0.0);

    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = x.row(i);
        double z = beta[0];
        for (std::size_t j = 0; j < d; ++j) z += beta[j + 1] * row[j];
        const double w = weights[i];
        // -[y z - log(1 + e^z)]
        loss += w * (softplus(z) - (y[i] == 1 ? z : 0.0));
        if (grad) {
            const double g = w * (sigmoid(z) - (y[i] == 1 ? 1.0 : 0.0));
            (*grad)[0] += g;
            for (std::size_t j = 0; j < d; ++j) (*grad)[j + 1] += g * row[j];
        }
    }
    loss /= total_w;
    double penalty = 0.0;
    for (std::size_t j = 1; j <= d; ++j) penalty += beta[j] * beta[j];
    loss += 0.5 * l2 * penalty;
    if (grad) {
        for (double& g : *grad) g /= total_w;
        for (std::size_t j = 1; j <= d; ++j) (*grad)[j] += l2 * beta[j];
    }
    return loss;
}

std::vector<double> logistic_fit(const Matrix& x, const Labels& y,
                                 const std::vector<double>& weights,
                                 const LogisticFitParams& params) {
    check_labels(y, x.rows());
    if (weights.size() != x.rows()) fail(ErrorKind::LengthMismatch, "weights size mismatch");
    std::vector<double> beta(x.cols() + 1, 0.0);
    std::vector<double> grad;
    for (int e = 0; e < params.epochs; ++e) {
        logistic_loss_grad(x, y, weights, beta, params.l2, &grad);
        for (std::size_t j = 0; j < beta.size(); ++j) beta[j] -= params.lr * grad[j];
    }
    return beta;
}

std::vector<double> logistic_predict(const Matrix& x, const std::vector<double>& beta) {
    if (beta.size() != x.cols() + 1)
        fail(ErrorKind::ColumnMismatch, "beta does not match column count");
    std::vector<double> out(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const double* row = x.row(i);
        double z = beta[0];
        for (std::size_t j = 0; j < x.cols(); ++j) z += beta[j + 1] * row[j];
        out[i] = sigmoid(z);
    }
    return out;
}

} // namespace sevlab
