#pragma once

#include <vector>

#include "sevlab/matrix.hpp"

namespace sevlab {

struct LogisticFitParams {
    double lr = 0.1;
    int epochs = 500;
    double l2 = 1e-4; // not applied to the intercept
};

// Mean weighted log-loss plus L2 penalty; gradient written to *grad when
// non-null. beta = [intercept, coefficients...].
double logistic_loss_grad(const Matrix& x, const Labels& y,
                          const std::vector<double>& weights,
                          const std::vector<double>& beta, double l2,
                          std::vector<double>* grad);

// Full-batch gradient descent from zero init. Deterministic.
std::vector<double> logistic_fit(const Matrix& x, const Labels& y,
                                 const std::vector<double>& weights,
                                 const LogisticFitParams& params);

std::vector<double> logistic_predict(const Matrix& x, const std::vector<double>& beta);

double sigmoid(double z);

} // namespace sevlab
