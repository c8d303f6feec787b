#include <algorithm>
#include <cmath>

#include "sevlab/rng.hpp"
#include "models_impl.hpp"

namespace sevlab {

namespace detail {

namespace {

struct Standardized {
    Matrix x;
    std::vector<double> mean;
    std::vector<double> sd;
};

Standardized standardize(const Matrix& x) {
    Standardized s;
    s.x = x;
    s.mean.resize(x.cols());
    s.sd.resize(x.cols());
    const std::size_t n = x.rows();
    for (std::size_t j = 0; j < x.cols(); ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += x.at(i, j);
        mean /= n;
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double c = x.at(i, j) - mean;
            var += c * c;
        }
        var /= n;
        s.mean[j] = mean;
        s.sd[j] = var > 0.0 ? std::sqrt(var) : 1.0;
        for (std::size_t i = 0; i < n; ++i)
            s.x.at(i, j) = (x.at(i, j) - mean) / s.sd[j];
    }
    return s;
}

// Weighted log-likelihood plus Gaussian log-priors, up to a constant.
double log_posterior(const Matrix& x, const Labels& y, const std::vector<double>& weights,
                     const std::vector<double>& theta, double prior_sd,
                     double intercept_prior_sd) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    double ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = x.row(i);
        double z = theta[0];
        for (std::size_t j = 0; j < d; ++j) z += theta[j + 1] * row[j];
        const double sp = z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
        ll += weights[i] * ((y[i] == 1 ? z : 0.0) - sp);
    }
    double lp = -theta[0] * theta[0] / (2.0 * intercept_prior_sd * intercept_prior_sd);
    for (std::size_t j = 1; j <= d; ++j)
        lp -= theta[j] * theta[j] / (2.0 * prior_sd * prior_sd);
    return ll + lp;
}

} // namespace

std::vector<double> BayesLogitModel::predict(const Matrix& x) const {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    std::vector<double> out(n, 0.0);
    std::vector<double> std_row(d);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = x.row(i);
        for (std::size_t j = 0; j < d; ++j) std_row[j] = (row[j] - mean[j]) / sd[j];
        double acc = 0.0;
        for (const auto& theta : draws) {
            double z = theta[0];
            for (std::size_t j = 0; j < d; ++j) z += theta[j + 1] * std_row[j];
            acc += sigmoid(z);
        }
        out[i] = acc / static_cast<double>(draws.size());
    }
    return out;
}

TrainedModel train_bayes_logit(const ModelSpec& spec, const Matrix& x, const Labels& y,
                               const std::vector<double>& weights, const TrainConfig& cfg) {
    const auto& hp = spec.hp;
    const Standardized s = standardize(x);
    const std::size_t dim = x.cols() + 1;

    // Start the chain at the penalized MAP so short chains still predict
    // sensibly in high dimension.
    double total_w = 0.0;
    for (double w : weights) total_w += w;
    LogisticFitParams lp;
    lp.epochs = hp.map_epochs;
    lp.lr = 0.5;
    lp.l2 = 1.0 / (hp.prior_sd * hp.prior_sd * total_w);
    std::vector<double> theta = logistic_fit(s.x, y, weights, lp);

    Rng rng(mix64(cfg.seed, 0xBA7E5ULL));
    double step = 2.4 / std::sqrt(static_cast<double>(dim));
    double lpost =
        log_posterior(s.x, y, weights, theta, hp.prior_sd, hp.intercept_prior_sd);

    auto impl = std::make_shared<BayesLogitModel>();
    impl->mean = s.mean;
    impl->sd = s.sd;

    std::vector<double> proposal(dim);
    long kept_accepts = 0;
    long window_accepts = 0;
    const int window = 50;
    const int total_iters = hp.mcmc_burn_in + hp.mcmc_kept;
    for (int it = 0; it < total_iters; ++it) {
        for (std::size_t j = 0; j < dim; ++j) proposal[j] = theta[j] + step * rng.normal();
        const double cand =
            log_posterior(s.x, y, weights, proposal, hp.prior_sd, hp.intercept_prior_sd);
        const bool accept = std::log(1.0 - rng.uniform01() + 1e-300) < cand - lpost;
        if (accept) {
            theta = proposal;
            lpost = cand;
            ++window_accepts;
            if (it >= hp.mcmc_burn_in) ++kept_accepts;
        }
        // Step-size adaptation toward the target rate, burn-in only.
        if (it < hp.mcmc_burn_in && (it + 1) % window == 0) {
            const double rate = static_cast<double>(window_accepts) / window;
            step *= std::exp(rate - hp.target_accept);
            step = std::clamp(step, 1e-6, 10.0);
            window_accepts = 0;
        }
        if (it == hp.mcmc_burn_in - 1) window_accepts = 0;
        if (it >= hp.mcmc_burn_in && (it - hp.mcmc_burn_in) % hp.mcmc_thin == 0)
            impl->draws.push_back(theta);
    }
    impl->acceptance =
        hp.mcmc_kept > 0 ? static_cast<double>(kept_accepts) / hp.mcmc_kept : 0.0;

    TrainMeta meta;
    meta.seed = cfg.seed;
    meta.rounds = total_iters;
    meta.mcmc_acceptance = impl->acceptance;
    meta.final_train_loss = -lpost;
    return TrainedModel(spec, x.cols(), std::move(impl), meta);
}

} // namespace detail

PosteriorSummary posterior_summary(const TrainedModel& model) {
    if (model.spec().kind != ModelKind::bayes_logit || model.meta().constant)
        fail(ErrorKind::WrongKind, "posterior summary requires a bayes_logit model");
    const auto* impl = dynamic_cast<const detail::BayesLogitModel*>(model.impl());
    if (!impl) fail(ErrorKind::WrongKind, "posterior summary requires a bayes_logit model");

    const std::size_t d = impl->mean.size();
    const std::size_t n_draws = impl->draws.size();
    PosteriorSummary out;
    out.acceptance_rate = impl->acceptance;
    out.mean.resize(d + 1);
    out.sd.resize(d + 1);
    out.q025.resize(d + 1);
    out.q975.resize(d + 1);

    // Transform standardized-space draws back to the original scale.
    std::vector<double> values(n_draws);
    for (std::size_t c = 0; c <= d; ++c) {
        for (std::size_t t = 0; t < n_draws; ++t) {
            const auto& theta = impl->draws[t];
            if (c == 0) {
                double b0 = theta[0];
                for (std::size_t j = 0; j < d; ++j)
                    b0 -= theta[j + 1] * impl->mean[j] / impl->sd[j];
                values[t] = b0;
            } else {
                values[t] = theta[c] / impl->sd[c - 1];
            }
        }
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= n_draws;
        double var = 0.0;
        for (double v : values) var += (v - mean) * (v - mean);
        var = n_draws > 1 ? var / (n_draws - 1) : 0.0;
        std::sort(values.begin(), values.end());
        auto quantile = [&values](double q) {
            const double pos = q * (values.size() - 1);
            const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
            const std::size_t hi = std::min(lo + 1, values.size() - 1);
            const double frac = pos - std::floor(pos);
            return values[lo] * (1.0 - frac) + values[hi] * frac;
        };
        out.mean[c] = mean;
        out.sd[c] = std::sqrt(var);
        out.q025[c] = quantile(0.025);
        out.q975[c] = quantile(0.975);
    }
    return out;
}

} // namespace sevlab
