#include "sevlab/mlp.hpp"

#include <cmath>
#include <numeric>

#include "sevlab/logistic.hpp"
#include "sevlab/rng.hpp"

namespace sevlab {

MlpNet MlpNet::make(int inputs, const std::vector<int>& hidden, std::uint64_t seed) {
    MlpNet net;
    net.sizes.push_back(inputs);
    for (int h : hidden) net.sizes.push_back(h);
    net.sizes.push_back(1);

    std::size_t count = 0;
    for (std::size_t l = 0; l + 1 < net.sizes.size(); ++l)
        count += static_cast<std::size_t>(net.sizes[l + 1]) * net.sizes[l] + net.sizes[l + 1];
    net.params.resize(count);

    Rng rng(mix64(seed, 0x313BULL));
    std::size_t off = 0;
    for (std::size_t l = 0; l + 1 < net.sizes.size(); ++l) {
        const int fan_in = net.sizes[l];
        const int fan_out = net.sizes[l + 1];
        const double scale = std::sqrt(2.0 / fan_in); // He init
        for (int i = 0; i < fan_out * fan_in; ++i) net.params[off++] = scale * rng.normal();
        for (int i = 0; i < fan_out; ++i) net.params[off++] = 0.0;
    }
    return net;
}

namespace {

struct LayerView {
    const double* w; // [out x in], row-major
    const double* b;
    int in, out;
};

std::vector<LayerView> layers_of(const MlpNet& net) {
    std::vector<LayerView> layers;
    std::size_t off = 0;
    for (std::size_t l = 0; l + 1 < net.sizes.size(); ++l) {
        LayerView v;
        v.in = net.sizes[l];
        v.out = net.sizes[l + 1];
        v.w = net.params.data() + off;
        off += static_cast<std::size_t>(v.out) * v.in;
        v.b = net.params.data() + off;
        off += static_cast<std::size_t>(v.out);
        layers.push_back(v);
    }
    return layers;
}

} // namespace

std::vector<double> MlpNet::forward(const Matrix& x,
                                    const std::vector<std::size_t>& rows) const {
    const auto layers = layers_of(*this);
    std::vector<double> logits(rows.size());
    std::vector<double> cur, next;
    for (std::size_t ri = 0; ri < rows.size(); ++ri) {
        const double* row = x.row(rows[ri]);
        cur.assign(row, row + x.cols());
        for (std::size_t l = 0; l < layers.size(); ++l) {
            const auto& L = layers[l];
            next.assign(static_cast<std::size_t>(L.out), 0.0);
            for (int o = 0; o < L.out; ++o) {
                double z = L.b[o];
                const double* wrow = L.w + static_cast<std::size_t>(o) * L.in;
                for (int i = 0; i < L.in; ++i) z += wrow[i] * cur[static_cast<std::size_t>(i)];
                next[static_cast<std::size_t>(o)] =
                    (l + 1 < layers.size()) ? std::max(z, 0.0) : z; // ReLU except head
            }
            cur.swap(next);
        }
        logits[ri] = cur[0];
    }
    return logits;
}

double MlpNet::loss_and_grad(const Matrix& x, const Labels& y,
                             const std::vector<double>& weights,
                             const std::vector<std::size_t>& rows,
                             std::vector<double>* grad) const {
    const auto layers = layers_of(*this);
    if (grad) grad->assign(params.size(), 0.0);

    double total_w = 0.0;
    for (std::size_t r : rows) total_w += weights[r];
    if (total_w <= 0.0) fail(ErrorKind::Malformed, "non-positive batch weight");

    // Per-layer activations for one row at a time (batch sizes are small).
    std::vector<std::vector<double>> acts(layers.size() + 1);
    std::vector<std::vector<double>> deltas(layers.size());
    double loss = 0.0;

    for (std::size_t r : rows) {
        const double* row = x.row(r);
        acts[0].assign(row, row + x.cols());
        for (std::size_t l = 0; l < layers.size(); ++l) {
            const auto& L = layers[l];
            acts[l + 1].assign(static_cast<std::size_t>(L.out), 0.0);
            for (int o = 0; o < L.out; ++o) {
                double z = L.b[o];
                const double* wrow = L.w + static_cast<std::size_t>(o) * L.in;
                for (int i = 0; i < L.in; ++i) z += wrow[i] * acts[l][static_cast<std::size_t>(i)];
                acts[l + 1][static_cast<std::size_t>(o)] =
                    (l + 1 < layers.size()) ? std::max(z, 0.0) : z;
            }
        }
        const double z = acts.back()[0];
        const double w = weights[r] / total_w;
        const double target = y[r] == 1 ? 1.0 : 0.0;
        loss += w * ((z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z))) -
                     target * z);
        if (!grad) continue;

        // Backprop: head delta is dL/dz, hidden deltas gate through ReLU.
        deltas.back().assign(1, w * (sigmoid(z) - target));
        for (std::size_t l = layers.size(); l-- > 1;) {
            const auto& L = layers[l];
            deltas[l - 1].assign(static_cast<std::size_t>(L.in), 0.0);
            for (int o = 0; o < L.out; ++o) {
                const double dz = deltas[l][static_cast<std::size_t>(o)];
                if (dz == 0.0) continue;
                const double* wrow = L.w + static_cast<std::size_t>(o) * L.in;
                for (int i = 0; i < L.in; ++i)
                    deltas[l - 1][static_cast<std::size_t>(i)] += dz * wrow[i];
            }
            for (int i = 0; i < L.in; ++i)
                if (acts[l][static_cast<std::size_t>(i)] <= 0.0)
                    deltas[l - 1][static_cast<std::size_t>(i)] = 0.0;
        }

        std::size_t off = 0;
        for (std::size_t l = 0; l < layers.size(); ++l) {
            const auto& L = layers[l];
            for (int o = 0; o < L.out; ++o) {
                const double dz = deltas[l][static_cast<std::size_t>(o)];
                double* gw = grad->data() + off + static_cast<std::size_t>(o) * L.in;
                if (dz != 0.0)
                    for (int i = 0; i < L.in; ++i)
                        gw[i] += dz * acts[l][static_cast<std::size_t>(i)];
            }
            off += static_cast<std::size_t>(L.out) * L.in;
            for (int o = 0; o < L.out; ++o)
                (*grad)[off + static_cast<std::size_t>(o)] +=
                    deltas[l][static_cast<std::size_t>(o)];
            off += static_cast<std::size_t>(L.out);
        }
    }
    return loss;
}

double mlp_train(MlpNet& net, const Matrix& x, const Labels& y,
                 const std::vector<double>& weights, const MlpTrainParams& params,
                 std::uint64_t seed) {
    const std::size_t n = x.rows();
    Rng rng(mix64(seed, 0xADA3ULL));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});

    // Adam state.
    std::vector<double> m(net.params.size(), 0.0), v(net.params.size(), 0.0);
    const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    long step = 0;
    std::vector<double> grad;

    for (int epoch = 0; epoch < params.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(params.batch_size)) {
            const std::size_t end = std::min(n, start + static_cast<std::size_t>(params.batch_size));
            const std::vector<std::size_t> batch(order.begin() + start, order.begin() + end);
            net.loss_and_grad(x, y, weights, batch, &grad);
            ++step;
            const double bc1 = 1.0 - std::pow(b1, static_cast<double>(step));
            const double bc2 = 1.0 - std::pow(b2, static_cast<double>(step));
            for (std::size_t j = 0; j < net.params.size(); ++j) {
                m[j] = b1 * m[j] + (1.0 - b1) * grad[j];
                v[j] = b2 * v[j] + (1.0 - b2) * grad[j] * grad[j];
                net.params[j] -= params.lr * (m[j] / bc1) / (std::sqrt(v[j] / bc2) + eps);
            }
        }
    }
    std::iota(order.begin(), order.end(), std::size_t{0});
    return net.loss_and_grad(x, y, weights, order, nullptr);
}

} // namespace sevlab
