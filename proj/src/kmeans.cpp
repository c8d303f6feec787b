#include "sevlab/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sevlab/rng.hpp"

namespace sevlab {

namespace {

double sq_dist(const double* a, const double* b, std::size_t d) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        const double diff = a[j] - b[j];
        s += diff * diff;
    }
    return s;
}

} // namespace

KMeansResult kmeans(const Matrix& x, int k, std::uint64_t seed, int max_iter) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    if (k < 1 || static_cast<std::size_t>(k) > n)
        fail(ErrorKind::Malformed, "k must be in [1, rows]");
    Rng rng(seed);

    // kmeans++ seeding.
    KMeansResult res;
    res.centers.reserve(static_cast<std::size_t>(k));
    {
        const std::size_t first = rng.index(n);
        res.centers.emplace_back(x.row(first), x.row(first) + d);
        std::vector<double> min_sq(n, std::numeric_limits<double>::infinity());
        while (res.centers.size() < static_cast<std::size_t>(k)) {
            double total = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double dist = sq_dist(x.row(i), res.centers.back().data(), d);
                min_sq[i] = std::min(min_sq[i], dist);
                total += min_sq[i];
            }
            std::size_t pick;
            if (total <= 0.0) {
                pick = rng.index(n);
            } else {
                double target = rng.uniform01() * total;
                pick = n - 1;
                for (std::size_t i = 0; i < n; ++i) {
                    target -= min_sq[i];
                    if (target <= 0.0) {
                        pick = i;
                        break;
                    }
                }
            }
            res.centers.emplace_back(x.row(pick), x.row(pick) + d);
        }
    }

    res.assignment.assign(n, 0);
    for (int iter = 0; iter < max_iter; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                const double dist = sq_dist(x.row(i), res.centers[static_cast<std::size_t>(c)].data(), d);
                if (dist < best_d) {
                    best_d = dist;
                    best = c;
                }
            }
            if (res.assignment[i] != best) {
                res.assignment[i] = best;
                changed = true;
            }
        }
        res.iterations = iter + 1;

        std::vector<std::vector<double>> sums(static_cast<std::size_t>(k),
                                              std::vector<double>(d, 0.0));
        std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(res.assignment[i]);
            ++counts[c];
            const double* row = x.row(i);
            for (std::size_t j = 0; j < d; ++j) sums[c][j] += row[j];
        }
        for (int c = 0; c < k; ++c) {
            const auto cc = static_cast<std::size_t>(c);
            if (counts[cc] == 0) {
                // Reseed an empty cluster at the point farthest from its center.
                std::size_t far = 0;
                double far_d = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const auto a = static_cast<std::size_t>(res.assignment[i]);
                    const double dist = sq_dist(x.row(i), res.centers[a].data(), d);
                    if (dist > far_d) {
                        far_d = dist;
                        far = i;
                    }
                }
                res.centers[cc].assign(x.row(far), x.row(far) + d);
                changed = true;
                continue;
            }
            for (std::size_t j = 0; j < d; ++j)
                res.centers[cc][j] = sums[cc][j] / counts[cc];
        }
        if (!changed) break;
    }
    return res;
}

} // namespace sevlab
