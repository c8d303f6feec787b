#include "sevlab/balance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sevlab/kmeans.hpp"
#include "sevlab/rng.hpp"

namespace sevlab {

const char* balance_technique_name(BalanceTechnique t) {
    switch (t) {
        case BalanceTechnique::class_weight: return "class_weight";
        case BalanceTechnique::random_over: return "random_over";
        case BalanceTechnique::random_under: return "random_under";
        case BalanceTechnique::combined: return "combined";
        case BalanceTechnique::smote: return "smote";
        case BalanceTechnique::kmeans_smote: return "kmeans_smote";
        case BalanceTechnique::adasyn: return "adasyn";
        case BalanceTechnique::kernel_smote: return "kernel_smote";
        case BalanceTechnique::nearmiss1: return "nearmiss1";
    }
    return "?";
}

BalanceTechnique balance_technique_from_name(const std::string& name) {
    for (auto t : {BalanceTechnique::class_weight, BalanceTechnique::random_over,
                   BalanceTechnique::random_under, BalanceTechnique::combined,
                   BalanceTechnique::smote, BalanceTechnique::kmeans_smote,
                   BalanceTechnique::adasyn, BalanceTechnique::kernel_smote,
                   BalanceTechnique::nearmiss1})
        if (name == balance_technique_name(t)) return t;
    fail(ErrorKind::Malformed, "unknown balancing technique '" + name + "'");
}

std::vector<double> class_weights(const Labels& y, double hs_weight) {
    if (hs_weight <= 0.0) fail(ErrorKind::Malformed, "hs_weight must be positive");
    std::vector<double> w(y.size(), 1.0);
    for (std::size_t i = 0; i < y.size(); ++i)
        if (y[i] == 1) w[i] = hs_weight;
    return w;
}

namespace {

double sq_dist(const double* a, const double* b, std::size_t d) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        const double diff = a[j] - b[j];
        s += diff * diff;
    }
    return s;
}

struct ClassSplit {
    std::vector<std::size_t> ls; // label 0
    std::vector<std::size_t> hs; // label 1
};

ClassSplit split_classes(const Labels& y) {
    ClassSplit s;
    for (std::size_t i = 0; i < y.size(); ++i)
        (y[i] == 1 ? s.hs : s.ls).push_back(i);
    return s;
}

void validate_input(const Matrix& x, const Labels& y, const BalanceParams& p) {
    check_labels(y, x.rows());
    if (p.target_ratio <= 0.0) fail(ErrorKind::Malformed, "target_ratio must be positive");
    if (p.bandwidth < 0.0 || p.bandwidth > 1.0)
        fail(ErrorKind::Malformed, "bandwidth must be in [0, 1]");
}

ResampledSet originals_only(const Matrix& x, const Labels& y) {
    ResampledSet out;
    out.x = x;
    out.y = y;
    out.origin.assign(y.size(), Origin::original);
    out.source_row.resize(y.size());
    std::iota(out.source_row.begin(), out.source_row.end(), std::size_t{0});
    return out;
}

// Number of rows the growing class needs to reach ratio; 0 when already met.
long oversample_need(std::size_t n0, std::size_t n1, double ratio, int* grow_class) {
    const double want1 = ratio * static_cast<double>(n0);
    if (static_cast<double>(n1) < want1) {
        *grow_class = 1;
        return std::lround(want1) - static_cast<long>(n1);
    }
    const double want0 = static_cast<double>(n1) / ratio;
    if (static_cast<double>(n0) < want0) {
        *grow_class = 0;
        return std::lround(want0) - static_cast<long>(n0);
    }
    *grow_class = 1;
    return 0;
}

ResampledSet build_from_rows(const Matrix& x, const Labels& y,
                             const std::vector<std::size_t>& originals,
                             const std::vector<std::pair<std::size_t, Origin>>& extra_refs,
                             const std::vector<std::pair<std::vector<double>, int>>& synth) {
    ResampledSet out;
    out.x = Matrix(originals.size() + extra_refs.size() + synth.size(), x.cols());
    out.x.columns() = x.columns();
    std::size_t r = 0;
    for (std::size_t i : originals) {
        std::copy(x.row(i), x.row(i) + x.cols(), out.x.row(r));
        out.y.push_back(y[i]);
        out.origin.push_back(Origin::original);
        out.source_row.push_back(i);
        ++r;
    }
    for (const auto& [i, origin] : extra_refs) {
        std::copy(x.row(i), x.row(i) + x.cols(), out.x.row(r));
        out.y.push_back(y[i]);
        out.origin.push_back(origin);
        out.source_row.push_back(i);
        ++r;
    }
    for (const auto& [row, label] : synth) {
        std::copy(row.begin(), row.end(), out.x.row(r));
        out.y.push_back(label);
        out.origin.push_back(Origin::synthetic);
        out.source_row.push_back(std::numeric_limits<std::size_t>::max());
        ++r;
    }
    return out;
}

std::vector<double> interpolate(const double* a, const double* b, std::size_t d, double u,
                                bool binarize) {
    std::vector<double> row(d);
    for (std::size_t j = 0; j < d; ++j) {
        row[j] = a[j] + u * (b[j] - a[j]);
        if (binarize) row[j] = row[j] >= 0.5 ? 1.0 : 0.0;
    }
    return row;
}

// Largest-remainder allocation of `total` synthetic rows over weights.
std::vector<long> allocate(const std::vector<double>& weights, long total) {
    const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    std::vector<long> counts(weights.size(), 0);
    if (total <= 0) return counts;
    std::vector<double> share(weights.size());
    if (sum <= 0.0) {
        std::fill(share.begin(), share.end(),
                  static_cast<double>(total) / weights.size());
    } else {
        for (std::size_t i = 0; i < weights.size(); ++i)
            share[i] = weights[i] / sum * total;
    }
    long assigned = 0;
    std::vector<std::pair<double, std::size_t>> rem;
    for (std::size_t i = 0; i < share.size(); ++i) {
        counts[i] = static_cast<long>(std::floor(share[i]));
        assigned += counts[i];
        rem.push_back({share[i] - std::floor(share[i]), i});
    }
    std::sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (long k = 0; k < total - assigned; ++k) ++counts[rem[static_cast<std::size_t>(k)].second];
    return counts;
}

} // namespace

std::vector<std::vector<std::size_t>> k_nearest(const Matrix& x,
                                                const std::vector<std::size_t>& queries,
                                                const std::vector<std::size_t>& candidates,
                                                std::size_t k) {
    std::vector<std::vector<std::size_t>> out(queries.size());
    std::vector<std::pair<double, std::size_t>> dists;
    for (std::size_t qi = 0; qi < queries.size(); ++qi) {
        dists.clear();
        for (std::size_t c : candidates) {
            if (c == queries[qi]) continue;
            dists.push_back({sq_dist(x.row(queries[qi]), x.row(c), x.cols()), c});
        }
        const std::size_t kk = std::min(k, dists.size());
        std::partial_sort(dists.begin(), dists.begin() + kk, dists.end(),
                          [](const auto& a, const auto& b) {
                              if (a.first != b.first) return a.first < b.first;
                              return a.second < b.second;
                          });
        for (std::size_t i = 0; i < kk; ++i) out[qi].push_back(dists[i].second);
    }
    return out;
}

ResampledSet random_oversample(const Matrix& x, const Labels& y, const BalanceParams& p) {
    validate_input(x, y, p);
    const ClassSplit cls = split_classes(y);
    int grow = 1;
    const long need = oversample_need(cls.ls.size(), cls.hs.size(), p.target_ratio, &grow);
    const auto& pool = grow == 1 ? cls.hs : cls.ls;
    if (need > 0 && pool.empty()) fail(ErrorKind::EmptyClass, "nothing to oversample");

    Rng rng(mix64(p.seed, 0x05E12ULL));
    std::vector<std::size_t> originals(y.size());
    std::iota(originals.begin(), originals.end(), std::size_t{0});
    std::vector<std::pair<std::size_t, Origin>> extra;
    for (long i = 0; i < need; ++i)
        extra.push_back({pool[rng.index(pool.size())], Origin::duplicated});
    return build_from_rows(x, y, originals, extra, {});
}

ResampledSet random_undersample(const Matrix& x, const Labels& y, const BalanceParams& p) {
    validate_input(x, y, p);
    const ClassSplit cls = split_classes(y);
    // Shrink whichever class exceeds the target ratio.
    const double want0 = static_cast<double>(cls.hs.size()) / p.target_ratio;
    const double want1 = p.target_ratio * static_cast<double>(cls.ls.size());
    int shrink;
    long keep;
    if (static_cast<double>(cls.ls.size()) > want0) {
        shrink = 0;
        keep = std::lround(want0);
    } else if (static_cast<double>(cls.hs.size()) > want1) {
        shrink = 1;
        keep = std::lround(want1);
    } else {
        return originals_only(x, y);
    }
    const auto& pool = shrink == 0 ? cls.ls : cls.hs;
    if (keep < 1 || static_cast<std::size_t>(keep) > pool.size())
        fail(ErrorKind::Malformed, "undersampling target " + std::to_string(keep) +
                                       " outside [1, " + std::to_string(pool.size()) + "]");

    Rng rng(mix64(p.seed, 0x07DE2ULL));
    auto chosen = rng.sample_without_replacement(pool.size(), static_cast<std::size_t>(keep));
    std::vector<bool> kept_row(y.size(), false);
    for (std::size_t i : shrink == 0 ? cls.hs : cls.ls) kept_row[i] = true;
    for (std::size_t i : chosen) kept_row[pool[i]] = true;
    std::vector<std::size_t> originals;
    for (std::size_t i = 0; i < y.size(); ++i)
        if (kept_row[i]) originals.push_back(i);
    return build_from_rows(x, y, originals, {}, {});
}

ResampledSet combined_over_under(const Matrix& x, const Labels& y, const BalanceParams& p) {
    validate_input(x, y, p);
    const ClassSplit cls = split_classes(y);
    const long total = static_cast<long>(y.size());
    // Per-class targets at the requested ratio, keeping the original total.
    const long target0 = static_cast<long>(
        std::floor(static_cast<double>(total) / (1.0 + p.target_ratio)));
    const long target1 = total - target0;
    if (target0 < 1 || target1 < 1)
        fail(ErrorKind::Malformed, "combined targets must be positive");

    Rng rng(mix64(p.seed, 0xC0B1EDULL));
    std::vector<std::size_t> originals;
    std::vector<std::pair<std::size_t, Origin>> extra;
    struct Task {
        const std::vector<std::size_t>* pool;
        long target;
    };
    for (const Task& task : {Task{&cls.ls, target0}, Task{&cls.hs, target1}}) {
        const auto& pool = *task.pool;
        const long have = static_cast<long>(pool.size());
        if (have >= task.target) {
            auto chosen =
                rng.sample_without_replacement(pool.size(), static_cast<std::size_t>(task.target));
            std::sort(chosen.begin(), chosen.end());
            for (std::size_t i : chosen) originals.push_back(pool[i]);
        } else {
            if (pool.empty()) fail(ErrorKind::EmptyClass, "cannot grow an empty class");
            originals.insert(originals.end(), pool.begin(), pool.end());
            for (long i = 0; i < task.target - have; ++i)
                extra.push_back({pool[rng.index(pool.size())], Origin::duplicated});
        }
    }
    std::sort(originals.begin(), originals.end());
    return build_from_rows(x, y, originals, extra, {});
}

namespace {

// Shared SMOTE synthesis: interpolate `need` rows between minority points and
// their k nearest minority neighbors.
std::vector<std::pair<std::vector<double>, int>> smote_rows(
    const Matrix& x, const std::vector<std::size_t>& minority, int minority_label,
    long need, int k_neighbors, bool binarize, Rng& rng) {
    std::vector<std::pair<std::vector<double>, int>> synth;
    if (need <= 0) return synth;
    if (minority.size() < 2)
        fail(ErrorKind::TooFewMinority, "SMOTE needs at least 2 minority rows");
    const std::size_t k =
        std::min<std::size_t>(static_cast<std::size_t>(k_neighbors), minority.size() - 1);
    const auto neighbors = k_nearest(x, minority, minority, k);
    for (long s = 0; s < need; ++s) {
        const std::size_t mi = rng.index(minority.size());
        const auto& nbrs = neighbors[mi];
        const std::size_t pj = nbrs[rng.index(nbrs.size())];
        const double u = rng.uniform01();
        synth.push_back(
            {interpolate(x.row(minority[mi]), x.row(pj), x.cols(), u, binarize),
             minority_label});
    }
    return synth;
}

} // namespace

ResampledSet smote(const Matrix& x, const Labels& y, const BalanceParams& p) {
    validate_input(x, y, p);
    const ClassSplit cls = split_classes(y);
    int grow = 1;
    const long need = oversample_need(cls.ls.size(), cls.hs.size(), p.target_ratio, &grow);
    const auto& minority = grow == 1 ? cls.hs : cls.ls;
    Rng rng(mix64(p.seed, 0x5307EULL));
    auto synth = smote_rows(x, minority, grow, need, p.k_neighbors, p.binarize, rng);
    std::vector<std::size_t> originals(y.size());
    std::iota(originals.begin(), originals.end(), std::size_t{0});
    return build_from_rows(x, y, originals, {}, synth);
}

ResampledSet kmeans_smote(const Matrix& x, const Labels& y, const BalanceParams& p) {
    validate_input(x, y, p);
    const ClassSplit cls = split_classes(y);
    int grow = 1;
    const long need = oversample_need(cls.ls.size(), cls.hs.size(), p.target_ratio, &grow);
    const auto& minority = grow == 1 ? cls.hs : cls.ls;
    if (need > 0 && minority.size() < 2)
        fail(ErrorKind::TooFewMinority, "KMeansSMOTE needs at least 2 minority rows");
    if (need <= 0) return originals_only(x, y);

    const int k = std::min<int>(p.n_clusters, static_cast<int>(x.rows()));
    const auto km = kmeans(x, k, mix64(p.seed, 0x4D5EULL));

    // Eligible clusters are minority-dominated and hold at least 2 minority
    // rows (otherwise there is nothing to interpolate between).
    struct Cluster {
        std::vector<std::size_t> minority_rows;
        std::size_t size = 0;
    };
    std::vector<Cluster> clusters(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < x.rows(); ++i)
        ++clusters[static_cast<std::size_t>(km.assignment[i])].size;
    for (std::size_t i : minority)
        clusters[static_cast<std::size_t>(km.assignment[i])].minority_rows.push_back(i);

    std::vector<std::size_t> eligible;
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        const auto& cl = clusters[c];
        if (cl.size == 0 || cl.minority_rows.size() < 2) continue;
        const double frac = static_cast<double>(cl.minority_rows.size()) / cl.size;
        if (frac >= 0.5) eligible.push_back(c);
    }
    if (eligible.empty()) return smote(x, y, p); // same seed stream as plain SMOTE

    // Sparsity weight: mean pairwise minority distance over minority count.
    std::vector<double> weights;
    for (std::size_t c : eligible) {
        const auto& rows = clusters[c].minority_rows;
        double total = 0.0;
        std::size_t pairs = 0;
        for (std::size_t a = 0; a < rows.size(); ++a)
            for (std::size_t b = a + 1; b < rows.size(); ++b) {
                total += std::sqrt(sq_dist(x.row(rows[a]), x.row(rows[b]), x.cols()));
                ++pairs;
            }
        const double mean_dist = pairs ? total / pairs : 0.0;
        weights.push_back(mean_dist / static_cast<double>(rows.size()));
    }
    const auto counts = allocate(weights, need);

    Rng rng(mix64(p.seed, 0x4D5E2ULL));
    std::vector<std::pair<std::vector<double>, int>> synth;
    for (std::size_t e = 0; e < eligible.size(); ++e) {
        auto part = smote_rows(x, clusters[eligible[e]].minority_rows, grow, counts[e],
                               p.k_neighbors, p.binarize, rng);
        synth.insert(synth.end(), part.begin(), part.end());
    }
    std::vector<std::size_t> originals(y.size());
    std::iota(originals.begin(), originals.end(), std::size_t{0});
    return build_from_rows(x, y, originals, {}, synth);
}

ResampledSet adasyn(const Matrix& x, const Labels& y, const BalanceParams& p) {
    validate_input(x, y, p);
    const ClassSplit cls = split_classes(y);
    int grow = 1;
    const long need = oversample_need(cls.ls.size(), cls.hs.size(), p.target_ratio, &grow);
    const auto& minority = grow == 1 ? cls.hs : cls.ls;
    if (need > 0 && minority.size() < 2)
        fail(ErrorKind::TooFewMinority, "ADASYN needs at least 2 minority rows");
    if (need <= 0) return originals_only(x, y);

    // Difficulty r_i: majority share among each minority row's k nearest
    // neighbors over all rows. Uniform fallback when every r_i is zero.
    std::vector<std::size_t> all_rows(x.rows());
    std::iota(all_rows.begin(), all_rows.end(), std::size_t{0});
    const std::size_t k =
        std::min<std::size_t>(static_cast<std::size_t>(p.k_neighbors), x.rows() - 1);
    const auto neighborhoods = k_nearest(x, minority, all_rows, k);
    std::vector<double> difficulty(minority.size(), 0.0);
    for (std::size_t i = 0; i < minority.size(); ++i) {
        std::size_t majority_n = 0;
        for (std::size_t nb : neighborhoods[i])
            if (y[nb] != grow) ++majority_n;
        difficulty[i] = neighborhoods[i].empty()
                            ? 0.0
                            : static_cast<double>(majority_n) / neighborhoods[i].size();
    }
    const auto counts = allocate(difficulty, need);

    const std::size_t km =
        std::min<std::size_t>(static_cast<std::size_t>(p.k_neighbors), minority.size() - 1);
    const auto min_neighbors = k_nearest(x, minority, minority, km);
    Rng rng(mix64(p.seed, 0xADA5ULL));
    std::vector<std::pair<std::vector<double>, int>> synth;
    for (std::size_t i = 0; i < minority.size(); ++i) {
        for (long s = 0; s < counts[i]; ++s) {
            const auto& nbrs = min_neighbors[i];
            const std::size_t pj = nbrs[rng.index(nbrs.size())];
            const double u = rng.uniform01();
            synth.push_back(
                {interpolate(x.row(minority[i]), x.row(pj), x.cols(), u, p.binarize),
                 grow});
        }
    }
    std::vector<std::size_t> originals(y.size());
    std::iota(originals.begin(), originals.end(), std::size_t{0});
    return build_from_rows(x, y, originals, {}, synth);
}

ResampledSet kernel_smote(const Matrix& x, const Labels& y, const BalanceParams& p) {
    validate_input(x, y, p);
    const ClassSplit cls = split_classes(y);
    int grow = 1;
    const long need = oversample_need(cls.ls.size(), cls.hs.size(), p.target_ratio, &grow);
    const auto& minority = grow == 1 ? cls.hs : cls.ls;
    if (need > 0 && minority.empty())
        fail(ErrorKind::TooFewMinority, "kernel SMOTE needs minority rows");

    Rng rng(mix64(p.seed, 0x6E12ULL));
    std::vector<std::pair<std::vector<double>, int>> synth;
    for (long s = 0; s < need; ++s) {
        const std::size_t src = minority[rng.index(minority.size())];
        std::vector<double> row(x.row(src), x.row(src) + x.cols());
        for (double& v : row)
            if (rng.bernoulli(p.bandwidth)) v = 1.0 - v;
        if (p.binarize)
            for (double& v : row) v = v >= 0.5 ? 1.0 : 0.0;
        synth.push_back({std::move(row), grow});
    }
    std::vector<std::size_t> originals(y.size());
    std::iota(originals.begin(), originals.end(), std::size_t{0});
    return build_from_rows(x, y, originals, {}, synth);
}

ResampledSet nearmiss1(const Matrix& x, const Labels& y, const BalanceParams& p) {
    validate_input(x, y, p);
    const ClassSplit cls = split_classes(y);
    const double want0 = static_cast<double>(cls.hs.size()) / p.target_ratio;
    const double want1 = p.target_ratio * static_cast<double>(cls.ls.size());
    int shrink;
    long keep;
    if (static_cast<double>(cls.ls.size()) > want0) {
        shrink = 0;
        keep = std::lround(want0);
    } else if (static_cast<double>(cls.hs.size()) > want1) {
        shrink = 1;
        keep = std::lround(want1);
    } else {
        return originals_only(x, y);
    }
    const auto& majority = shrink == 0 ? cls.ls : cls.hs;
    const auto& minority = shrink == 0 ? cls.hs : cls.ls;
    if (minority.empty()) fail(ErrorKind::EmptyClass, "NearMiss-1 needs minority rows");
    keep = std::max<long>(keep, 1);

    const std::size_t k = std::min<std::size_t>(3, minority.size());
    const auto neighbors = k_nearest(x, majority, minority, k);
    std::vector<std::pair<double, std::size_t>> scored; // (mean distance, row)
    for (std::size_t i = 0; i < majority.size(); ++i) {
        double total = 0.0;
        for (std::size_t nb : neighbors[i])
            total += std::sqrt(sq_dist(x.row(majority[i]), x.row(nb), x.cols()));
        scored.push_back({total / k, majority[i]});
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second < b.second;
    });

    std::vector<bool> kept_row(y.size(), false);
    for (std::size_t i : minority) kept_row[i] = true;
    for (long i = 0; i < keep; ++i) kept_row[scored[static_cast<std::size_t>(i)].second] = true;
    std::vector<std::size_t> originals;
    for (std::size_t i = 0; i < y.size(); ++i)
        if (kept_row[i]) originals.push_back(i);
    return build_from_rows(x, y, originals, {}, {});
}

BalanceOutcome apply_balance(const Matrix& x, const Labels& y, const BalanceParams& p) {
    BalanceOutcome out;
    switch (p.technique) {
        case BalanceTechnique::class_weight:
            out.set = originals_only(x, y);
            out.weights = class_weights(y, p.hs_weight);
            return out;
        case BalanceTechnique::random_over: out.set = random_oversample(x, y, p); return out;
        case BalanceTechnique::random_under: out.set = random_undersample(x, y, p); return out;
        case BalanceTechnique::combined: out.set = combined_over_under(x, y, p); return out;
        case BalanceTechnique::smote: out.set = smote(x, y, p); return out;
        case BalanceTechnique::kmeans_smote: out.set = kmeans_smote(x, y, p); return out;
        case BalanceTechnique::adasyn: out.set = adasyn(x, y, p); return out;
        case BalanceTechnique::kernel_smote: out.set = kernel_smote(x, y, p); return out;
        case BalanceTechnique::nearmiss1: out.set = nearmiss1(x, y, p); return out;
    }
    fail(ErrorKind::Internal, "unhandled balancing technique");
}

} // namespace sevlab
