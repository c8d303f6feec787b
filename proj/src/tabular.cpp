#include "sevlab/tabular.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "sevlab/rng.hpp"

namespace sevlab {

RawTable apply_missing_policy(const RawTable& table, double drop_threshold,
                              double impute_threshold) {
    if (drop_threshold < 0.0 || drop_threshold > 1.0 || impute_threshold < 0.0 ||
        impute_threshold > 1.0 || drop_threshold < impute_threshold)
        fail(ErrorKind::Malformed, "thresholds must satisfy 0 <= impute <= drop <= 1");

    const std::size_t n = table.n_rows();
    RawTable out;
    out.schema = table.schema;
    out.labels = table.labels;

    std::vector<std::size_t> kept_features;
    std::vector<int> fill_value(table.n_features(), kMissing);
    for (std::size_t j = 0; j < table.n_features(); ++j) {
        std::size_t missing = 0;
        std::map<int, std::size_t> counts;
        for (std::size_t i = 0; i < n; ++i) {
            const int v = table.rows[i][j];
            if (v == kMissing) ++missing;
            else ++counts[v];
        }
        const double frac = n == 0 ? 0.0 : static_cast<double>(missing) / n;
        if (frac > drop_threshold) continue;
        if (frac > impute_threshold)
            fail(ErrorKind::IntermediateMissingness,
                 table.headers[j] + " has missing fraction " + std::to_string(frac));
        if (missing > 0) {
            // Mode; ties resolve to the lowest category code (map order).
            std::size_t best = 0;
            for (const auto& [code, c] : counts) {
                if (c > best) {
                    best = c;
                    fill_value[j] = code;
                }
            }
        }
        kept_features.push_back(j);
    }

    for (std::size_t j : kept_features) out.headers.push_back(table.headers[j]);
    out.rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<int> row;
        row.reserve(kept_features.size());
        for (std::size_t j : kept_features) {
            int v = table.rows[i][j];
            if (v == kMissing) v = fill_value[j];
            row.push_back(v);
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

std::pair<Matrix, std::optional<Labels>> one_hot_encode(const RawTable& table) {
    // Columns follow schema order over the features present in the table.
    struct Col {
        std::size_t table_col;
        int code;
    };
    std::vector<ColumnId> ids;
    std::vector<Col> cols;
    std::vector<int> feature_of_table_col(table.n_features(), -1);
    for (std::size_t f = 0; f < table.schema.features.size(); ++f) {
        const auto& feat = table.schema.features[f];
        if (feat.header == kSeverityHeader) continue;
        std::size_t tcol = table.n_features();
        for (std::size_t j = 0; j < table.n_features(); ++j)
            if (table.headers[j] == feat.header) tcol = j;
        if (tcol == table.n_features()) continue; // dropped by missing policy
        for (const auto& cat : feat.categories) {
            ids.push_back(ColumnId::base(feat.header, cat.code, static_cast<int>(f)));
            cols.push_back({tcol, cat.code});
        }
    }

    Matrix x(table.n_rows(), ids.size());
    x.columns() = ids;
    // Per table column, map code -> matrix column for O(1) row encoding.
    std::map<std::pair<std::size_t, int>, std::size_t> lookup;
    for (std::size_t c = 0; c < cols.size(); ++c)
        lookup[{cols[c].table_col, cols[c].code}] = c;

    std::vector<bool> encoded_col(table.n_features(), false);
    for (std::size_t c = 0; c < cols.size(); ++c) encoded_col[cols[c].table_col] = true;

    for (std::size_t i = 0; i < table.n_rows(); ++i) {
        for (std::size_t j = 0; j < table.n_features(); ++j) {
            if (!encoded_col[j]) continue;
            const int v = table.rows[i][j];
            const auto it = lookup.find({j, v});
            if (it == lookup.end())
                fail(ErrorKind::UnknownCategory,
                     table.headers[j] + " code " + std::to_string(v) + " at row " +
                         std::to_string(i));
            x.at(i, it->second) = 1.0;
        }
    }
    return {std::move(x), table.labels};
}

namespace {

// Pearson/phi correlation from the counts of a 0/1 product column vs labels.
double phi_from_counts(std::size_t n, std::size_t n_p, std::size_t n_y, std::size_t n_py) {
    const double nn = static_cast<double>(n);
    const double mp = n_p / nn;
    const double my = n_y / nn;
    const double cov = n_py / nn - mp * my;
    const double vp = mp * (1.0 - mp);
    const double vy = my * (1.0 - my);
    if (vp <= 0.0 || vy <= 0.0) return 0.0;
    return cov / std::sqrt(vp * vy);
}

} // namespace

std::vector<ColumnId> gated_interactions(const Matrix& matrix, const Labels& labels,
                                         double min_abs_r) {
    check_labels(labels, matrix.rows());
    for (const auto& c : matrix.columns())
        if (c.interaction)
            fail(ErrorKind::Malformed, "matrix already contains interaction columns");
    if (!matrix.all_binary())
        fail(ErrorKind::Malformed, "interaction generation requires a pure one-hot matrix");

    const std::size_t n = matrix.rows();
    const std::size_t d = matrix.cols();

    // One-hot rows are sparse; enumerate active-column pairs row by row.
    std::vector<std::vector<std::uint32_t>> active(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j)
            if (matrix.at(i, j) == 1.0) active[i].push_back(static_cast<std::uint32_t>(j));

    std::map<std::pair<std::uint32_t, std::uint32_t>, std::pair<std::size_t, std::size_t>>
        pair_counts; // (count of product=1, count of product=1 & y=1)
    std::size_t n_y = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const bool pos = labels[i] == 1;
        n_y += pos ? 1 : 0;
        const auto& cols = active[i];
        for (std::size_t a = 0; a < cols.size(); ++a) {
            for (std::size_t b = a + 1; b < cols.size(); ++b) {
                auto& entry = pair_counts[{cols[a], cols[b]}];
                ++entry.first;
                if (pos) ++entry.second;
            }
        }
    }

    std::vector<ColumnId> ids;
    for (const auto& [pair, counts] : pair_counts) {
        const auto [n_p, n_py] = counts;
        if (n_p == 0 || n_p == n) continue; // constant product
        const double r = phi_from_counts(n, n_p, n_y, n_py);
        if (std::abs(r) > min_abs_r)
            ids.push_back(
                ColumnId::product(matrix.columns()[pair.first], matrix.columns()[pair.second]));
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

Matrix append_interactions(const Matrix& matrix, const std::vector<ColumnId>& ids) {
    const std::size_t n = matrix.rows();
    const std::size_t d = matrix.cols();
    // Locate each parent among the base columns.
    std::map<std::pair<std::string, int>, std::size_t> index;
    for (std::size_t j = 0; j < d; ++j) {
        const auto& c = matrix.columns()[j];
        if (!c.interaction) index[{c.header, c.code}] = j;
    }
    std::vector<std::pair<std::size_t, std::size_t>> parents;
    for (const auto& id : ids) {
        const auto a = index.find({id.header, id.code});
        const auto b = index.find({id.header_b, id.code_b});
        if (a == index.end() || b == index.end())
            fail(ErrorKind::ColumnMismatch, "interaction parent missing: " + id.name());
        parents.push_back({a->second, b->second});
    }

    Matrix out(n, d + ids.size());
    out.columns() = matrix.columns();
    for (const auto& id : ids) out.columns().push_back(id);
    for (std::size_t i = 0; i < n; ++i) {
        double* dst = out.row(i);
        const double* src = matrix.row(i);
        std::copy(src, src + d, dst);
        for (std::size_t k = 0; k < ids.size(); ++k)
            dst[d + k] = src[parents[k].first] * src[parents[k].second];
    }
    return out;
}

Matrix generate_interactions(const Matrix& matrix, const Labels& labels, double min_abs_r) {
    return append_interactions(matrix, gated_interactions(matrix, labels, min_abs_r));
}

SplitResult stratified_split(const Matrix& x, const Labels& y, const SplitConfig& cfg) {
    check_labels(y, x.rows());
    if (cfg.train_frac <= 0.0 || cfg.train_frac >= 1.0)
        fail(ErrorKind::Malformed, "train_frac must be in (0, 1)");
    auto ls = class_indices(y, 0);
    auto hs = class_indices(y, 1);
    if (ls.empty() || hs.empty()) fail(ErrorKind::EmptyClass, "both classes required");

    Rng rng(mix64(cfg.seed, 0x53504C4954ULL));
    SplitResult out;
    for (auto* cls : {&ls, &hs}) {
        rng.shuffle(*cls);
        const std::size_t n_train =
            static_cast<std::size_t>(std::floor(cfg.train_frac * cls->size()));
        out.train_idx.insert(out.train_idx.end(), cls->begin(), cls->begin() + n_train);
        out.test_idx.insert(out.test_idx.end(), cls->begin() + n_train, cls->end());
    }
    rng.shuffle(out.train_idx);
    rng.shuffle(out.test_idx);

    out.train_x = x.select_rows(out.train_idx);
    out.test_x = x.select_rows(out.test_idx);
    out.train_y.reserve(out.train_idx.size());
    for (auto i : out.train_idx) out.train_y.push_back(y[i]);
    out.test_y.reserve(out.test_idx.size());
    for (auto i : out.test_idx) out.test_y.push_back(y[i]);
    return out;
}

std::vector<Fold> stratified_kfold(std::size_t n_rows, const Labels& y,
                                   const SplitConfig& cfg) {
    check_labels(y, n_rows);
    if (cfg.k_folds < 2) fail(ErrorKind::Malformed, "k_folds must be >= 2");
    const auto ls = class_indices(y, 0);
    const auto hs = class_indices(y, 1);
    const std::size_t minority = std::min(ls.size(), hs.size());
    if (static_cast<std::size_t>(cfg.k_folds) > minority)
        fail(ErrorKind::KTooLarge, "k_folds " + std::to_string(cfg.k_folds) +
                                       " exceeds minority count " + std::to_string(minority));

    Rng rng(mix64(cfg.seed, 0xf01dULL));
    std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(cfg.k_folds));
    for (auto cls : {ls, hs}) {
        rng.shuffle(cls);
        for (std::size_t i = 0; i < cls.size(); ++i)
            folds[i % folds.size()].push_back(cls[i]);
    }
    std::vector<Fold> out(folds.size());
    for (std::size_t f = 0; f < folds.size(); ++f) {
        std::sort(folds[f].begin(), folds[f].end());
        out[f].valid_idx = folds[f];
        for (std::size_t g = 0; g < folds.size(); ++g) {
            if (g == f) continue;
            out[f].train_idx.insert(out[f].train_idx.end(), folds[g].begin(),
                                    folds[g].end());
        }
        std::sort(out[f].train_idx.begin(), out[f].train_idx.end());
    }
    return out;
}

} // namespace sevlab
