#include "sevlab/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "sevlab/rng.hpp"

namespace sevlab {

using nlohmann::json;

FeatureSchema ClassMarginalSpec::schema() const {
    FeatureSchema s;
    for (const auto& f : features) {
        Feature feat;
        feat.header = f.header;
        feat.name = f.name;
        for (const auto& c : f.categories) feat.categories.push_back({c.code, c.name});
        s.features.push_back(std::move(feat));
    }
    return s;
}

void ClassMarginalSpec::validate() const {
    if (features.empty()) fail(ErrorKind::Malformed, "marginal spec has no features");
    if (total_ls < 1 || total_hs < 1)
        fail(ErrorKind::Malformed, "marginal spec totals must be positive");
    for (const auto& f : features) {
        long ls = 0;
        long hs = 0;
        for (const auto& c : f.categories) {
            if (c.ls_count < 0 || c.hs_count < 0)
                fail(ErrorKind::Malformed, f.header + " has a negative count");
            ls += c.ls_count;
            hs += c.hs_count;
        }
        if (ls != total_ls || hs != total_hs)
            fail(ErrorKind::InconsistentTotals,
                 f.header + " sums to (" + std::to_string(ls) + ", " + std::to_string(hs) +
                     "), expected (" + std::to_string(total_ls) + ", " +
                     std::to_string(total_hs) + ")");
    }
    schema().validate();
}

ClassMarginalSpec parse_marginal_spec(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        fail(ErrorKind::Malformed, std::string("marginal spec: ") + e.what());
    }
    ClassMarginalSpec spec;
    try {
        spec.total_ls = doc.at("total_ls").get<long>();
        spec.total_hs = doc.at("total_hs").get<long>();
        for (const auto& f : doc.at("features")) {
            MarginalFeature feat;
            feat.header = f.at("header").get<std::string>();
            feat.name = f.value("name", feat.header);
            for (const auto& c : f.at("categories")) {
                MarginalCategory cat;
                cat.code = c.at("code").get<int>();
                cat.name = c.value("name", std::string{});
                cat.ls_count = c.at("ls").get<long>();
                cat.hs_count = c.at("hs").get<long>();
                feat.categories.push_back(std::move(cat));
            }
            spec.features.push_back(std::move(feat));
        }
    } catch (const json::exception& e) {
        fail(ErrorKind::Malformed, std::string("marginal spec: ") + e.what());
    }
    spec.validate();
    return spec;
}

ClassMarginalSpec load_marginal_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::IoError, "cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_marginal_spec(buf.str());
}

namespace {

// Largest-remainder counts: non-negative integers summing to n, proportional
// to the given weights.
std::vector<long> quota_counts(const std::vector<long>& weights, long total, long n) {
    std::vector<long> counts(weights.size(), 0);
    std::vector<std::pair<double, std::size_t>> remainders;
    long assigned = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double exact = static_cast<double>(weights[i]) * n / total;
        counts[i] = static_cast<long>(std::floor(exact));
        assigned += counts[i];
        remainders.push_back({exact - std::floor(exact), i});
    }
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (long k = 0; k < n - assigned; ++k) ++counts[remainders[static_cast<std::size_t>(k)].second];
    return counts;
}

} // namespace

RawTable sample_dataset(const ClassMarginalSpec& spec, const SyntheticConfig& cfg) {
    spec.validate();
    if (cfg.n_ls < 1 || cfg.n_hs < 1)
        fail(ErrorKind::Malformed, "n_ls and n_hs must be positive");

    const std::size_t n_total = static_cast<std::size_t>(cfg.n_ls + cfg.n_hs);
    RawTable table;
    table.schema = spec.schema();
    for (const auto& f : spec.features) table.headers.push_back(f.header);
    table.rows.assign(n_total, std::vector<int>(spec.features.size(), kMissing));
    table.labels = Labels(n_total, 0);
    for (std::size_t i = static_cast<std::size_t>(cfg.n_ls); i < n_total; ++i)
        (*table.labels)[i] = 1;

    for (std::size_t fi = 0; fi < spec.features.size(); ++fi) {
        const auto& feat = spec.features[fi];
        for (int cls = 0; cls <= 1; ++cls) {
            const long n_cls = cls == 0 ? cfg.n_ls : cfg.n_hs;
            const long total = cls == 0 ? spec.total_ls : spec.total_hs;
            const std::size_t row0 = cls == 0 ? 0 : static_cast<std::size_t>(cfg.n_ls);
            std::vector<long> weights;
            for (const auto& c : feat.categories)
                weights.push_back(cls == 0 ? c.ls_count : c.hs_count);
            Rng rng(mix64(cfg.seed, fi * 2 + static_cast<std::size_t>(cls), 0xC4A55ULL));
            if (cfg.mode == SamplingMode::urn) {
                std::vector<int> values;
                values.reserve(static_cast<std::size_t>(n_cls));
                const auto counts = quota_counts(weights, total, n_cls);
                for (std::size_t ci = 0; ci < counts.size(); ++ci)
                    values.insert(values.end(), static_cast<std::size_t>(counts[ci]),
                                  feat.categories[ci].code);
                rng.shuffle(values);
                for (long i = 0; i < n_cls; ++i)
                    table.rows[row0 + static_cast<std::size_t>(i)][fi] =
                        values[static_cast<std::size_t>(i)];
            } else {
                std::vector<double> cdf(weights.size());
                double acc = 0.0;
                for (std::size_t ci = 0; ci < weights.size(); ++ci) {
                    acc += static_cast<double>(weights[ci]) / total;
                    cdf[ci] = acc;
                }
                cdf.back() = 1.0;
                for (long i = 0; i < n_cls; ++i) {
                    const double u = rng.uniform01();
                    const std::size_t ci = static_cast<std::size_t>(
                        std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
                    table.rows[row0 + static_cast<std::size_t>(i)][fi] =
                        feat.categories[std::min(ci, cdf.size() - 1)].code;
                }
            }
        }
    }

    // Shuffle row order (labels travel with rows).
    std::vector<std::size_t> perm(n_total);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(mix64(cfg.seed, 0x0DDEULL));
    rng.shuffle(perm);
    RawTable out;
    out.schema = table.schema;
    out.headers = table.headers;
    out.labels = Labels{};
    out.rows.reserve(n_total);
    for (std::size_t i : perm) {
        out.rows.push_back(std::move(table.rows[i]));
        out.labels->push_back((*table.labels)[i]);
    }
    return out;
}

std::vector<FeatureFit> marginal_fit_report(const RawTable& table, const Labels& labels,
                                            const ClassMarginalSpec& spec) {
    check_labels(labels, table.n_rows());
    std::vector<FeatureFit> report;
    for (const auto& feat : spec.features) {
        std::size_t tcol = table.n_features();
        for (std::size_t j = 0; j < table.n_features(); ++j)
            if (table.headers[j] == feat.header) tcol = j;
        if (tcol == table.n_features())
            fail(ErrorKind::Malformed, "table lacks feature " + feat.header);

        for (int cls = 0; cls <= 1; ++cls) {
            const long spec_total = cls == 0 ? spec.total_ls : spec.total_hs;
            std::size_t n_cls = 0;
            for (int v : labels) n_cls += (v == cls) ? 1 : 0;

            std::vector<double> expected;
            std::vector<double> observed;
            for (const auto& cat : feat.categories) {
                const long w = cls == 0 ? cat.ls_count : cat.hs_count;
                expected.push_back(static_cast<double>(w) * n_cls / spec_total);
                std::size_t count = 0;
                for (std::size_t i = 0; i < table.n_rows(); ++i)
                    if (labels[i] == cls && table.rows[i][tcol] == cat.code) ++count;
                observed.push_back(static_cast<double>(count));
            }
            // Pool cells with expected count < 5 into one bucket.
            double pool_e = 0.0;
            double pool_o = 0.0;
            double stat = 0.0;
            int cells = 0;
            for (std::size_t ci = 0; ci < expected.size(); ++ci) {
                if (expected[ci] < 5.0) {
                    pool_e += expected[ci];
                    pool_o += observed[ci];
                } else {
                    stat += (observed[ci] - expected[ci]) * (observed[ci] - expected[ci]) /
                            expected[ci];
                    ++cells;
                }
            }
            if (pool_e > 0.0) {
                stat += (pool_o - pool_e) * (pool_o - pool_e) / pool_e;
                ++cells;
            }
            report.push_back({feat.header, cls, stat, std::max(cells - 1, 0)});
        }
    }
    return report;
}

} // namespace sevlab
