#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sevlab/schema.hpp"

namespace sevlab {

struct MarginalCategory {
    int code = 0;
    std::string name;
    long ls_count = 0;
    long hs_count = 0;
};

struct MarginalFeature {
    std::string header;
    std::string name;
    std::vector<MarginalCategory> categories;
};

// Per-class, per-feature category counts. Every feature's LS counts sum to
// total_ls and HS counts to total_hs.
struct ClassMarginalSpec {
    long total_ls = 0;
    long total_hs = 0;
    std::vector<MarginalFeature> features;

    FeatureSchema schema() const;
    void validate() const;
};

ClassMarginalSpec load_marginal_spec(const std::string& path);
ClassMarginalSpec parse_marginal_spec(const std::string& json_text);

enum class SamplingMode {
    // Per (class, feature), category counts are fixed to the largest-remainder
    // rounding of n * frequency and dealt to rows in a seeded random order.
    // Marginals then match the spec for every seed and every n.
    urn,
    // Literal independent draws per row and feature.
    iid,
};

struct SyntheticConfig {
    long n_ls = 4217;
    long n_hs = 1134;
    std::uint64_t seed = 0;
    SamplingMode mode = SamplingMode::urn;
};

// Exactly n_ls rows labeled 0 and n_hs rows labeled 1, features drawn
// class-conditionally and independently of each other, row order shuffled
// by seed.
RawTable sample_dataset(const ClassMarginalSpec& spec, const SyntheticConfig& cfg);

struct FeatureFit {
    std::string header;
    int cls = 0;             // 0 = LS, 1 = HS
    double statistic = 0.0;  // Pearson chi-squared, cells with expected < 5 pooled
    int dof = 0;
};

std::vector<FeatureFit> marginal_fit_report(const RawTable& table, const Labels& labels,
                                            const ClassMarginalSpec& spec);

} // namespace sevlab
