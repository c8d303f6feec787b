#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sevlab/matrix.hpp"

namespace sevlab {

struct Category {
    int code = 0;
    std::string name;
};

struct Feature {
    std::string header;
    std::string name;
    std::vector<Category> categories;

    bool has_code(int code) const;
};

// Ordered catalog of categorical features. Headers are unique, category
// codes are unique within a feature, every feature has at least one category.
struct FeatureSchema {
    std::vector<Feature> features;

    void validate() const;
    int feature_index(const std::string& header) const; // -1 when absent
    std::size_t total_categories() const;
};

constexpr int kMissing = -1;
inline const char* kSeverityHeader = "SEV";

// Raw categorical table: one integer code per (row, feature), kMissing for
// empty cells. Carries the subset of schema features present (missing-value
// policy may drop some) and, when the source had a SEV column, the labels.
struct RawTable {
    FeatureSchema schema;                 // full schema, for code validation
    std::vector<std::string> headers;     // features present, schema order
    std::vector<std::vector<int>> rows;   // rows[i][j] pairs with headers[j]
    std::optional<Labels> labels;

    std::size_t n_rows() const { return rows.size(); }
    std::size_t n_features() const { return headers.size(); }
};

// CSV with a header row of feature codes (plus optional SEV); integer
// category codes; empty cell = missing.
RawTable read_raw_csv(const std::string& path, const FeatureSchema& schema);
void write_raw_csv(const RawTable& table, const std::string& path);

} // namespace sevlab
