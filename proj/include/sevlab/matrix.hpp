#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sevlab/error.hpp"

namespace sevlab {

// Identifies a design-matrix column: either a one-hot (feature, category)
// indicator or the elementwise product of two such indicators. schema_pos
// is the feature's ordinal in the schema so interaction parents can be
// ordered the same way no matter how the matrix columns are permuted.
struct ColumnId {
    std::string header;
    int code = 0;
    int schema_pos = 0;
    // Second parent, set only for interaction columns.
    std::string header_b;
    int code_b = 0;
    int schema_pos_b = 0;
    bool interaction = false;

    static ColumnId base(std::string h, int c, int pos) {
        ColumnId id;
        id.header = std::move(h);
        id.code = c;
        id.schema_pos = pos;
        return id;
    }

    // Canonical parent order: ascending (schema_pos, code).
    static ColumnId product(const ColumnId& x, const ColumnId& y);

    std::string name() const;
    bool operator==(const ColumnId& o) const {
        return interaction == o.interaction && header == o.header && code == o.code &&
               header_b == o.header_b && code_b == o.code_b;
    }
    bool operator<(const ColumnId& o) const;
};

// Dense row-major matrix with per-column identity. Entries live in [0, 1];
// they are exact 0/1 for one-hot data and fractional only after synthetic
// oversampling.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0), columns_(cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    const double* row(std::size_t r) const { return data_.data() + r * cols_; }
    double* row(std::size_t r) { return data_.data() + r * cols_; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    const std::vector<ColumnId>& columns() const { return columns_; }
    std::vector<ColumnId>& columns() { return columns_; }

    bool column_is_binary(std::size_t c) const;
    bool all_binary() const;

    Matrix select_rows(const std::vector<std::size_t>& idx) const;
    Matrix select_columns(const std::vector<std::size_t>& idx) const;
    void append_column(const ColumnId& id, const std::vector<double>& values);

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
    std::vector<ColumnId> columns_;
};

using Labels = std::vector<int>;

inline void check_labels(const Labels& y, std::size_t rows) {
    if (y.size() != rows)
        fail(ErrorKind::LengthMismatch, "label count " + std::to_string(y.size()) +
                                            " != row count " + std::to_string(rows));
    for (int v : y)
        if (v != 0 && v != 1) fail(ErrorKind::Malformed, "labels must be 0 or 1");
}

std::vector<std::size_t> class_indices(const Labels& y, int cls);

// FNV-1a over the raw bytes; used for run fingerprints and the
// untouched-test assertion.
std::uint64_t fingerprint(const Matrix& x, const Labels& y);

} // namespace sevlab
