#include "sevlab/matrix.hpp"

#include <cstring>
#include <tuple>

namespace sevlab {

ColumnId ColumnId::product(const ColumnId& x, const ColumnId& y) {
    const ColumnId* a = &x;
    const ColumnId* b = &y;
    if (std::tie(y.schema_pos, y.code) < std::tie(x.schema_pos, x.code)) std::swap(a, b);
    ColumnId id;
    id.header = a->header;
    id.code = a->code;
    id.schema_pos = a->schema_pos;
    id.header_b = b->header;
    id.code_b = b->code;
    id.schema_pos_b = b->schema_pos;
    id.interaction = true;
    return id;
}

std::string ColumnId::name() const {
    std::string n = header + "_" + std::to_string(code);
    if (interaction) n += "_x_" + header_b + "_" + std::to_string(code_b);
    return n;
}

bool ColumnId::operator<(const ColumnId& o) const {
    return std::tie(schema_pos, code, interaction, schema_pos_b, code_b) <
           std::tie(o.schema_pos, o.code, o.interaction, o.schema_pos_b, o.code_b);
}

bool Matrix::column_is_binary(std::size_t c) const {
    for (std::size_t r = 0; r < rows_; ++r) {
        const double v = at(r, c);
        if (v != 0.0 && v != 1.0) return false;
    }
    return true;
}

bool Matrix::all_binary() const {
    for (double v : data_)
        if (v != 0.0 && v != 1.0) return false;
    return true;
}

Matrix Matrix::select_rows(const std::vector<std::size_t>& idx) const {
    Matrix out(idx.size(), cols_);
    out.columns_ = columns_;
    for (std::size_t i = 0; i < idx.size(); ++i)
        std::memcpy(out.row(i), row(idx[i]), cols_ * sizeof(double));
    return out;
}

Matrix Matrix::select_columns(const std::vector<std::size_t>& idx) const {
    Matrix out(rows_, idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j) out.columns_[j] = columns_[idx[j]];
    for (std::size_t r = 0; r < rows_; ++r) {
        const double* src = row(r);
        double* dst = out.row(r);
        for (std::size_t j = 0; j < idx.size(); ++j) dst[j] = src[idx[j]];
    }
    return out;
}

void Matrix::append_column(const ColumnId& id, const std::vector<double>& values) {
    if (values.size() != rows_)
        fail(ErrorKind::LengthMismatch, "appended column length mismatch");
    std::vector<double> next((cols_ + 1) * rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        std::memcpy(next.data() + r * (cols_ + 1), row(r), cols_ * sizeof(double));
        next[r * (cols_ + 1) + cols_] = values[r];
    }
    data_ = std::move(next);
    columns_.push_back(id);
    ++cols_;
}

std::vector<std::size_t> class_indices(const Labels& y, int cls) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < y.size(); ++i)
        if (y[i] == cls) out.push_back(i);
    return out;
}

std::uint64_t fingerprint(const Matrix& x, const Labels& y) {
    std::uint64_t h = 14695981039346656037ULL;
    auto feed = [&h](const void* p, std::size_t n) {
        const auto* bytes = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= bytes[i];
            h *= 1099511628211ULL;
        }
    };
    const std::uint64_t dims[2] = {x.rows(), x.cols()};
    feed(dims, sizeof(dims));
    feed(x.data().data(), x.data().size() * sizeof(double));
    feed(y.data(), y.size() * sizeof(int));
    for (const auto& c : x.columns()) {
        const std::string n = c.name();
        feed(n.data(), n.size());
    }
    return h;
}

} // namespace sevlab
