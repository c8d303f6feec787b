#include "sevlab/schema.hpp"

#include <set>
#include <string>

#include "sevlab/csv.hpp"
#include "sevlab/error.hpp"

namespace sevlab {

bool Feature::has_code(int code) const {
    for (const auto& c : categories)
        if (c.code == code) return true;
    return false;
}

void FeatureSchema::validate() const {
    std::set<std::string> seen;
    for (const auto& f : features) {
        if (f.header.empty()) fail(ErrorKind::Malformed, "feature with empty header");
        if (!seen.insert(f.header).second)
            fail(ErrorKind::Malformed, "duplicate feature header " + f.header);
        if (f.categories.empty())
            fail(ErrorKind::Malformed, "feature " + f.header + " has no categories");
        std::set<int> codes;
        for (const auto& c : f.categories)
            if (!codes.insert(c.code).second)
                fail(ErrorKind::Malformed, "duplicate code " + std::to_string(c.code) +
                                               " in feature " + f.header);
    }
}

int FeatureSchema::feature_index(const std::string& header) const {
    for (std::size_t i = 0; i < features.size(); ++i)
        if (features[i].header == header) return static_cast<int>(i);
    return -1;
}

std::size_t FeatureSchema::total_categories() const {
    std::size_t n = 0;
    for (const auto& f : features) n += f.categories.size();
    return n;
}

RawTable read_raw_csv(const std::string& path, const FeatureSchema& schema) {
    const auto rows = read_csv(path);
    if (rows.empty()) fail(ErrorKind::Malformed, path + " is empty");
    RawTable table;
    table.schema = schema;
    const auto& header = rows[0];
    int sev_col = -1;
    std::vector<int> feature_cols;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (header[j] == kSeverityHeader) {
            sev_col = static_cast<int>(j);
            continue;
        }
        if (schema.feature_index(header[j]) < 0)
            fail(ErrorKind::Malformed, path + ": unknown feature header " + header[j]);
        table.headers.push_back(header[j]);
        feature_cols.push_back(static_cast<int>(j));
    }
    if (sev_col >= 0) table.labels = Labels{};
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != header.size())
            fail(ErrorKind::Malformed,
                 path + ": row " + std::to_string(i) + " has wrong field count");
        std::vector<int> vals;
        vals.reserve(feature_cols.size());
        for (int j : feature_cols) {
            const std::string& cell = rows[i][static_cast<std::size_t>(j)];
            if (cell.empty()) {
                vals.push_back(kMissing);
                continue;
            }
            try {
                vals.push_back(std::stoi(cell));
            } catch (const std::exception&) {
                fail(ErrorKind::Malformed, path + ": non-integer code '" + cell + "'");
            }
        }
        if (sev_col >= 0) {
            const std::string& cell = rows[i][static_cast<std::size_t>(sev_col)];
            if (cell != "0" && cell != "1")
                fail(ErrorKind::Malformed, path + ": SEV must be 0 or 1");
            table.labels->push_back(cell == "1" ? 1 : 0);
        }
        table.rows.push_back(std::move(vals));
    }
    return table;
}

void write_raw_csv(const RawTable& table, const std::string& path) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header = table.headers;
    if (table.labels) header.push_back(kSeverityHeader);
    rows.push_back(header);
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        std::vector<std::string> row;
        row.reserve(header.size());
        for (int v : table.rows[i])
            row.push_back(v == kMissing ? std::string{} : std::to_string(v));
        if (table.labels) row.push_back(std::to_string((*table.labels)[i]));
        rows.push_back(std::move(row));
    }
    write_csv(path, rows);
}

const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::IntermediateMissingness: return "IntermediateMissingness";
        case ErrorKind::UnknownCategory: return "UnknownCategory";
        case ErrorKind::EmptyClass: return "EmptyClass";
        case ErrorKind::KTooLarge: return "KTooLarge";
        case ErrorKind::Malformed: return "Malformed";
        case ErrorKind::InconsistentTotals: return "InconsistentTotals";
        case ErrorKind::FractionalInput: return "FractionalInput";
        case ErrorKind::TooFewMinority: return "TooFewMinority";
        case ErrorKind::LengthMismatch: return "LengthMismatch";
        case ErrorKind::EmptyMatrix: return "EmptyMatrix";
        case ErrorKind::SingleClass: return "SingleClass";
        case ErrorKind::NonFinite: return "NonFinite";
        case ErrorKind::ColumnMismatch: return "ColumnMismatch";
        case ErrorKind::WrongKind: return "WrongKind";
        case ErrorKind::IoError: return "IoError";
        case ErrorKind::Internal: return "Internal";
    }
    return "Unknown";
}

} // namespace sevlab
