#pragma once

#include <string>
#include <vector>

namespace sevlab {

// Minimal RFC-4180-ish CSV: fields are quoted only when they contain a
// comma, quote, or newline.
std::vector<std::vector<std::string>> read_csv(const std::string& path);
std::string csv_escape(const std::string& field);
void write_csv(const std::string& path, const std::vector<std::vector<std::string>>& rows);

// Matrix-with-labels CSV: header row of column names plus SEV, numeric cells.
struct EncodedCsv {
    std::vector<std::string> column_names;
    std::vector<std::vector<double>> values;
    std::vector<int> labels;
    bool has_labels = false;
};

EncodedCsv read_encoded_csv(const std::string& path);

} // namespace sevlab
