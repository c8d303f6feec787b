#include "sevlab/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "sevlab/error.hpp"

namespace sevlab {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

} // namespace

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::IoError, "cannot open " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
        rows.push_back(split_line(line));
    }
    return rows;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

void write_csv(const std::string& path, const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::IoError, "cannot write " + path);
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << csv_escape(row[i]);
        }
        out << '\n';
    }
    if (!out) fail(ErrorKind::IoError, "write failed for " + path);
}

EncodedCsv read_encoded_csv(const std::string& path) {
    const auto rows = read_csv(path);
    if (rows.empty()) fail(ErrorKind::Malformed, path + " is empty");
    EncodedCsv out;
    const auto& header = rows[0];
    int sev_col = -1;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (header[j] == "SEV") {
            sev_col = static_cast<int>(j);
        } else {
            out.column_names.push_back(header[j]);
        }
    }
    out.has_labels = sev_col >= 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != header.size())
            fail(ErrorKind::Malformed, path + ": row " + std::to_string(i) +
                                           " has wrong field count");
        std::vector<double> vals;
        vals.reserve(out.column_names.size());
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            const std::string& cell = rows[i][j];
            if (static_cast<int>(j) == sev_col) {
                if (cell != "0" && cell != "1")
                    fail(ErrorKind::Malformed, path + ": SEV must be 0 or 1");
                out.labels.push_back(cell == "1" ? 1 : 0);
                continue;
            }
            try {
                vals.push_back(std::stod(cell));
            } catch (const std::exception&) {
                fail(ErrorKind::Malformed, path + ": non-numeric cell '" + cell + "'");
            }
        }
        out.values.push_back(std::move(vals));
    }
    return out;
}

} // namespace sevlab
