#include "permflow/matrix.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>

#include "permflow/errors.hpp"

namespace permflow {

namespace {

bool parse_fields(const std::string& line, std::vector<double>& out) {
    out.clear();
    std::size_t pos = 0;
    while (pos <= line.size()) {
        std::size_t comma = line.find(',', pos);
        if (comma == std::string::npos) comma = line.size();
        std::string field = line.substr(pos, comma - pos);
        const char* begin = field.c_str();
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) return false;
        while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
        if (*end != '\0') return false;
        out.push_back(v);
        pos = comma + 1;
    }
    return true;
}

bool blank(const std::string& line) {
    for (char c : line) {
        if (c != ' ' && c != '\t' && c != '\r') return false;
    }
    return true;
}

std::vector<std::vector<double>> read_rows(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (blank(line)) continue;
        std::vector<double> fields;
        if (!parse_fields(line, fields)) {
            if (first) {
                first = false;  // header line, skip
                continue;
            }
            throw InputError("csv: unparseable field in line: " + line);
        }
        first = false;
        rows.push_back(std::move(fields));
    }
    return rows;
}

}  // namespace

OblongMatrix::OblongMatrix(std::size_t rows, std::size_t cols,
                           std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (rows_ < 1) throw InputError("matrix: needs at least one row");
    if (cols_ < rows_) {
        throw InputError("matrix: oblong requires rows <= columns (got " +
                         std::to_string(rows_) + "x" + std::to_string(cols_) +
                         ")");
    }
    if (entries_.size() != rows_ * cols_) {
        throw InputError("matrix: entry count does not match dimensions");
    }
    for (double v : entries_) {
        if (!std::isfinite(v)) {
            throw InputError("matrix: entries must be finite");
        }
    }
}

OblongMatrix OblongMatrix::from_csv(std::istream& in) {
    auto rows = read_rows(in);
    if (rows.empty()) throw InputError("csv: no data rows");
    const std::size_t n = rows.front().size();
    std::vector<double> entries;
    entries.reserve(rows.size() * n);
    for (const auto& r : rows) {
        if (r.size() != n) {
            throw InputError("csv: ragged rows (" + std::to_string(r.size()) +
                             " fields, expected " + std::to_string(n) + ")");
        }
        entries.insert(entries.end(), r.begin(), r.end());
    }
    return OblongMatrix(rows.size(), n, std::move(entries));
}

OblongMatrix OblongMatrix::from_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    return from_csv(in);
}

std::vector<double> OblongMatrix::column_major() const {
    std::vector<double> out(rows_ * cols_);
    for (std::size_t j = 0; j < cols_; ++j) {
        for (std::size_t i = 0; i < rows_; ++i) {
            out[j * rows_ + i] = entries_[i * cols_ + j];
        }
    }
    return out;
}

std::vector<double> vector_from_csv(std::istream& in) {
    auto rows = read_rows(in);
    if (rows.empty()) throw InputError("csv: no data");
    if (rows.size() != 1) throw InputError("csv: expected a single line vector");
    return rows.front();
}

std::vector<double> vector_from_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    return vector_from_csv(in);
}

}  // namespace permflow
