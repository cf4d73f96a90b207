#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace permflow {

/// Dense m x n real matrix with m <= n (rows index the short side). Entries
/// are validated finite on construction. Storage is row-major.
class OblongMatrix {
public:
    OblongMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

    /// Parse CSV: one row per line, comma-separated decimal fields, no
    /// header required (a leading non-numeric line is tolerated and
    /// skipped). Rectangularity is enforced.
    static OblongMatrix from_csv(std::istream& in);
    static OblongMatrix from_csv_file(const std::string& path);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double at(std::size_t i, std::size_t j) const {
        return entries_[i * cols_ + j];
    }
    double& at(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }

    const std::vector<double>& data() const { return entries_; }

    /// Entries re-laid out column-major (column j occupies m consecutive
    /// doubles), the layout the streaming kernels consume.
    std::vector<double> column_major() const;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> entries_;
};

/// Parse a CSV vector: the first (non-header) line, comma-separated.
std::vector<double> vector_from_csv(std::istream& in);
std::vector<double> vector_from_csv_file(const std::string& path);

}  // namespace permflow
