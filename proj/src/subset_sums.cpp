#include "permflow/subset_sums.hpp"

#include <cmath>
#include <string>

#include "permflow/errors.hpp"
#include "permflow/kernels.hpp"

namespace permflow {

SubsetSums::SubsetSums(unsigned m) : m_(m) {
    if (m < 1 || m > 20) {
        throw InputError("subset sums: row count must be in [1, 20]");
    }
    sums_.assign(std::size_t{1} << m, 0.0);
    work_.assign(std::size_t{1} << m, 0.0);
}

SubsetSums SubsetSums::of(const OblongMatrix& a) {
    SubsetSums s(static_cast<unsigned>(a.rows()));
    const std::vector<double> cols = a.column_major();
    s.absorb(cols.data(), a.cols());
    return s;
}

void SubsetSums::append(std::span<const double> column) {
    if (column.size() != m_) {
        throw InputError("subset sums: column has " +
                         std::to_string(column.size()) + " entries, expected " +
                         std::to_string(m_));
    }
    for (double v : column) {
        if (!std::isfinite(v)) {
            throw InputError("subset sums: column entries must be finite");
        }
    }
    absorb(column.data(), 1);
}

void SubsetSums::absorb(const double* cols, std::size_t ncols) {
    kernels::active().subset_absorb(sums_.data(), work_.data(), cols, ncols, m_);
    n_ += ncols;
}

double SubsetSums::value(std::uint32_t mask) const {
    if (mask == 0 || mask >= sums_.size()) {
        throw InputError("subset sums: mask out of range");
    }
    return sums_[mask];
}

}  // namespace permflow
