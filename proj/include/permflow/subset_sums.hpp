#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "permflow/matrix.hpp"

namespace permflow {

/// The 2^m - 1 streaming sums s_I = sum over absorbed columns of the product
/// of the column entries at the rows in I, indexed by row bitmask (bit i-1
/// is row i). Entry 0 holds the absorbed column count (the empty product).
///
/// Absorbing a column costs O(2^m): products for all masks come from the
/// doubling recurrence, not one inner loop per mask. Whether columns arrive
/// one at a time or in batches, each s_I receives exactly one addition per
/// column in column order, so both routes produce bit-identical sums — that
/// ordering is a contract the experiments rely on.
class SubsetSums {
public:
    explicit SubsetSums(unsigned m);

    static SubsetSums of(const OblongMatrix& a);

    /// Absorb a single column (length m).
    void append(std::span<const double> column);

    /// Absorb `ncols` columns laid out column-major.
    void absorb(const double* cols, std::size_t ncols);

    unsigned rows() const { return m_; }
    std::uint64_t columns() const { return n_; }

    /// s_I for a nonempty row mask.
    double value(std::uint32_t mask) const;

    const double* raw() const { return sums_.data(); }

private:
    unsigned m_;
    std::uint64_t n_ = 0;
    std::vector<double> sums_;
    std::vector<double> work_;
};

}  // namespace permflow
