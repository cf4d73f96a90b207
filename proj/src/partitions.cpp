#include "permflow/partitions.hpp"

#include <algorithm>
#include <string>

#include "permflow/errors.hpp"

namespace permflow {

std::uint64_t bell_number(unsigned m) {
    static constexpr std::uint64_t kBell[17] = {
        1ull,          1ull,           2ull,          5ull,
        15ull,         52ull,          203ull,        877ull,
        4140ull,       21147ull,       115975ull,     678570ull,
        4213597ull,    27644437ull,    190899322ull,  1382958545ull,
        10480142147ull};
    if (m > 16) throw InputError("bell_number: m must be <= 16");
    return kBell[m];
}

PartitionEnumerator::PartitionEnumerator(unsigned m, const Caps& caps) : m_(m) {
    if (m < 1 || m > static_cast<unsigned>(kPartitionHardCap)) {
        throw InputError("partitions: m must be in [1, 16], got " +
                         std::to_string(m));
    }
    if (m > static_cast<unsigned>(caps.partition_m_cap)) {
        throw CapError("partitions: m = " + std::to_string(m) +
                       " exceeds partition cap " +
                       std::to_string(caps.partition_m_cap));
    }
    // Start at the all-zero string, the single-block partition.
}

void PartitionEnumerator::emit(SetPartition& out) const {
    out.m = m_;
    out.rgs = rgs_;
    out.block_count = static_cast<unsigned>(prefix_max_[m_ - 1]) + 1;
    out.block_masks.fill(0);
    for (unsigned i = 0; i < m_; ++i) {
        out.block_masks[rgs_[i]] |= 1u << i;
    }
}

bool PartitionEnumerator::advance() {
    // Lexicographic successor: bump the rightmost digit that may still grow,
    // zero everything after it.
    for (unsigned i = m_ - 1; i >= 1; --i) {
        if (rgs_[i] <= prefix_max_[i - 1]) {
            ++rgs_[i];
            prefix_max_[i] = std::max(prefix_max_[i - 1], rgs_[i]);
            for (unsigned j = i + 1; j < m_; ++j) {
                rgs_[j] = 0;
                prefix_max_[j] = prefix_max_[i];
            }
            return true;
        }
    }
    return false;
}

bool PartitionEnumerator::next(SetPartition& out) {
    if (done_) return false;
    if (first_) {
        first_ = false;
        rgs_.fill(0);
        prefix_max_.fill(0);
        emit(out);
        return true;
    }
    if (!advance()) {
        done_ = true;
        return false;
    }
    emit(out);
    return true;
}

}  // namespace permflow
