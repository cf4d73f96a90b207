#pragma once

#include <array>
#include <cstdint>

#include "permflow/caps.hpp"

namespace permflow {

/// A partition of {1..m} encoded as a restricted growth string:
/// rgs[0] == 0 and rgs[k] <= 1 + max(rgs[0..k-1]). Blocks are exposed as row
/// bitmasks (bit i-1 set means row i belongs to the block), which is what
/// the subset-sum lookup wants.
struct SetPartition {
    unsigned m = 0;
    unsigned block_count = 0;
    std::array<std::uint8_t, kPartitionHardCap> rgs{};
    std::array<std::uint32_t, kPartitionHardCap> block_masks{};
};

/// Bell number B(m), the partition count, for 0 <= m <= 16.
std::uint64_t bell_number(unsigned m);

/// Streams all partitions of {1..m} in lexicographic RGS order, each exactly
/// once. Throws CapError when m exceeds the configured cap and InputError
/// for m outside [1, 16].
class PartitionEnumerator {
public:
    explicit PartitionEnumerator(unsigned m, const Caps& caps = {});

    /// Fills `out` with the next partition; false when exhausted.
    bool next(SetPartition& out);

private:
    unsigned m_;
    bool done_ = false;
    bool first_ = true;
    std::array<std::uint8_t, kPartitionHardCap> rgs_{};
    std::array<std::uint8_t, kPartitionHardCap> prefix_max_{};

    void emit(SetPartition& out) const;
    bool advance();
};

template <typename Fn>
void for_each_partition(unsigned m, const Caps& caps, Fn&& fn) {
    PartitionEnumerator en(m, caps);
    SetPartition p;
    while (en.next(p)) fn(p);
}

}  // namespace permflow
