#include <doctest.h>

#include <algorithm>
#include <bit>
#include <set>
#include <vector>

#include "permflow/errors.hpp"
#include "permflow/partitions.hpp"

using namespace permflow;

namespace {

// Independent oracle: recursive generation by choosing the block of the
// smallest remaining element. Returns partitions as sorted mask lists.
void oracle_rec(std::uint32_t remaining, std::vector<std::uint32_t>& acc,
                std::set<std::vector<std::uint32_t>>& out) {
    if (remaining == 0) {
        std::vector<std::uint32_t> sorted = acc;
        std::sort(sorted.begin(), sorted.end());
        out.insert(sorted);
        return;
    }
    const std::uint32_t low_bit = remaining & (~remaining + 1);
    const std::uint32_t rest = remaining ^ low_bit;
    // All subsets of `rest` joined with the lowest element form its block.
    std::uint32_t sub = 0;
    while (true) {
        acc.push_back(low_bit | sub);
        oracle_rec(rest ^ sub, acc, out);
        acc.pop_back();
        if (sub == rest) break;
        sub = (sub - rest) & rest;  // next subset of rest
    }
}

std::set<std::vector<std::uint32_t>> oracle_partitions(unsigned m) {
    std::set<std::vector<std::uint32_t>> out;
    std::vector<std::uint32_t> acc;
    oracle_rec((1u << m) - 1u, acc, out);
    return out;
}

std::vector<std::uint32_t> masks_of(const SetPartition& p) {
    std::vector<std::uint32_t> masks(p.block_masks.begin(),
                                     p.block_masks.begin() + p.block_count);
    std::sort(masks.begin(), masks.end());
    return masks;
}

}  // namespace

TEST_CASE("bell numbers") {
    CHECK(bell_number(1) == 1);
    CHECK(bell_number(2) == 2);
    CHECK(bell_number(3) == 5);
    CHECK(bell_number(4) == 15);
    CHECK(bell_number(16) == 10480142147ull);
    CHECK_THROWS_AS(bell_number(17), InputError);
}

TEST_CASE("m = 1 has exactly the one-block partition") {
    PartitionEnumerator en(1);
    SetPartition p;
    REQUIRE(en.next(p));
    CHECK(p.block_count == 1);
    CHECK(p.block_masks[0] == 0b1u);
    CHECK_FALSE(en.next(p));
}

TEST_CASE("m = 3 yields the five classical partitions") {
    std::set<std::vector<std::uint32_t>> seen;
    for_each_partition(3, Caps{}, [&](const SetPartition& p) {
        seen.insert(masks_of(p));
    });
    const std::set<std::vector<std::uint32_t>> expected = {
        {0b111},               // {1,2,3}
        {0b001, 0b110},        // {1}{2,3}
        {0b010, 0b101},        // {2}{1,3}
        {0b011, 0b100},        // {1,2}{3}
        {0b001, 0b010, 0b100}  // {1}{2}{3}
    };
    CHECK(seen == expected);
}

TEST_CASE("enumeration matches the recursive oracle") {
    for (unsigned m = 1; m <= 6; ++m) {
        std::set<std::vector<std::uint32_t>> seen;
        std::uint64_t count = 0;
        for_each_partition(m, Caps{}, [&](const SetPartition& p) {
            ++count;
            seen.insert(masks_of(p));
        });
        CAPTURE(m);
        CHECK(count == bell_number(m));       // no duplicates dropped
        CHECK(seen == oracle_partitions(m));  // exactly the right set
    }
}

TEST_CASE("partitions satisfy the structural invariants") {
    for (unsigned m : {4u, 8u}) {
        std::uint64_t count = 0;
        for_each_partition(m, Caps{}, [&](const SetPartition& p) {
            ++count;
            CHECK(p.rgs[0] == 0);
            std::uint8_t max_seen = 0;
            for (unsigned i = 1; i < m; ++i) {
                max_seen = std::max(max_seen, p.rgs[i - 1]);
                CHECK(p.rgs[i] <= max_seen + 1);
            }
            std::uint32_t cover = 0;
            for (unsigned b = 0; b < p.block_count; ++b) {
                CHECK(p.block_masks[b] != 0);
                CHECK((cover & p.block_masks[b]) == 0);  // disjoint
                cover |= p.block_masks[b];
            }
            CHECK(cover == (1u << m) - 1u);  // covers {1..m}
        });
        CHECK(count == bell_number(m));
    }
}

TEST_CASE("caps are enforced") {
    CHECK_THROWS_AS(PartitionEnumerator(13, Caps{}), CapError);
    Caps tight;
    tight.partition_m_cap = 4;
    CHECK_THROWS_AS(PartitionEnumerator(5, tight), CapError);
    CHECK_THROWS_AS(PartitionEnumerator(0, Caps{}), InputError);
    Caps wide;
    wide.partition_m_cap = 16;
    CHECK_THROWS_AS(PartitionEnumerator(17, wide), InputError);
}
