#include <doctest.h>

#include <bit>
#include <cstring>
#include <vector>

#include "permflow/errors.hpp"
#include "permflow/subset_sums.hpp"
#include "test_util.hpp"

using namespace permflow;

namespace {

// Independent oracle: nested loops straight off the definition,
// s_I = sum over columns of the product over rows in I.
std::vector<double> brute_force_sums(const OblongMatrix& a) {
    const unsigned m = static_cast<unsigned>(a.rows());
    std::vector<double> s(std::size_t{1} << m, 0.0);
    for (std::uint32_t mask = 1; mask < s.size(); ++mask) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            double prod = 1.0;
            for (unsigned i = 0; i < m; ++i) {
                if (mask & (1u << i)) prod *= a.at(i, j);
            }
            s[mask] += prod;
        }
    }
    return s;
}

}  // namespace

TEST_CASE("subset sums of the 2x2 example") {
    const OblongMatrix a(2, 2, {1, 2, 3, 4});
    const SubsetSums s = SubsetSums::of(a);
    CHECK(s.value(0b01) == 3.0);   // row 1 sum
    CHECK(s.value(0b10) == 7.0);   // row 2 sum
    CHECK(s.value(0b11) == 11.0);  // 1*3 + 2*4
    CHECK(s.columns() == 2);
}

TEST_CASE("a zero row kills every mask containing it") {
    const OblongMatrix a(3, 4, {1, 2, 3, 4,  //
                                0, 0, 0, 0,  //
                                5, 6, 7, 8});
    const SubsetSums s = SubsetSums::of(a);
    for (std::uint32_t mask = 1; mask < 8; ++mask) {
        if (mask & 0b010) CHECK(s.value(mask) == 0.0);
    }
    CHECK(s.value(0b001) == 10.0);
    CHECK(s.value(0b101) == 1 * 5 + 2 * 6 + 3 * 7 + 4 * 8);
}

TEST_CASE("random matrix matches the brute-force oracle") {
    const OblongMatrix a = testutil::random_matrix(3, 5, 20250511);
    const SubsetSums s = SubsetSums::of(a);
    const auto oracle = brute_force_sums(a);
    for (std::uint32_t mask = 1; mask < 8; ++mask) {
        CHECK(testutil::close_rel(s.value(mask), oracle[mask], 1e-13));
    }
}

TEST_CASE("singleton masks are row sums") {
    const OblongMatrix a = testutil::random_matrix(4, 7, 99);
    const SubsetSums s = SubsetSums::of(a);
    for (unsigned i = 0; i < 4; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) row += a.at(i, j);
        CHECK(testutil::close_rel(s.value(1u << i), row, 1e-15));
    }
}

TEST_CASE("append of a single column") {
    SubsetSums s(2);
    CHECK(s.columns() == 0);
    for (std::uint32_t mask = 1; mask < 4; ++mask) CHECK(s.value(mask) == 0.0);
    const double col[2] = {3.0, 4.0};
    s.append(std::span<const double>(col, 2));
    CHECK(s.value(0b01) == 3.0);
    CHECK(s.value(0b10) == 4.0);
    CHECK(s.value(0b11) == 12.0);
}

TEST_CASE("appending a zero column changes nothing") {
    SubsetSums s(3);
    const double col[3] = {1.5, -2.0, 0.25};
    s.append(std::span<const double>(col, 3));
    const std::vector<double> before(s.raw(), s.raw() + 8);
    const double zero[3] = {0.0, 0.0, 0.0};
    s.append(std::span<const double>(zero, 3));
    for (std::uint32_t mask = 1; mask < 8; ++mask) {
        CHECK(s.value(mask) == before[mask]);
    }
}

TEST_CASE("batch equals fold of appends, bit for bit") {
    const OblongMatrix a = testutil::random_matrix(5, 23, 4242);
    const SubsetSums batch = SubsetSums::of(a);

    SubsetSums fold(5);
    for (std::size_t j = 0; j < a.cols(); ++j) {
        double col[5];
        for (unsigned i = 0; i < 5; ++i) col[i] = a.at(i, j);
        fold.append(std::span<const double>(col, 5));
    }
    CHECK(fold.columns() == batch.columns());
    CHECK(std::memcmp(fold.raw(), batch.raw(), sizeof(double) << 5) == 0);
}

TEST_CASE("dimension mismatch is rejected") {
    SubsetSums s(3);
    const double col[2] = {1.0, 2.0};
    CHECK_THROWS_AS(s.append(std::span<const double>(col, 2)), InputError);
}
