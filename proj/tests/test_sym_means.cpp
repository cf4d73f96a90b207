#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "permflow/errors.hpp"
#include "permflow/matrix.hpp"
#include "permflow/permanent.hpp"
#include "permflow/subset_sums.hpp"
#include "permflow/sym_means.hpp"
#include "test_util.hpp"

using namespace permflow;

namespace {

// Independent O(n^3) oracle for E_3.
double brute_e3(const std::vector<double>& x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            for (std::size_t k = j + 1; k < x.size(); ++k) {
                acc += x[i] * x[j] * x[k];
            }
        }
    }
    return acc;
}

double brute_e2(const std::vector<double>& x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = i + 1; j < x.size(); ++j) acc += x[i] * x[j];
    }
    return acc;
}

}  // namespace

TEST_CASE("elementary symmetric basics") {
    const std::vector<double> x{1.0, 2.0, 3.0};
    CHECK(elementary_symmetric(x, 0).to_double() == 1.0);
    CHECK(elementary_symmetric(x, 1).to_double() == 6.0);
    CHECK(elementary_symmetric(x, 2).to_double() == 11.0);
    CHECK(elementary_symmetric(x, 3).to_double() == 6.0);

    const std::vector<double> y{1.0, 4.0};
    CHECK(elementary_symmetric(y, 2).to_double() == 4.0);  // the product
    CHECK_THROWS_AS(elementary_symmetric(y, 3), InputError);
}

TEST_CASE("E_3 of 100 seeded values matches the triple loop") {
    const auto x = testutil::random_vector(100, 2024, 0.0, 1.0);
    const double got = elementary_symmetric(x, 3).to_double();
    CHECK(testutil::close_rel(got, brute_e3(x), 1e-10));
}

TEST_CASE("symmetric means of (1,4)") {
    const std::vector<double> x{1.0, 4.0};
    CHECK(symmetric_mean(x, 1) == 2.5);  // arithmetic mean, exact
    CHECK(symmetric_mean(x, 2) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("constant vectors have constant profiles") {
    const std::vector<double> x(17, 0.75);
    for (std::size_t k = 1; k <= x.size(); ++k) {
        CHECK(symmetric_mean(x, k) == doctest::Approx(0.75).epsilon(1e-13));
    }
    const SymmetricMeanProfile prof = symmetric_mean_profile(x);
    for (double v : prof.values) {
        CHECK(v == doctest::Approx(0.75).epsilon(1e-13));
    }
}

TEST_CASE("M_2(1,2,3,4) from pair enumeration") {
    const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
    const double e2 = brute_e2(x);
    CHECK(e2 == 35.0);
    CHECK(symmetric_mean(x, 2) ==
          doctest::Approx(std::sqrt(35.0 / 6.0)).epsilon(1e-14));
}

TEST_CASE("negative entries are a domain error") {
    const std::vector<double> x{1.0, -0.5};
    CHECK_THROWS_AS(symmetric_mean(x, 1), InputError);
    CHECK_THROWS_AS(symmetric_mean_profile(x), InputError);
}

TEST_CASE("profiles of seeded vectors are nonincreasing") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        const auto x = testutil::random_vector(50, seed, 0.0, 2.0);
        const SymmetricMeanProfile prof = symmetric_mean_profile(x);
        CAPTURE(seed);
        CHECK(maclaurin_violations(prof, 1e-12) == 0);
        CHECK(prof.values.front() ==
              doctest::Approx(
                  std::accumulate(x.begin(), x.end(), 0.0) / 50.0));
    }
}

TEST_CASE("profile endpoints are the arithmetic and geometric means") {
    const auto x = testutil::random_vector(30, 64, 0.1, 3.0);
    const SymmetricMeanProfile prof = symmetric_mean_profile(x);
    double log_sum = 0.0;
    for (double v : x) log_sum += std::log(v);
    CHECK(prof.values.back() ==
          doctest::Approx(std::exp(log_sum / 30.0)).epsilon(1e-12));
    CHECK(prof.log_values.back() ==
          doctest::Approx(log_sum / 30.0).epsilon(1e-12));
}

TEST_CASE("profile survives ranges that overflow raw doubles") {
    // 900 entries of 800: E_450 ~ C(900,450) * 800^450, far past 1e308.
    const std::vector<double> x(900, 800.0);
    const SymmetricMeanProfile prof = symmetric_mean_profile(x);
    REQUIRE(prof.values.size() == 900);
    for (std::size_t k = 1; k <= 900; k += 89) {
        CHECK(prof.values[k - 1] == doctest::Approx(800.0).epsilon(1e-9));
    }
}

TEST_CASE("zeros in the input produce zero tail means") {
    const std::vector<double> x{2.0, 0.0, 3.0};
    const SymmetricMeanProfile prof = symmetric_mean_profile(x);
    CHECK(prof.values[2] == 0.0);              // M_3 includes the zero
    CHECK(prof.log_values[2] == -HUGE_VAL);
    CHECK(prof.values[0] == doctest::Approx(5.0 / 3.0));
    CHECK(maclaurin_violations(prof) == 0);
}

TEST_CASE("scaled path matches a rescaled oracle on huge entries") {
    // Entries around 1e300 reject the raw-double fast path outright. The
    // oracle uses E_k(c x) = c^k E_k(x): run the recurrence on entries
    // divided by 1e300 and shift the log back analytically.
    permflow::SplitMix64 rng(123);
    std::vector<double> x(40), unit(40);
    for (std::size_t i = 0; i < x.size(); ++i) {
        unit[i] = 0.5 + rng.next_unit();
        x[i] = unit[i] * 1e300;
    }

    std::vector<double> e(5, 0.0);
    e[0] = 1.0;
    for (double v : unit) {
        for (std::size_t t = 4; t >= 1; --t) e[t] += e[t - 1] * v;
    }
    for (std::size_t k = 1; k <= 4; ++k) {
        const ScaledReal got = elementary_symmetric(x, k);
        const double oracle_log =
            std::log(e[k]) + static_cast<double>(k) * std::log(1e300);
        CAPTURE(k);
        CHECK(got.log_abs() == doctest::Approx(oracle_log).epsilon(1e-12));
    }
}

TEST_CASE("scaled fallback agrees with the fast path when both work") {
    const auto x = testutil::random_vector(60, 7, 0.0, 3.0);
    const double fast = elementary_symmetric(x, 5).to_double();
    // Same recurrence by hand in scaled arithmetic.
    std::vector<ScaledReal> e(6);
    e[0] = ScaledReal::from(1.0);
    for (double v : x) {
        for (std::size_t t = 5; t >= 1; --t) e[t] += e[t - 1] * v;
    }
    CHECK(e[5].to_double() == fast);
}

TEST_CASE("newton bridge: power sums reproduce E_m") {
    // m = 2: (p1^2 - p2) / 2 on (1,2,3).
    CHECK(elementary_from_power_sums(std::vector<double>{6.0, 14.0}) == 11.0);
    // m = 3 on (1,2,3): (p1^3 - 3 p1 p2 + 2 p3) / 6 = 6.
    CHECK(elementary_from_power_sums(std::vector<double>{6.0, 14.0, 36.0}) ==
          doctest::Approx(6.0).epsilon(1e-14));

    for (std::uint64_t seed = 3; seed <= 10; ++seed) {
        const auto x = testutil::random_vector(20, seed, -1.0, 1.0);
        for (unsigned m : {2u, 3u, 5u, 8u}) {
            std::vector<double> p(m, 0.0);
            for (double v : x) {
                double pw = 1.0;
                for (unsigned k = 0; k < m; ++k) {
                    pw *= v;
                    p[k] += pw;
                }
            }
            const double via_power = elementary_from_power_sums(p);
            const double direct = elementary_symmetric(x, m).to_double();
            CAPTURE(seed);
            CAPTURE(m);
            CHECK(testutil::close_rel(via_power, direct, 1e-9, 1e-9));
        }
    }
}

TEST_CASE("permanent bridge: equal rows give m! E_m") {
    for (std::uint64_t seed = 11; seed <= 20; ++seed) {
        const unsigned m = 2 + static_cast<unsigned>(seed % 5);
        const unsigned n = m + 3 + static_cast<unsigned>(seed % 6);
        const auto x = testutil::random_vector(n, seed, 0.0, 2.0);
        std::vector<double> rows;
        for (unsigned i = 0; i < m; ++i) rows.insert(rows.end(), x.begin(), x.end());
        const OblongMatrix a(m, n, std::move(rows));
        double mfact = 1.0;
        for (unsigned k = 2; k <= m; ++k) mfact *= k;
        const double per = permanent_binet_minc(SubsetSums::of(a));
        const double em = elementary_symmetric(x, m).to_double();
        CAPTURE(m);
        CAPTURE(n);
        CHECK(testutil::close_rel(per, mfact * em, 1e-10));
    }
}

TEST_CASE("complementary mean identity on strictly positive vectors") {
    // E_(n-m)(x) = (prod x) E_m(1/x) gives
    // M_(n-m)/M_n = [M_n * M_m(1/x)]^(m/(n-m)).
    for (std::uint64_t seed = 30; seed <= 40; ++seed) {
        const std::size_t n = 20 + static_cast<std::size_t>(seed % 30);
        const unsigned m = 1 + static_cast<unsigned>(seed % 5);
        const auto x = testutil::random_vector(n, seed, 0.2, 3.0);
        std::vector<double> inv(n);
        for (std::size_t i = 0; i < n; ++i) inv[i] = 1.0 / x[i];

        const double mn = symmetric_mean(x, n);
        const double lhs = symmetric_mean(x, n - m) / mn;
        const double rhs =
            std::pow(mn * symmetric_mean(inv, m),
                     static_cast<double>(m) / static_cast<double>(n - m));
        CAPTURE(seed);
        CHECK(testutil::close_rel(lhs, rhs, 1e-10));
    }
}

TEST_CASE("complementary identity on a worked example") {
    // x = (1, 2, 4): M_1 = 7/3, M_2 = sqrt(14/3), M_3 = 2.
    const std::vector<double> x{1.0, 2.0, 4.0};
    const double lhs = symmetric_mean(x, 2) / symmetric_mean(x, 3);
    const double rhs = std::sqrt(
        symmetric_mean(x, 3) *
        symmetric_mean(std::vector<double>{1.0, 0.5, 0.25}, 1));
    CHECK(lhs == doctest::Approx(std::sqrt(14.0 / 3.0) / 2.0).epsilon(1e-13));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
}

TEST_CASE("scale equivariance") {
    const auto x = testutil::random_vector(40, 91, 0.0, 1.0);
    std::vector<double> scaled(x);
    for (double& v : scaled) v *= 3.5;
    for (std::size_t k : {1u, 2u, 7u, 20u, 40u}) {
        CHECK(testutil::close_rel(symmetric_mean(scaled, k),
                                  3.5 * symmetric_mean(x, k), 1e-12));
    }
}

TEST_CASE("streaming accumulator matches the batch recurrence") {
    const auto x = testutil::random_vector(500, 314, 0.0, 2.0);
    StreamingElementarySymmetric stream(4);
    for (double v : x) stream.push(v);
    CHECK(stream.count() == 500);
    const double batch = elementary_symmetric(x, 4).to_double();
    CHECK(testutil::close_rel(stream.coefficient(4).to_double(), batch, 1e-12));
    CHECK(testutil::close_rel(stream.symmetric_mean(4), symmetric_mean(x, 4),
                              1e-12));
    CHECK(stream.symmetric_mean(1) == symmetric_mean(x, 1));
}

TEST_CASE("log_binomial sanity") {
    CHECK(log_binomial(4, 2) == doctest::Approx(std::log(6.0)).epsilon(1e-14));
    CHECK(log_binomial(10, 0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK_THROWS_AS(log_binomial(3, 4), InputError);
}

TEST_CASE("upow multiplies the plain way") {
    CHECK(upow(3.0, 0) == 1.0);
    CHECK(upow(2.0, 10) == 1024.0);
    CHECK(upow(10.0, 1) == 10.0);
}
