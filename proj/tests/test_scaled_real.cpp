#include <doctest.h>

#include <cmath>
#include <initializer_list>

#include "permflow/rng.hpp"
#include "permflow/scaled_real.hpp"

using permflow::ScaledReal;

TEST_CASE("scaled real round-trips doubles") {
    for (double v : {0.0, 1.0, -2.5, 1e-300, 1e300, 3.141592653589793}) {
        CHECK(ScaledReal::from(v).to_double() == v);
    }
    CHECK(ScaledReal::from(0.0).is_zero());
    CHECK(ScaledReal::from(-3.0).sign() == -1);
}

TEST_CASE("operations match plain doubles while values stay in range") {
    permflow::SplitMix64 rng(5);
    for (int trial = 0; trial < 2000; ++trial) {
        const double a = 20.0 * rng.next_unit() - 10.0;
        const double b = 20.0 * rng.next_unit() - 10.0;
        const ScaledReal sa = ScaledReal::from(a);
        const ScaledReal sb = ScaledReal::from(b);
        CHECK((sa * b).to_double() == a * b);
        CHECK((sa * sb).to_double() == a * b);
        CHECK((sa + sb).to_double() == a + b);
    }
}

TEST_CASE("products beyond double range keep exact logs") {
    // (2^200)^8 = 2^1600, representable only in scaled form.
    ScaledReal p = ScaledReal::from(1.0);
    for (int i = 0; i < 8; ++i) p *= ScaledReal::from(0x1.0p200);
    CHECK(p.to_double() == HUGE_VAL);
    CHECK(p.log_abs() ==
          doctest::Approx(1600.0 * std::log(2.0)).epsilon(1e-14));

    ScaledReal q = ScaledReal::from(1.0);
    for (int i = 0; i < 8; ++i) q *= ScaledReal::from(0x1.0p-200);
    CHECK(q.to_double() == 0.0);
    CHECK(q.log_abs() ==
          doctest::Approx(-1600.0 * std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("adding values of wildly different size keeps the big one") {
    ScaledReal big = ScaledReal::from(0x1.0p200);
    for (int i = 0; i < 3; ++i) big *= ScaledReal::from(0x1.0p200);  // 2^800
    const ScaledReal small = ScaledReal::from(1.0);
    const ScaledReal sum1 = big + small;
    const ScaledReal sum2 = small + big;
    CHECK(sum1.log_abs() == big.log_abs());
    CHECK(sum2.log_abs() == big.log_abs());
}

TEST_CASE("zero is absorbing and neutral") {
    const ScaledReal z = ScaledReal::from(0.0);
    const ScaledReal v = ScaledReal::from(7.5);
    CHECK((z + v).to_double() == 7.5);
    CHECK((v + z).to_double() == 7.5);
    CHECK((v * 0.0).is_zero());
    CHECK((z * v).is_zero());
}

TEST_CASE("log_abs of zero is -inf") {
    CHECK(ScaledReal::from(0.0).log_abs() == -HUGE_VAL);
}
