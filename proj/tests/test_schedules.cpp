#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "adadrop/rng.hpp"
#include "adadrop/schedules.hpp"
#include "adadrop/types.hpp"

using namespace adadrop;

namespace {
const DecayKind kKinds[] = {DecayKind::exponential, DecayKind::inverse_linear,
                            DecayKind::logarithmic};
}

TEST_CASE("known values") {
    CHECK(decay_fraction({DecayKind::exponential, 0.6931472, 0.05}, 2) ==
          doctest::Approx(0.5).epsilon(1e-6));
    CHECK(decay_fraction({DecayKind::inverse_linear, 1.0, 0.05}, 3) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    // 1 - 2 ln 10 < 0: clamps exactly to the floor.
    CHECK(decay_fraction({DecayKind::logarithmic, 2.0, 0.05}, 10) == 0.05);
}

TEST_CASE("every family starts at exactly 1") {
    for (DecayKind kind : kKinds)
        for (double alpha : {1e-3, 0.1, 0.5, 2.0, 10.0})
            CHECK(decay_fraction({kind, alpha, 0.05}, 1) == 1.0);
}

TEST_CASE("nonincreasing in t and clamped to [f_floor, 1]") {
    for (DecayKind kind : kKinds) {
        for (double alpha : {0.01, 0.1, 0.7, 3.0}) {
            const DecayFamily family{kind, alpha, 0.05};
            double prev = decay_fraction(family, 1);
            for (std::int64_t t = 2; t <= 2000; ++t) {
                const double f = decay_fraction(family, t);
                CHECK(f <= prev);
                CHECK(f >= 0.05);
                CHECK(f <= 1.0);
                prev = f;
            }
        }
    }
}

TEST_CASE("range holds for random parameters") {
    Xoshiro256PP rng(31);
    for (int trial = 0; trial < 2000; ++trial) {
        const DecayKind kind = kKinds[uniform_below(rng, 3)];
        const double alpha = 1e-3 + 10.0 * uniform01(rng);
        const double floor = 0.01 + 0.5 * uniform01(rng);
        const auto t = static_cast<std::int64_t>(1 + uniform_below(rng, 100000));
        const double f = decay_fraction({kind, alpha, floor}, t);
        CHECK(f >= floor);
        CHECK(f <= 1.0);
    }
}

TEST_CASE("monotone nonincreasing in alpha at fixed t") {
    for (DecayKind kind : kKinds) {
        for (std::int64_t t : {2, 5, 40}) {
            double prev = decay_fraction({kind, 0.01, 0.01}, t);
            for (double alpha : {0.05, 0.1, 0.3, 1.0, 4.0}) {
                const double f = decay_fraction({kind, alpha, 0.01}, t);
                CHECK(f <= prev);
                prev = f;
            }
        }
    }
}

TEST_CASE("base trajectory uses the fixed alpha_init") {
    ControllerConfig config;
    config.family = DecayKind::logarithmic;
    config.alpha_init = 0.2;
    config.f_floor = 0.05;

    CHECK(base_trajectory(config, 1) == 1.0);
    CHECK(base_trajectory(config, 3) ==
          doctest::Approx(1.0 - 0.2 * std::log(3.0)).epsilon(1e-15));
    // 1 - 0.2 ln 200 is about -0.06: clamps to the floor.
    CHECK(1.0 - 0.2 * std::log(200.0) < 0.0);
    CHECK(base_trajectory(config, 200) == 0.05);

    // Bit-exact agreement with the underlying family at alpha_init.
    for (std::int64_t t = 1; t <= 500; ++t)
        CHECK(base_trajectory(config, t) ==
              decay_fraction({config.family, config.alpha_init, config.f_floor}, t));
}

TEST_CASE("t below 1 is rejected") {
    CHECK_THROWS_AS(decay_fraction({DecayKind::exponential, 0.1, 0.05}, 0),
                    std::invalid_argument);
}
