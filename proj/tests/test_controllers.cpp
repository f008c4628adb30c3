#include <doctest.h>

#include <cmath>
#include <optional>
#include <vector>
#include <stdexcept>

#include "adadrop/controllers.hpp"

using namespace adadrop;

namespace {

const UniformFn kForceAccept = []() { return 0.0; };
const UniformFn kForceReject = []() { return 1.0 - 1e-12; };

ControllerConfig base_config(Variant variant) {
    ControllerConfig config;
    config.variant = variant;
    config.family = DecayKind::logarithmic;
    config.alpha_init = 0.2;
    config.total_epochs = 50;
    return config;
}

Feedback feedback_for(std::int64_t completed_epoch, double delta) {
    Feedback fb;
    fb.epoch = completed_epoch;
    fb.acc_prev = 0.5;
    fb.acc_curr = 0.5 + delta;
    fb.delta = delta;
    return fb;
}

ScheduleState state_at(std::int64_t epoch, double alpha, double keep_fraction) {
    ScheduleState state;
    state.epoch = epoch;
    state.alpha = alpha;
    state.keep_fraction = keep_fraction;
    state.t0 = 1.0;
    return state;
}

}  // namespace

TEST_CASE("compute_feedback basics") {
    CHECK(compute_feedback(0.66, 0.60, 5).delta == doctest::Approx(0.06).epsilon(1e-12));
    CHECK(compute_feedback(0.50, 0.50, 2).delta == 0.0);
    CHECK(compute_feedback(0.40, 0.55, 9).delta == doctest::Approx(-0.15).epsilon(1e-12));
    CHECK_THROWS_AS(compute_feedback(1.2, 0.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(compute_feedback(0.5, -0.1, 1), std::invalid_argument);
    CHECK_THROWS_AS(compute_feedback(0.5, 0.5, 0), std::invalid_argument);
}

TEST_CASE("acceptance rule") {
    SUBCASE("improving deltas always accept") {
        const AcceptanceOutcome out = accept(0.03, 0.02, 0.5, kForceReject);
        CHECK(out.probability == 1.0);
        CHECK(out.accepted);
    }
    SUBCASE("delta zero uses p0") {
        CHECK(accept(0.0, 0.02, 0.5, kForceAccept).probability == 0.5);
    }
    SUBCASE("delta = -tau scales by 1/e") {
        const AcceptanceOutcome out = accept(-0.02, 0.02, 0.5, kForceAccept);
        CHECK(out.probability == doctest::Approx(0.5 / std::exp(1.0)).epsilon(1e-12));
    }
    SUBCASE("outcome is the draw-vs-probability comparison") {
        for (double u : {0.0, 0.1, 0.49, 0.51, 0.99}) {
            const AcceptanceOutcome out = accept(0.0, 0.02, 0.5, [u]() { return u; });
            CHECK(out.uniform_draw == u);
            CHECK(out.accepted == (u < out.probability));
        }
    }
    SUBCASE("invalid parameters rejected") {
        CHECK_THROWS_AS(accept(0.0, 0.0, 0.5, kForceAccept), std::invalid_argument);
        CHECK_THROWS_AS(accept(0.0, 0.02, 0.0, kForceAccept), std::invalid_argument);
        CHECK_THROWS_AS(accept(0.0, 0.02, 1.5, kForceAccept), std::invalid_argument);
    }
}

TEST_CASE("acceptance calibration at delta = 0") {
    Xoshiro256PP rng = derive_stream(3, StreamId::acceptance, 0);
    int accepted = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i)
        accepted += accept(0.0, 0.02, 0.5, rng).accepted;
    const double rate = static_cast<double>(accepted) / draws;
    CHECK(rate >= 0.49);
    CHECK(rate <= 0.51);
}

TEST_CASE("adaptive alpha update rules") {
    ControllerConfig config = base_config(Variant::adaptive_alpha);

    SUBCASE("improvement raises alpha multiplicatively") {
        const auto [next, decision] =
            adaptive_alpha_step(state_at(6, 0.10, 0.5), feedback_for(5, 0.02), config, 100,
                                kForceReject);
        CHECK(next.alpha == doctest::Approx(0.12).epsilon(1e-12));
        CHECK(decision.accepted);
    }

    SUBCASE("rejection lowers alpha and widens the next keep-fraction") {
        for (DecayKind kind : {DecayKind::exponential, DecayKind::inverse_linear,
                               DecayKind::logarithmic}) {
            config.family = kind;
            const ScheduleState state = state_at(6, 0.10, 0.5);
            const Feedback fb = feedback_for(5, -0.01);
            const auto [next, decision] = adaptive_alpha_step(state, fb, config, 100, kForceReject);
            CHECK(next.alpha == doctest::Approx(0.08).epsilon(1e-12));
            CHECK_FALSE(decision.accepted);
            const double unrejected = decay_fraction(config.decay_family(0.10), 6);
            CHECK(decision.keep_fraction >= unrejected);
        }
    }

    SUBCASE("alpha clamps at the top") {
        ScheduleState state = state_at(6, config.alpha_max, 0.5);
        const auto [next, decision] =
            adaptive_alpha_step(state, feedback_for(5, 0.05), config, 100, kForceReject);
        CHECK(next.alpha == config.alpha_max);
        (void)decision;
    }

    SUBCASE("alpha clamps at the bottom") {
        ScheduleState state = state_at(6, config.alpha_min, 0.5);
        const auto [next, decision] =
            adaptive_alpha_step(state, feedback_for(5, -0.5), config, 100, kForceReject);
        CHECK(next.alpha == config.alpha_min);
        (void)decision;
    }

    SUBCASE("acceptance at non-improving delta still advances alpha") {
        const auto [next, decision] =
            adaptive_alpha_step(state_at(6, 0.10, 0.5), feedback_for(5, -0.01), config, 100,
                                kForceAccept);
        CHECK(next.alpha == doctest::Approx(0.12).epsilon(1e-12));
        CHECK(decision.accepted);
    }
}

TEST_CASE("adaptive T update rules") {
    ControllerConfig config = base_config(Variant::adaptive_t);
    config.delta_threshold = 0.01;
    config.gamma = 1.5;

    SUBCASE("improvement beyond the threshold follows the base trajectory") {
        const auto [next, decision] =
            adaptive_t_step(state_at(7, 0.2, 0.4), feedback_for(6, 0.05), config, 100,
                            kForceReject);
        CHECK(decision.keep_fraction == base_trajectory(config, 7));
        CHECK_FALSE(decision.reheated);
        CHECK(decision.accepted);
        CHECK(next.keep_fraction == decision.keep_fraction);
    }

    SUBCASE("forced rejection reheats by gamma, clamped at t0") {
        const auto [next, decision] =
            adaptive_t_step(state_at(7, 0.2, 0.4), feedback_for(6, -0.02), config, 100,
                            kForceReject);
        CHECK(decision.keep_fraction == doctest::Approx(0.6).epsilon(1e-15));
        CHECK(decision.reheated);
        CHECK_FALSE(decision.accepted);
        (void)next;

        const auto [next2, decision2] =
            adaptive_t_step(state_at(7, 0.2, 0.8), feedback_for(6, -0.02), config, 100,
                            kForceReject);
        CHECK(decision2.keep_fraction == 1.0);
        CHECK(decision2.reheated);
        (void)next2;
    }

    SUBCASE("acceptance below the threshold still follows the schedule") {
        const auto [next, decision] =
            adaptive_t_step(state_at(7, 0.2, 0.4), feedback_for(6, -0.02), config, 100,
                            kForceAccept);
        CHECK(decision.keep_fraction == base_trajectory(config, 7));
        CHECK_FALSE(decision.reheated);
        (void)next;
    }

    SUBCASE("reheating never lowers the keep-fraction") {
        double fraction = 0.1;
        ScheduleState state = state_at(5, 0.2, fraction);
        for (int i = 0; i < 10; ++i) {
            const auto [next, decision] =
                adaptive_t_step(state, feedback_for(state.epoch - 1, -0.1), config, 100,
                                kForceReject);
            CHECK(decision.reheated);
            CHECK(decision.keep_fraction >= state.keep_fraction);
            CHECK(decision.keep_fraction <= 1.0);
            state = next;
        }
        CHECK(state.keep_fraction == 1.0);
    }
}

TEST_CASE("fixed PDD schedule ignores feedback") {
    ControllerConfig config = base_config(Variant::fixed_pdd);
    config.pdd_ratio = 0.7;

    const auto [s3, d3] = fixed_pdd_step(state_at(3, 0.2, 1.0), config, 100);
    CHECK(d3.keep_fraction == doctest::Approx(0.49).epsilon(1e-12));
    (void)s3;

    // 0.7^11 is about 0.0198: clamped to the floor.
    const auto [s12, d12] = fixed_pdd_step(state_at(12, 0.2, 1.0), config, 100);
    CHECK(std::pow(0.7, 11) < 0.05);
    CHECK(d12.keep_fraction == 0.05);
    (void)s12;
}

TEST_CASE("scheduler interface contract") {
    for (Variant variant : {Variant::adaptive_alpha, Variant::adaptive_t, Variant::fixed_pdd,
                            Variant::full_baseline}) {
        ControllerConfig config = base_config(variant);
        config.total_epochs = 9;
        const Controller controller(config);
        Xoshiro256PP rng(1);

        SUBCASE("epoch 1 uses the full dataset") {
            const auto [next, decision] =
                controller.begin_epoch(controller.initial_state(), std::nullopt, 50, rng);
            CHECK(decision.keep_fraction == 1.0);
            CHECK(decision.subset_size == 50);
            CHECK(next.epoch == 2);
        }

        SUBCASE("final epoch is a full-data revision") {
            ScheduleState state = state_at(9, config.alpha_init, 0.3);
            const auto [next, decision] =
                controller.begin_epoch(state, feedback_for(8, -0.2), 100, rng);
            CHECK(decision.is_revision);
            CHECK(decision.subset_size == 100);
            CHECK(decision.keep_fraction == 1.0);
            (void)next;
        }

        SUBCASE("epoch past the horizon is a harness bug") {
            ScheduleState state = state_at(10, config.alpha_init, 0.3);
            CHECK_THROWS_AS(controller.begin_epoch(state, feedback_for(9, 0.0), 100, rng),
                            std::invalid_argument);
        }

        SUBCASE("feedback presence is enforced") {
            CHECK_THROWS_AS(controller.begin_epoch(controller.initial_state(),
                                                   feedback_for(0, 0.0), 100, rng),
                            std::invalid_argument);
            ScheduleState state = state_at(4, config.alpha_init, 0.5);
            CHECK_THROWS_AS(controller.begin_epoch(state, std::nullopt, 100, rng),
                            std::invalid_argument);
            CHECK_THROWS_AS(controller.begin_epoch(state, feedback_for(5, 0.0), 100, rng),
                            std::invalid_argument);
        }
    }
}

TEST_CASE("full baseline always keeps everything") {
    ControllerConfig config = base_config(Variant::full_baseline);
    config.total_epochs = 6;
    const Controller controller(config);
    ScheduleState state = controller.initial_state();
    std::optional<Feedback> feedback;
    for (std::int64_t t = 1; t <= 6; ++t) {
        const auto [next, decision] = controller.begin_epoch(state, feedback, 64, kForceReject);
        CHECK(decision.subset_size == 64);
        CHECK(decision.keep_fraction == 1.0);
        state = next;
        feedback = feedback_for(t, -0.5);
    }
}

TEST_CASE("feedback-blind controllers produce identical sequences for any feedback") {
    for (Variant variant : {Variant::fixed_pdd, Variant::full_baseline}) {
        ControllerConfig config = base_config(variant);
        config.total_epochs = 20;
        const Controller controller(config);

        Xoshiro256PP noise(6);
        for (int script = 0; script < 20; ++script) {
            ScheduleState sa = controller.initial_state();
            ScheduleState sb = controller.initial_state();
            std::optional<Feedback> fa;
            std::optional<Feedback> fb;
            for (std::int64_t t = 1; t <= 20; ++t) {
                const auto [na, da] = controller.begin_epoch(sa, fa, 333, kForceAccept);
                const auto [nb, db] = controller.begin_epoch(sb, fb, 333, kForceReject);
                CHECK(da.subset_size == db.subset_size);
                CHECK(da.keep_fraction == db.keep_fraction);
                sa = na;
                sb = nb;
                fa = feedback_for(t, uniform01(noise) - 0.5);
                fb = feedback_for(t, uniform01(noise) - 0.5);
            }
        }
    }
}

TEST_CASE("improving runs track the base trajectory bit-exactly") {
    ControllerConfig config = base_config(Variant::adaptive_t);
    config.total_epochs = 40;
    config.delta_threshold = 0.01;
    const Controller controller(config);

    ScheduleState state = controller.initial_state();
    std::optional<Feedback> feedback;
    for (std::int64_t t = 1; t <= 40; ++t) {
        const auto [next, decision] = controller.begin_epoch(state, feedback, 1000, kForceReject);
        if (t < 40)
            CHECK(decision.keep_fraction == base_trajectory(config, t));
        else
            CHECK(decision.keep_fraction == 1.0);
        state = next;
        feedback = feedback_for(t, 0.02);  // always above the threshold
    }
}

TEST_CASE("size rule holds for every decision") {
    Xoshiro256PP rng(91);
    for (Variant variant : {Variant::adaptive_alpha, Variant::adaptive_t, Variant::fixed_pdd}) {
        ControllerConfig config = base_config(variant);
        config.total_epochs = 30;
        const Controller controller(config);
        const std::int64_t n = 173;

        ScheduleState state = controller.initial_state();
        std::optional<Feedback> feedback;
        for (std::int64_t t = 1; t <= 30; ++t) {
            const auto [next, decision] = controller.begin_epoch(state, feedback, n, rng);
            if (decision.is_revision)
                CHECK(decision.subset_size == n);
            else
                CHECK(decision.subset_size == subset_size_for(decision.keep_fraction, n));
            CHECK(decision.subset_size >= 1);
            CHECK(decision.subset_size <= n);
            state = next;
            feedback = feedback_for(t, uniform01(rng) * 0.2 - 0.1);
        }
    }
}

TEST_CASE("identical seeds replay identical decision sequences") {
    for (Variant variant : {Variant::adaptive_alpha, Variant::adaptive_t}) {
        ControllerConfig config = base_config(variant);
        config.total_epochs = 25;
        const Controller controller(config);

        // Shared scripted feedback, fresh acceptance streams per run.
        auto run = [&](std::uint64_t seed) {
            std::vector<EpochDecision> decisions;
            ScheduleState state = controller.initial_state();
            std::optional<Feedback> feedback;
            Xoshiro256PP script(777);
            for (std::int64_t t = 1; t <= 25; ++t) {
                Xoshiro256PP accept_rng = derive_stream(seed, StreamId::acceptance, t);
                const auto [next, decision] =
                    controller.begin_epoch(state, feedback, 500, accept_rng);
                decisions.push_back(decision);
                state = next;
                feedback = feedback_for(t, uniform01(script) * 0.1 - 0.05);
            }
            return decisions;
        };

        const auto a = run(42);
        const auto b = run(42);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].subset_size == b[i].subset_size);
            CHECK(a[i].keep_fraction == b[i].keep_fraction);
            CHECK(a[i].accepted == b[i].accepted);
            CHECK(a[i].reheated == b[i].reheated);
        }
    }
}
