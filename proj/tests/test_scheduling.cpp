#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "error.hpp"
#include "scheduling.hpp"

using namespace irsa;

namespace {

ErrorCode code_of(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::ok;
}

} // namespace

TEST_CASE("random selection")
{
    SUBCASE("edge counts")
    {
        ClassState state(5, Policy::random_selection);
        Rng rng(3);
        CHECK(state.select_random(0, rng).empty());
        CHECK(state.select_random(5, rng) == std::vector<std::uint32_t>{0, 1, 2, 3, 4});
        CHECK(code_of([&] { state.select_random(6, rng); }) ==
              ErrorCode::count_exceeds_population);
    }

    SUBCASE("selection is uniform across users")
    {
        const std::uint32_t population = 100;
        const std::uint32_t count = 25;
        const int frames = 100000;
        ClassState state(population, Policy::random_selection);
        Rng rng(2024);
        std::vector<int> activations(population, 0);
        for (int f = 0; f < frames; ++f)
            for (std::uint32_t user : state.select_random(count, rng))
                ++activations[user];
        const double p = 0.25;
        const double sigma = std::sqrt(frames * p * (1.0 - p));
        for (std::uint32_t user = 0; user < population; ++user)
            CHECK(std::abs(activations[user] - frames * p) < 3.0 * sigma);
    }
}

TEST_CASE("round-robin selection")
{
    SUBCASE("cycles through the queue")
    {
        ClassState state(4, Policy::round_robin);
        CHECK(state.select_round_robin(2) == std::vector<std::uint32_t>{0, 1});
        DelayAccumulator stats;
        state.record_outcome(std::vector<std::uint32_t>{0, 1}, std::vector<std::uint32_t>{0, 1},
                             0, stats);
        CHECK(state.select_round_robin(2) == std::vector<std::uint32_t>{2, 3});
        state.record_outcome(std::vector<std::uint32_t>{2, 3}, std::vector<std::uint32_t>{2, 3},
                             1, stats);
        CHECK(state.select_round_robin(2) == std::vector<std::uint32_t>{0, 1});
    }

    SUBCASE("failed users are selected first")
    {
        ClassState state(4, Policy::round_robin);
        DelayAccumulator stats;
        const auto frame1 = state.select_round_robin(2);
        CHECK(frame1 == std::vector<std::uint32_t>{0, 1});
        // user 1 fails
        state.record_outcome(frame1, std::vector<std::uint32_t>{0}, 0, stats);
        CHECK(state.pending_failures() == std::vector<std::uint32_t>{1});
        CHECK(state.select_round_robin(2) == std::vector<std::uint32_t>{1, 2});
    }

    SUBCASE("zero count leaves the head in place")
    {
        ClassState state(4, Policy::round_robin);
        CHECK(state.select_round_robin(0).empty());
        CHECK(state.select_round_robin(2) == std::vector<std::uint32_t>{0, 1});
    }

    SUBCASE("excess failures carry over, oldest first")
    {
        ClassState state(6, Policy::round_robin);
        DelayAccumulator stats;
        const auto frame1 = state.select_round_robin(3); // {0,1,2}
        state.record_outcome(frame1, {}, 0, stats);      // all fail
        CHECK(state.pending_failures() == std::vector<std::uint32_t>{0, 1, 2});
        // a smaller selection takes only the oldest failures
        CHECK(state.select_round_robin(2) == std::vector<std::uint32_t>{0, 1});
    }

    SUBCASE("queue skips users already retransmitting")
    {
        ClassState state(2, Policy::round_robin);
        DelayAccumulator stats;
        const auto frame1 = state.select_round_robin(2); // {0,1}, head wraps to 0
        state.record_outcome(frame1, std::vector<std::uint32_t>{1}, 0, stats); // 0 fails
        // failure 0 plus the next queue user that is not already selected
        CHECK(state.select_round_robin(2) == std::vector<std::uint32_t>{0, 1});
    }

    SUBCASE("count above the population is rejected")
    {
        ClassState state(4, Policy::round_robin);
        CHECK(code_of([&] { state.select_round_robin(5); }) ==
              ErrorCode::count_exceeds_population);
    }
}

TEST_CASE("outcome recording and delay accounting")
{
    SUBCASE("decoded users must have been activated")
    {
        ClassState state(4, Policy::round_robin);
        DelayAccumulator stats;
        CHECK(code_of([&] {
                  state.record_outcome(std::vector<std::uint32_t>{0, 1},
                                       std::vector<std::uint32_t>{2}, 0, stats);
              }) == ErrorCode::decoded_not_activated);
    }

    SUBCASE("success in the activation frame costs one frame")
    {
        // random policy: the packet clock starts at first activation
        ClassState state(4, Policy::random_selection);
        DelayAccumulator stats;
        state.record_outcome(std::vector<std::uint32_t>{2}, std::vector<std::uint32_t>{2}, 3,
                             stats);
        CHECK(stats.samples == 1);
        CHECK(stats.sum_frames == 1);
        CHECK(stats.max_frames == 1);
    }

    SUBCASE("loss-free round robin settles at the cycle length")
    {
        const std::uint32_t population = 100;
        const std::uint32_t count = 25;
        const int frames = 4000;
        ClassState state(population, Policy::round_robin);
        DelayAccumulator stats;
        std::vector<int> successes(population, 0);
        for (int frame = 0; frame < frames; ++frame) {
            const auto activated = state.select_round_robin(count);
            state.record_outcome(activated, activated, frame, stats);
            for (std::uint32_t user : activated)
                ++successes[user];
        }
        // every user succeeds exactly once per population/count frames
        for (std::uint32_t user = 0; user < population; ++user)
            CHECK(successes[user] == frames * count / population);
        CHECK(stats.max_frames == 4);
        // exact startup transient: mean = 4 - 6/frames
        CHECK(stats.average_frames() ==
              doctest::Approx(4.0 - 6.0 / frames).epsilon(1e-12));
    }

    SUBCASE("everyone active every frame means unit delay")
    {
        for (Policy policy : {Policy::round_robin, Policy::random_selection}) {
            ClassState state(8, policy);
            DelayAccumulator stats;
            Rng rng(14);
            for (int frame = 0; frame < 50; ++frame) {
                const auto activated = policy == Policy::round_robin
                                           ? state.select_round_robin(8)
                                           : state.select_random(8, rng);
                state.record_outcome(activated, activated, frame, stats);
            }
            CHECK(stats.average_frames() == doctest::Approx(1.0));
            CHECK(stats.max_frames == 1);
        }
    }

    SUBCASE("random selection renews at the activation rate but is unbounded")
    {
        const std::uint32_t population = 100;
        const std::uint32_t count = 25;
        const int frames = 20000;
        ClassState state(population, Policy::random_selection);
        DelayAccumulator stats;
        Rng rng(8);
        for (int frame = 0; frame < frames; ++frame) {
            const auto activated = state.select_random(count, rng);
            state.record_outcome(activated, activated, frame, stats);
        }
        // inter-success gaps are geometric with mean population/count = 4
        CHECK(stats.average_frames() == doctest::Approx(4.0).epsilon(0.02));
        CHECK(stats.max_frames > 4);
        CHECK(stats.average_frames() >= 1.0);
        CHECK(static_cast<double>(stats.max_frames) >= stats.average_frames());
    }

    SUBCASE("failed users keep their clock running")
    {
        ClassState state(4, Policy::round_robin);
        DelayAccumulator stats;
        const auto frame0 = state.select_round_robin(2); // {0,1}
        state.record_outcome(frame0, std::vector<std::uint32_t>{0}, 0, stats); // 1 fails
        const auto frame1 = state.select_round_robin(2); // {1,2}
        state.record_outcome(frame1, frame1, 1, stats);
        // user 1 pending since frame 0, decoded in frame 1: delay 2;
        // user 0 decoded at frame 0 (delay 1), user 2 at frame 1 (delay 2)
        CHECK(stats.samples == 3);
        CHECK(stats.sum_frames == 1 + 2 + 2);
        CHECK(stats.max_frames == 2);
    }
}
