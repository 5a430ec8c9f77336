#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "error.hpp"
#include "sic.hpp"
#include "sim_engine.hpp"

using namespace irsa;

namespace {

DegreeDistribution lambda_star()
{
    return DegreeDistribution::from_probs({{2, 0.5}, {3, 0.28}, {8, 0.22}});
}

DegreeDistribution single_replica()
{
    return DegreeDistribution::from_probs({{1, 1.0}});
}

ErrorCode code_of(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::ok;
}

bool reports_equal(const SimReport& a, const SimReport& b)
{
    if (a.frames != b.frames || a.seed != b.seed ||
        a.total_throughput != b.total_throughput || a.total_ci95 != b.total_ci95 ||
        a.slot_histogram != b.slot_histogram ||
        a.network_delay_avg_frames != b.network_delay_avg_frames ||
        a.network_delay_max_frames != b.network_delay_max_frames ||
        a.classes.size() != b.classes.size())
        return false;
    for (std::size_t i = 0; i < a.classes.size(); ++i) {
        const ClassReport& x = a.classes[i];
        const ClassReport& y = b.classes[i];
        if (x.throughput != y.throughput || x.ci95 != y.ci95 || x.loss_rate != y.loss_rate ||
            x.delay_avg_frames != y.delay_avg_frames ||
            x.delay_max_frames != y.delay_max_frames || x.delay_samples != y.delay_samples ||
            x.active_count != y.active_count)
            return false;
    }
    return true;
}

} // namespace

TEST_CASE("single frame execution")
{
    const SimOptions options{Policy::random_selection, ChannelModel::sic};

    SUBCASE("a lone active user always decodes")
    {
        NetworkSpec spec{10, {{10, lambda_star()}}};
        SimState state(spec, options.policy);
        Rng rng(1);
        const FrameResult result =
            run_frame(spec, std::vector<std::uint32_t>{1}, options, state, 0, rng);
        CHECK(result.activated == std::vector<std::uint32_t>{1});
        CHECK(result.successes == std::vector<std::uint32_t>{1});
    }

    SUBCASE("nobody active, nobody decoded")
    {
        NetworkSpec spec{10, {{5, lambda_star()}, {5, single_replica()}}};
        SimState state(spec, options.policy);
        Rng rng(2);
        const FrameResult result =
            run_frame(spec, std::vector<std::uint32_t>{0, 0}, options, state, 0, rng);
        CHECK(result.successes == std::vector<std::uint32_t>{0, 0});
        CHECK(result.activated == std::vector<std::uint32_t>{0, 0});
    }

    SUBCASE("successes never exceed activations")
    {
        NetworkSpec spec{20, {{20, lambda_star()}, {20, single_replica()}}};
        SimState state(spec, options.policy);
        std::vector<std::uint64_t> occupancy;
        for (std::int64_t frame = 0; frame < 200; ++frame) {
            Rng rng = Rng::substream(14, static_cast<std::uint64_t>(frame));
            const FrameResult result = run_frame(
                spec, std::vector<std::uint32_t>{10, 5}, options, state, frame, rng,
                &occupancy);
            CHECK(result.successes[0] <= result.activated[0]);
            CHECK(result.successes[1] <= result.activated[1]);
        }
        std::uint64_t slots = 0;
        for (std::uint64_t c : occupancy)
            slots += c;
        CHECK(slots == 200 * 20); // one occupancy sample per slot per frame
    }

    SUBCASE("activating more users than exist is rejected")
    {
        NetworkSpec spec{10, {{3, single_replica()}}};
        SimState state(spec, options.policy);
        Rng rng(3);
        CHECK(code_of([&] {
                  run_frame(spec, std::vector<std::uint32_t>{4}, options, state, 0, rng);
              }) == ErrorCode::load_exceeds_population);
    }
}

TEST_CASE("single active user always gets through")
{
    NetworkSpec spec{10, {{10, lambda_star()}}};
    const SimOptions options{Policy::random_selection, ChannelModel::sic};
    const SimReport report = run_simulation(spec, LoadVector{{0.1}}, options, 500, 1);
    CHECK(report.classes[0].active_count == 1);
    CHECK(report.classes[0].throughput == doctest::Approx(0.1));
    CHECK(report.classes[0].loss_rate == doctest::Approx(0.0));
}

TEST_CASE("zero load produces zero throughput and no delay samples")
{
    NetworkSpec spec{10, {{5, lambda_star()}, {5, single_replica()}}};
    const SimOptions options{Policy::random_selection, ChannelModel::sic};
    const SimReport report = run_simulation(spec, LoadVector{{0.0, 0.0}}, options, 50, 9);
    CHECK(report.total_throughput == 0.0);
    CHECK(report.classes[0].delay_samples == 0);
    CHECK(report.classes[1].delay_samples == 0);
    CHECK(report.network_delay_avg_frames == 0.0);
}

TEST_CASE("lightly loaded frames are essentially loss free")
{
    NetworkSpec spec{1000, {{200, lambda_star()}}};
    const SimOptions options{Policy::random_selection, ChannelModel::sic};
    const int frames = 300;
    SimState state(spec, options.policy);
    int nearly_complete = 0;
    for (int frame = 0; frame < frames; ++frame) {
        Rng rng = Rng::substream(4, static_cast<std::uint64_t>(frame));
        const FrameResult result =
            run_frame(spec, std::vector<std::uint32_t>{100}, options, state, frame, rng);
        if (result.successes[0] >= 99)
            ++nearly_complete;
    }
    // at a tenth of the threshold load, at least 99 of the 100 active users
    // decode in well over 95% of frames
    CHECK(nearly_complete >= frames * 95 / 100);
}

TEST_CASE("validation errors")
{
    NetworkSpec spec{4, {{10, lambda_star()}}};
    const SimOptions options{Policy::random_selection, ChannelModel::sic};
    SUBCASE("load above the population")
    {
        NetworkSpec small{100, {{10, single_replica()}}};
        CHECK(code_of([&] {
                  run_simulation(small, LoadVector{{0.5}}, options, 10, 1);
              }) == ErrorCode::load_exceeds_population);
    }
    SUBCASE("degree above the frame size")
    {
        CHECK(code_of([&] {
                  run_simulation(spec, LoadVector{{0.5}}, options, 10, 1);
              }) == ErrorCode::degree_exceeds_frame);
    }
    SUBCASE("load length mismatch")
    {
        CHECK(code_of([&] {
                  run_simulation(spec, LoadVector{{0.1, 0.1}}, options, 10, 1);
              }) == ErrorCode::length_mismatch);
    }
}

TEST_CASE("reports are reproducible for a fixed seed")
{
    NetworkSpec spec{50, {{30, lambda_star()}, {30, single_replica()}}};
    const SimOptions options{Policy::random_selection, ChannelModel::sic};
    const LoadVector load{{0.3, 0.2}};
    const SimReport a = run_simulation(spec, load, options, 400, 77);
    const SimReport b = run_simulation(spec, load, options, 400, 77);
    const SimReport c = run_simulation(spec, load, options, 400, 78);
    CHECK(reports_equal(a, b));
    CHECK_FALSE(reports_equal(a, c));
}

TEST_CASE("throughput never exceeds the realized load")
{
    NetworkSpec spec{60, {{60, lambda_star()}}};
    const SimOptions options{Policy::random_selection, ChannelModel::sic};
    std::vector<double> grid;
    for (int i = 1; i <= 10; ++i)
        grid.push_back(0.1 * i);
    const auto points =
        sweep_load(spec, std::vector<double>{1.0}, grid, options, 300, 5, 2);
    for (const SweepPoint& point : points) {
        CHECK(point.report.total_throughput <= point.report.offered_total + 1e-12);
        for (const ClassReport& cls : point.report.classes)
            CHECK(cls.throughput <= cls.offered_load + 1e-12);
    }
}

TEST_CASE("symmetric classes are statistically indistinguishable")
{
    NetworkSpec spec{100, {{100, lambda_star()}, {100, lambda_star()}}};
    const SimOptions options{Policy::random_selection, ChannelModel::sic};
    const SimReport report =
        run_simulation(spec, LoadVector{{0.25, 0.25}}, options, 4000, 12);
    const ClassReport& a = report.classes[0];
    const ClassReport& b = report.classes[1];
    // two-sample z-test at the 0.01 level; ci95 = 1.96 * se
    const double se = std::hypot(a.ci95 / 1.96, b.ci95 / 1.96);
    CHECK(std::abs(a.throughput - b.throughput) < 2.576 * se);
}

TEST_CASE("mixed network matches its single-class equivalent")
{
    const auto x2 = DegreeDistribution::from_probs({{2, 1.0}});
    const auto x4 = DegreeDistribution::from_probs({{4, 1.0}});
    NetworkSpec multi{150, {{75, x2}, {75, x4}}};
    const std::vector<double> loads{0.3, 0.3};
    const auto mixed = DegreeDistribution::mix(loads, std::vector<DegreeDistribution>{x2, x4});
    NetworkSpec dual{150, {{150, mixed}}};

    const SimOptions options{Policy::random_selection, ChannelModel::sic};
    const SimReport multi_report =
        run_simulation(multi, LoadVector{loads}, options, 3000, 21);
    const SimReport dual_report =
        run_simulation(dual, LoadVector{{0.6}}, options, 3000, 22);

    const double tv = total_variation(
        SlotDegreeHistogram{multi_report.slot_histogram, 0},
        SlotDegreeHistogram{dual_report.slot_histogram, 0});
    CHECK(tv < 0.02);
    CHECK(std::abs(multi_report.total_throughput - dual_report.total_throughput) <=
          multi_report.total_ci95 + dual_report.total_ci95);
}

TEST_CASE("single-replica traffic follows the closed-form throughput")
{
    const std::uint32_t num_slots = 200;
    NetworkSpec spec{num_slots, {{200, single_replica()}}};
    const SimOptions options{Policy::random_selection, ChannelModel::sic};
    const SimReport report = run_simulation(spec, LoadVector{{0.5}}, options, 10000, 31);
    // a packet survives iff no other of the L-1 packets picks its slot:
    // E[T] = G * (1 - 1/M)^(L-1)
    const double expected = 0.5 * std::pow(1.0 - 1.0 / num_slots, 100 - 1);
    CHECK(report.total_throughput ==
          doctest::Approx(expected).epsilon(3.0 * report.total_ci95 / expected));
}

TEST_CASE("sweep is deterministic and independent of worker count")
{
    NetworkSpec spec{40, {{40, lambda_star()}}};
    const SimOptions options{Policy::random_selection, ChannelModel::sic};
    std::vector<double> grid{0.2, 0.4, 0.6, 0.8};
    const auto serial = sweep_load(spec, std::vector<double>{1.0}, grid, options, 200, 3, 1);
    const auto parallel = sweep_load(spec, std::vector<double>{1.0}, grid, options, 200, 3, 2);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t p = 0; p < serial.size(); ++p) {
        CHECK(serial[p].g_total == parallel[p].g_total);
        CHECK(reports_equal(serial[p].report, parallel[p].report));
    }
    // distinct grid points run on distinct substreams
    CHECK_FALSE(reports_equal(serial[0].report, serial[1].report));
}

TEST_CASE("round-robin delay accounting flows through the engine")
{
    NetworkSpec spec{100, {{100, lambda_star()}}};
    const SimOptions options{Policy::round_robin, ChannelModel::ideal};
    const SimReport report = run_simulation(spec, LoadVector{{0.25}}, options, 2000, 6);
    CHECK(report.classes[0].delay_max_frames == 4);
    CHECK(report.classes[0].delay_avg_frames == doctest::Approx(4.0).epsilon(0.01));
    CHECK(report.classes[0].delay_samples == 2000 * 25);
    CHECK(report.network_delay_max_frames == 4);
    // the ideal channel never builds a frame, so no slot statistics
    CHECK(report.slot_histogram.empty());
}
