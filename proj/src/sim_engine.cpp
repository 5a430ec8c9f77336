#include "sim_engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

#include "error.hpp"
#include "sic.hpp"

namespace irsa {

std::uint64_t NetworkSpec::total_population() const
{
    std::uint64_t total = 0;
    for (const ClassSpec& c : classes)
        total += c.population;
    return total;
}

double LoadVector::total() const
{
    double sum = 0.0;
    for (double g : per_class)
        sum += g;
    return sum;
}

std::vector<std::uint32_t> LoadVector::active_counts(std::uint32_t frame_size) const
{
    std::vector<std::uint32_t> counts;
    counts.reserve(per_class.size());
    for (double g : per_class)
        counts.push_back(static_cast<std::uint32_t>(
            std::floor(g * static_cast<double>(frame_size) + 0.5)));
    return counts;
}

namespace {

struct RunningMoments {
    // Success counts are integers, so plain 64-bit accumulation is exact and
    // order-insensitive.
    std::uint64_t sum = 0;
    std::uint64_t sum_sq = 0;

    void add(std::uint64_t value)
    {
        sum += value;
        sum_sq += value * value;
    }

    double mean(std::uint64_t n) const
    {
        return static_cast<double>(sum) / static_cast<double>(n);
    }

    double ci95(std::uint64_t n) const
    {
        if (n < 2)
            return 0.0;
        const double nn = static_cast<double>(n);
        const double m = mean(n);
        const double var =
            (static_cast<double>(sum_sq) - nn * m * m) / (nn - 1.0);
        return 1.96 * std::sqrt(std::max(var, 0.0) / nn);
    }
};

void validate_run(const NetworkSpec& spec, const LoadVector& load,
                  std::span<const std::uint32_t> counts)
{
    if (spec.frame_size == 0)
        raise(ErrorCode::empty_frame, "frame must contain at least one slot");
    if (spec.classes.empty())
        raise(ErrorCode::invalid_argument, "network needs at least one class");
    if (load.per_class.size() != spec.num_classes())
        raise(ErrorCode::length_mismatch,
              "load vector has " + std::to_string(load.per_class.size()) +
                  " entries for " + std::to_string(spec.num_classes()) + " classes");
    for (std::size_t i = 0; i < spec.classes.size(); ++i) {
        if (load.per_class[i] < 0.0)
            raise(ErrorCode::invalid_argument, "negative load for class " + std::to_string(i));
        if (counts[i] > spec.classes[i].population)
            raise(ErrorCode::load_exceeds_population,
                  "class " + std::to_string(i) + " load activates " +
                      std::to_string(counts[i]) + " of " +
                      std::to_string(spec.classes[i].population) + " users");
        if (counts[i] > 0 && spec.classes[i].distribution.max_degree() > spec.frame_size)
            raise(ErrorCode::degree_exceeds_frame,
                  "class " + std::to_string(i) + " can draw degree " +
                      std::to_string(spec.classes[i].distribution.max_degree()) +
                      " but the frame has " + std::to_string(spec.frame_size) + " slots");
    }
}

} // namespace

SimState::SimState(const NetworkSpec& spec, Policy policy)
{
    classes.reserve(spec.num_classes());
    for (const ClassSpec& c : spec.classes)
        classes.emplace_back(c.population, policy);
    delays.resize(spec.num_classes());
    activated.resize(spec.num_classes());
    decoded.resize(spec.num_classes());
}

FrameResult run_frame(const NetworkSpec& spec, std::span<const std::uint32_t> active_counts,
                      const SimOptions& options, SimState& state, std::int64_t frame_index,
                      Rng& rng, std::vector<std::uint64_t>* occupancy_counts)
{
    const std::size_t k = spec.num_classes();
    if (active_counts.size() != k || state.classes.size() != k)
        raise(ErrorCode::length_mismatch, "one active count and state per class required");
    for (std::size_t i = 0; i < k; ++i)
        if (active_counts[i] > spec.classes[i].population)
            raise(ErrorCode::load_exceeds_population,
                  "class " + std::to_string(i) + " load activates " +
                      std::to_string(active_counts[i]) + " of " +
                      std::to_string(spec.classes[i].population) + " users");

    for (std::size_t i = 0; i < k; ++i)
        state.activated[i] = options.policy == Policy::random_selection
                                 ? state.classes[i].select_random(active_counts[i], rng)
                                 : state.classes[i].select_round_robin(active_counts[i]);

    if (options.channel == ChannelModel::ideal) {
        for (std::size_t i = 0; i < k; ++i)
            state.decoded[i] = state.activated[i];
    } else {
        const std::uint32_t total_active =
            std::accumulate(active_counts.begin(), active_counts.end(), 0u);
        state.degrees.resize(total_active);
        std::size_t offset = 0;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t u = 0; u < state.activated[i].size(); ++u)
                state.degrees[offset++] = spec.classes[i].distribution.sample(rng);

        const FrameGraph graph = build_frame(state.degrees, spec.frame_size, rng);
        const DecodeResult outcome = peel(graph);

        if (occupancy_counts != nullptr) {
            for (std::uint32_t c : graph.slot_count) {
                if (c >= occupancy_counts->size())
                    occupancy_counts->resize(c + 1, 0);
                ++(*occupancy_counts)[c];
            }
        }

        // Split the globally indexed decoded users back into classes; class
        // blocks are contiguous and outcome.decoded is ascending.
        std::size_t class_begin = 0;
        std::size_t cursor = 0;
        for (std::size_t i = 0; i < k; ++i) {
            state.decoded[i].clear();
            const std::size_t class_end = class_begin + state.activated[i].size();
            while (cursor < outcome.decoded.size() && outcome.decoded[cursor] < class_end) {
                state.decoded[i].push_back(
                    state.activated[i][outcome.decoded[cursor] - class_begin]);
                ++cursor;
            }
            class_begin = class_end;
        }
    }

    FrameResult result;
    result.successes.reserve(k);
    result.activated.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        state.classes[i].record_outcome(state.activated[i], state.decoded[i], frame_index,
                                        state.delays[i]);
        result.successes.push_back(static_cast<std::uint32_t>(state.decoded[i].size()));
        result.activated.push_back(static_cast<std::uint32_t>(state.activated[i].size()));
    }
    return result;
}

SimReport run_simulation(const NetworkSpec& spec, const LoadVector& load,
                         const SimOptions& options, std::uint64_t frames,
                         std::uint64_t seed)
{
    if (frames == 0)
        raise(ErrorCode::invalid_argument, "simulation needs at least one frame");
    const std::vector<std::uint32_t> counts = load.active_counts(spec.frame_size);
    validate_run(spec, load, counts);

    const std::size_t k = spec.num_classes();
    SimState state(spec, options.policy);
    std::vector<RunningMoments> class_moments(k);
    RunningMoments total_moments;
    std::vector<std::uint64_t> occupancy_counts; // summed across frames

    for (std::uint64_t frame = 0; frame < frames; ++frame) {
        Rng rng = Rng::substream(seed, frame);
        const FrameResult outcome =
            run_frame(spec, counts, options, state, static_cast<std::int64_t>(frame), rng,
                      options.channel == ChannelModel::sic ? &occupancy_counts : nullptr);
        std::uint64_t frame_total = 0;
        for (std::size_t i = 0; i < k; ++i) {
            class_moments[i].add(outcome.successes[i]);
            frame_total += outcome.successes[i];
        }
        total_moments.add(frame_total);
    }

    SimReport report;
    report.frames = frames;
    report.seed = seed;
    const double slots = static_cast<double>(spec.frame_size);
    report.classes.resize(k);
    double delay_sum = 0.0;
    std::size_t delay_classes = 0;
    for (std::size_t i = 0; i < k; ++i) {
        ClassReport& cls = report.classes[i];
        cls.population = spec.classes[i].population;
        cls.active_count = counts[i];
        cls.offered_load = static_cast<double>(counts[i]) / slots;
        cls.throughput = class_moments[i].mean(frames) / slots;
        cls.ci95 = class_moments[i].ci95(frames) / slots;
        cls.loss_rate =
            cls.offered_load > 0.0 ? 1.0 - cls.throughput / cls.offered_load : 0.0;
        cls.delay_avg_frames = state.delays[i].average_frames();
        cls.delay_max_frames = state.delays[i].max_frames;
        cls.delay_samples = state.delays[i].samples;
        report.offered_total += cls.offered_load;
        if (state.delays[i].samples > 0) {
            delay_sum += cls.delay_avg_frames;
            ++delay_classes;
            report.network_delay_max_frames =
                std::max(report.network_delay_max_frames, state.delays[i].max_frames);
        }
    }
    report.total_throughput = total_moments.mean(frames) / slots;
    report.total_ci95 = total_moments.ci95(frames) / slots;
    if (delay_classes > 0)
        report.network_delay_avg_frames = delay_sum / static_cast<double>(delay_classes);

    if (!occupancy_counts.empty()) {
        const double total_slots = static_cast<double>(frames) * slots;
        report.slot_histogram.reserve(occupancy_counts.size());
        for (std::uint64_t c : occupancy_counts)
            report.slot_histogram.push_back(static_cast<double>(c) / total_slots);
    }
    return report;
}

std::vector<SweepPoint> sweep_load(const NetworkSpec& spec, std::span<const double> direction,
                                   std::span<const double> grid, const SimOptions& options,
                                   std::uint64_t frames, std::uint64_t seed,
                                   std::uint32_t workers)
{
    if (direction.size() != spec.num_classes())
        raise(ErrorCode::length_mismatch,
              "direction has " + std::to_string(direction.size()) + " entries for " +
                  std::to_string(spec.num_classes()) + " classes");
    double direction_sum = 0.0;
    for (double d : direction) {
        if (d < 0.0)
            raise(ErrorCode::invalid_argument, "direction entries must be nonnegative");
        direction_sum += d;
    }
    if (std::abs(direction_sum - 1.0) > 1e-9)
        raise(ErrorCode::invalid_argument, "direction entries must sum to 1");
    if (grid.empty())
        raise(ErrorCode::invalid_argument, "load grid must be nonempty");
    for (std::size_t p = 1; p < grid.size(); ++p)
        if (grid[p] < grid[p - 1])
            raise(ErrorCode::invalid_argument, "load grid must be nondecreasing");

    std::vector<SweepPoint> points(grid.size());
    auto run_point = [&](std::size_t p) {
        LoadVector load;
        load.per_class.reserve(direction.size());
        for (double d : direction)
            load.per_class.push_back(d * grid[p]);
        points[p].g_total = grid[p];
        points[p].report =
            run_simulation(spec, load, options, frames, split_seed(seed, p));
    };

    std::uint32_t pool_size = workers == 0 ? std::thread::hardware_concurrency() : workers;
    pool_size = std::max(1u, std::min<std::uint32_t>(pool_size, grid.size()));
    if (pool_size == 1) {
        for (std::size_t p = 0; p < grid.size(); ++p)
            run_point(p);
        return points;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(pool_size);
    for (std::uint32_t w = 0; w < pool_size; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t p = next.fetch_add(1);
                if (p >= grid.size())
                    return;
                try {
                    run_point(p);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                    return;
                }
            }
        });
    }
    for (std::thread& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
    return points;
}

} // namespace irsa
