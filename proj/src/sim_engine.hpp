// Multi-frame Monte Carlo simulation of a multi-class network: activation,
// replica placement, peeling, and aggregation of throughput, loss, delay and
// slot-degree statistics.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "degree_dist.hpp"
#include "scheduling.hpp"

namespace irsa {

struct ClassSpec {
    std::uint32_t population;
    DegreeDistribution distribution;
};

struct NetworkSpec {
    std::uint32_t frame_size; // slots per frame
    std::vector<ClassSpec> classes;

    std::size_t num_classes() const { return classes.size(); }
    std::uint64_t total_population() const;
};

/// Per-class offered load, in active users per slot.
struct LoadVector {
    std::vector<double> per_class;

    double total() const;
    /// Active user counts L_i = round(frame_size * G_i), half away from zero.
    std::vector<std::uint32_t> active_counts(std::uint32_t frame_size) const;
};

/// Which decode model maps activations to successes.
enum class ChannelModel {
    /// Replica placement plus peeling; collisions may lose packets.
    sic,
    /// Every activated user succeeds. This is the asymptotic loss-free regime
    /// assumed by the delay formulas; it isolates the scheduling layer from
    /// finite-frame decoding noise.
    ideal,
};

struct FrameResult {
    std::vector<std::uint32_t> successes; // per class
    std::vector<std::uint32_t> activated; // per class
};

struct ClassReport {
    std::uint32_t population = 0;
    std::uint32_t active_count = 0; // L_i
    double offered_load = 0.0;      // L_i / M
    double throughput = 0.0;        // mean successes per slot
    double ci95 = 0.0;              // normal-approximation half width
    double loss_rate = 0.0;         // 1 - throughput / offered_load
    double delay_avg_frames = 0.0;
    std::uint64_t delay_max_frames = 0;
    std::uint64_t delay_samples = 0;
};

struct SimReport {
    std::uint64_t frames = 0;
    std::uint64_t seed = 0;
    double offered_total = 0.0;
    double total_throughput = 0.0;
    double total_ci95 = 0.0;
    std::vector<ClassReport> classes;
    /// Mean empirical slot degree distribution across frames (empty under the
    /// ideal channel, which never builds a frame).
    std::vector<double> slot_histogram;
    /// Average of per-class mean delays over classes with samples.
    double network_delay_avg_frames = 0.0;
    /// Worst per-class maximum delay.
    std::uint64_t network_delay_max_frames = 0;
};

struct SimOptions {
    Policy policy = Policy::random_selection;
    ChannelModel channel = ChannelModel::sic;
};

/// Mutable state carried across the frames of one run: per-class scheduler
/// queues, delay accounting, and sampling scratch.
struct SimState {
    SimState(const NetworkSpec& spec, Policy policy);

    std::vector<ClassState> classes;
    std::vector<DelayAccumulator> delays;

    // frame-to-frame scratch, reused to keep the hot loop allocation-free
    std::vector<std::vector<std::uint32_t>> activated;
    std::vector<std::vector<std::uint32_t>> decoded;
    std::vector<std::uint32_t> degrees;
};

/// One frame: activates active_counts[i] users per class under the policy,
/// samples their repetition degrees, builds the slot graph, peels, maps the
/// decoded users back to their classes and updates delay accounting.
/// `occupancy_counts`, when given, accumulates the per-slot-degree totals.
FrameResult run_frame(const NetworkSpec& spec, std::span<const std::uint32_t> active_counts,
                      const SimOptions& options, SimState& state, std::int64_t frame_index,
                      Rng& rng, std::vector<std::uint64_t>* occupancy_counts = nullptr);

/// Runs `frames` independent frames and aggregates. Identical seed and
/// configuration give a bit-identical report.
SimReport run_simulation(const NetworkSpec& spec, const LoadVector& load,
                         const SimOptions& options, std::uint64_t frames,
                         std::uint64_t seed);

struct SweepPoint {
    double g_total = 0.0;
    SimReport report;
};

/// One simulation per grid value of total load, split across classes by
/// `direction` (nonnegative, summing to 1). Each grid point runs on its own
/// seed substream, so results do not depend on worker count or order.
std::vector<SweepPoint> sweep_load(const NetworkSpec& spec, std::span<const double> direction,
                                   std::span<const double> grid, const SimOptions& options,
                                   std::uint64_t frames, std::uint64_t seed,
                                   std::uint32_t workers = 0);

} // namespace irsa
