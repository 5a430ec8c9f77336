// Active-user selection per frame and per-user transmit delay accounting.
//
// Two policies: independent uniform re-selection each frame, and a
// deterministic circular queue that reschedules failed users first.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rng.hpp"

namespace irsa {

enum class Policy {
    random_selection,
    round_robin,
};

/// Running delay statistics of one class, in frames.
struct DelayAccumulator {
    std::uint64_t samples = 0;
    std::uint64_t sum_frames = 0;
    std::uint64_t max_frames = 0;

    void add(std::uint64_t delay_frames)
    {
        ++samples;
        sum_frames += delay_frames;
        if (delay_frames > max_frames)
            max_frames = delay_frames;
    }

    double average_frames() const
    {
        return samples == 0 ? 0.0
                            : static_cast<double>(sum_frames) / static_cast<double>(samples);
    }
};

/// Mutable per-class scheduler state; confined to one simulation run.
class ClassState {
public:
    ClassState(std::uint32_t population, Policy policy);

    std::uint32_t population() const { return population_; }

    /// Uniform sample without replacement; no memory of previous frames.
    std::vector<std::uint32_t> select_random(std::uint32_t count, Rng& rng);

    /// Users that failed previously (oldest first), then the next users from
    /// the circular queue. The head advances past every queue position
    /// consumed this frame. When more users are pending than fit, the oldest
    /// failures fill the whole selection and the rest carry over.
    std::vector<std::uint32_t> select_round_robin(std::uint32_t count);

    const std::vector<std::uint32_t>& pending_failures() const { return pending_failures_; }

    /// Records one frame's outcome: decoded users contribute a delay sample
    /// of frame_index - pending_since + 1 frames and start a fresh packet at
    /// frame_index + 1; failed users keep their packet clock running and,
    /// under the round-robin policy, join the pending retransmission list.
    ///
    /// `activated` and `decoded` must be ascending and decoded must be a
    /// subset of activated.
    void record_outcome(std::span<const std::uint32_t> activated,
                        std::span<const std::uint32_t> decoded, std::int64_t frame_index,
                        DelayAccumulator& stats);

private:
    std::uint32_t population_;
    Policy policy_;
    std::vector<std::uint32_t> queue_; // circular activation order
    std::size_t head_ = 0;
    std::vector<std::uint32_t> pending_failures_; // FIFO by failure time
    std::vector<std::uint8_t> in_pending_;
    // Frame at which the user's current packet became pending; -1 means no
    // clock yet (random policy starts a user's clock at first activation,
    // round robin treats everyone as backlogged from frame 0).
    std::vector<std::int64_t> pending_since_;
    std::vector<std::uint32_t> scratch_; // sampling pool for select_random
};

} // namespace irsa
