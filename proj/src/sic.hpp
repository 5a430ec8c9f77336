// Per-frame bipartite user/slot graph and the iterative interference
// cancellation (peeling) decoder.
//
// Channel model: collisions destroy every colliding packet, a singleton slot
// always decodes, and cancellation of a decoded user's replicas is perfect.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rng.hpp"

namespace irsa {

struct FrameGraph {
    std::uint32_t num_slots = 0;
    /// Per-user list of distinct slot indices holding that user's replicas.
    std::vector<std::vector<std::uint32_t>> transmissions;
    /// Number of replicas landing in each slot.
    std::vector<std::uint32_t> slot_count;
};

struct DecodeResult {
    /// Indices of decoded users, ascending.
    std::vector<std::uint32_t> decoded;
    /// Number of cancellation rounds that resolved at least one user.
    std::uint32_t iterations = 0;
    /// Slots still holding an unresolved collision at the fixed point.
    std::uint32_t residual_slots = 0;
};

struct SlotDegreeHistogram {
    /// probs[m] is the fraction of slots with exactly m transmissions.
    std::vector<double> probs;
    /// Slots the histogram was measured over; 0 for analytic distributions.
    std::uint64_t total_slots = 0;
};

/// Places each user's replicas in `degrees[u]` distinct uniformly random
/// slots, independently across users.
FrameGraph build_frame(std::span<const std::uint32_t> degrees, std::uint32_t num_slots,
                       Rng& rng);

/// Runs peeling to its fixed point: resolve a singleton slot, cancel the
/// decoded user's replicas everywhere, repeat. The decoded set does not
/// depend on the order singletons are processed.
DecodeResult peel(const FrameGraph& frame);

/// Empirical slot degree distribution of one frame.
SlotDegreeHistogram slot_histogram(const FrameGraph& frame);

/// Binomial slot degree distribution for `num_active = round(g_total * M)`
/// users whose mean repetition count is `mean_degree`: each of the active
/// users hits a given slot with probability mean_degree / M.
SlotDegreeHistogram analytic_slot_dist(double g_total, double mean_degree,
                                       std::uint32_t num_slots, std::uint32_t num_active);

/// Total variation distance between two slot degree histograms.
double total_variation(const SlotDegreeHistogram& a, const SlotDegreeHistogram& b);

/// Debug rendering: one "user: slot,slot,..." line per user plus a final
/// "decoded:" line when a decode result is supplied.
std::string dump_frame(const FrameGraph& frame, const DecodeResult* result = nullptr);

} // namespace irsa
