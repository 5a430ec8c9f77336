#include "sic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "error.hpp"

namespace irsa {

FrameGraph build_frame(std::span<const std::uint32_t> degrees, std::uint32_t num_slots,
                       Rng& rng)
{
    if (num_slots == 0)
        raise(ErrorCode::empty_frame, "frame must contain at least one slot");
    for (std::uint32_t degree : degrees) {
        if (degree == 0)
            raise(ErrorCode::zero_degree, "user degree must be at least 1");
        if (degree > num_slots)
            raise(ErrorCode::degree_exceeds_frame,
                  "degree " + std::to_string(degree) + " exceeds frame size " +
                      std::to_string(num_slots));
    }

    FrameGraph frame;
    frame.num_slots = num_slots;
    frame.transmissions.resize(degrees.size());
    frame.slot_count.assign(num_slots, 0);

    // Partial Fisher-Yates over a slot pool. The pool stays a permutation
    // between users, so each user still draws a uniform set of distinct slots.
    std::vector<std::uint32_t> pool(num_slots);
    std::iota(pool.begin(), pool.end(), 0);

    for (std::size_t user = 0; user < degrees.size(); ++user) {
        const std::uint32_t degree = degrees[user];
        auto& slots = frame.transmissions[user];
        slots.resize(degree);
        for (std::uint32_t j = 0; j < degree; ++j) {
            const auto pick = j + static_cast<std::uint32_t>(rng.below(num_slots - j));
            std::swap(pool[j], pool[pick]);
            slots[j] = pool[j];
            ++frame.slot_count[pool[j]];
        }
    }
    return frame;
}

DecodeResult peel(const FrameGraph& frame)
{
    const std::size_t num_users = frame.transmissions.size();
    std::vector<std::uint32_t> count = frame.slot_count;

    // XOR of the user ids still occupying each slot; when a slot's count
    // drops to 1 the XOR is exactly the remaining user.
    std::vector<std::uint32_t> remaining(frame.num_slots, 0);
    for (std::uint32_t user = 0; user < num_users; ++user)
        for (std::uint32_t slot : frame.transmissions[user])
            remaining[slot] ^= user;

    std::vector<std::uint32_t> wave;
    for (std::uint32_t slot = 0; slot < frame.num_slots; ++slot)
        if (count[slot] == 1)
            wave.push_back(slot);

    DecodeResult result;
    std::vector<std::uint32_t> next;
    while (!wave.empty()) {
        next.clear();
        bool resolved_any = false;
        for (std::uint32_t slot : wave) {
            if (count[slot] != 1)
                continue; // resolved or emptied earlier in this round
            const std::uint32_t user = remaining[slot];
            result.decoded.push_back(user);
            resolved_any = true;
            for (std::uint32_t replica_slot : frame.transmissions[user]) {
                remaining[replica_slot] ^= user;
                if (--count[replica_slot] == 1)
                    next.push_back(replica_slot);
            }
        }
        if (resolved_any)
            ++result.iterations;
        wave.swap(next);
    }

    for (std::uint32_t c : count)
        if (c >= 2)
            ++result.residual_slots;

    std::sort(result.decoded.begin(), result.decoded.end());
    return result;
}

SlotDegreeHistogram slot_histogram(const FrameGraph& frame)
{
    SlotDegreeHistogram hist;
    hist.total_slots = frame.num_slots;
    std::uint32_t max_occupancy = 0;
    for (std::uint32_t c : frame.slot_count)
        max_occupancy = std::max(max_occupancy, c);
    hist.probs.assign(max_occupancy + 1, 0.0);
    const double weight = 1.0 / static_cast<double>(frame.num_slots);
    for (std::uint32_t c : frame.slot_count)
        hist.probs[c] += weight;
    return hist;
}

SlotDegreeHistogram analytic_slot_dist(double g_total, double mean_degree,
                                       std::uint32_t num_slots, std::uint32_t num_active)
{
    if (num_slots == 0)
        raise(ErrorCode::empty_frame, "frame must contain at least one slot");
    if (num_active != static_cast<std::uint32_t>(std::llround(g_total * num_slots)))
        raise(ErrorCode::inconsistent_load,
              "active count " + std::to_string(num_active) + " does not match load " +
                  std::to_string(g_total) + " over " + std::to_string(num_slots) + " slots");
    if (!(mean_degree > 0.0) || mean_degree > static_cast<double>(num_slots))
        raise(ErrorCode::invalid_argument, "mean degree must lie in (0, frame size]");

    const double rho = mean_degree / static_cast<double>(num_slots);
    SlotDegreeHistogram hist;
    hist.probs.assign(num_active + 1, 0.0);
    if (rho == 1.0) {
        hist.probs[num_active] = 1.0;
        return hist;
    }
    // Binomial(num_active, rho) via the ratio recurrence.
    double p = std::pow(1.0 - rho, static_cast<double>(num_active));
    const double odds = rho / (1.0 - rho);
    for (std::uint32_t m = 0; m <= num_active; ++m) {
        hist.probs[m] = p;
        p *= odds * static_cast<double>(num_active - m) / static_cast<double>(m + 1);
    }
    return hist;
}

double total_variation(const SlotDegreeHistogram& a, const SlotDegreeHistogram& b)
{
    const std::size_t size = std::max(a.probs.size(), b.probs.size());
    double distance = 0.0;
    for (std::size_t m = 0; m < size; ++m) {
        const double pa = m < a.probs.size() ? a.probs[m] : 0.0;
        const double pb = m < b.probs.size() ? b.probs[m] : 0.0;
        distance += std::abs(pa - pb);
    }
    return 0.5 * distance;
}

std::string dump_frame(const FrameGraph& frame, const DecodeResult* result)
{
    std::string out;
    for (std::uint32_t user = 0; user < frame.transmissions.size(); ++user) {
        out += std::to_string(user);
        out += ": ";
        const auto& slots = frame.transmissions[user];
        for (std::size_t i = 0; i < slots.size(); ++i) {
            if (i > 0)
                out += ',';
            out += std::to_string(slots[i]);
        }
        out += '\n';
    }
    if (result != nullptr) {
        out += "decoded:";
        for (std::size_t i = 0; i < result->decoded.size(); ++i) {
            out += i == 0 ? " " : ",";
            out += std::to_string(result->decoded[i]);
        }
        out += '\n';
    }
    return out;
}

} // namespace irsa
