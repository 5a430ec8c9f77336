#include "scheduling.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "error.hpp"

namespace irsa {

ClassState::ClassState(std::uint32_t population, Policy policy)
    : population_(population), policy_(policy)
{
    queue_.resize(population);
    std::iota(queue_.begin(), queue_.end(), 0);
    in_pending_.assign(population, 0);
    pending_since_.assign(population, policy == Policy::round_robin ? 0 : -1);
    scratch_.resize(population);
    std::iota(scratch_.begin(), scratch_.end(), 0);
}

std::vector<std::uint32_t> ClassState::select_random(std::uint32_t count, Rng& rng)
{
    if (count > population_)
        raise(ErrorCode::count_exceeds_population,
              "cannot activate " + std::to_string(count) + " of " +
                  std::to_string(population_) + " users");

    // Partial Fisher-Yates over the persistent pool; the pool remains a
    // permutation, so every call draws a uniform subset.
    std::vector<std::uint32_t> selected(count);
    for (std::uint32_t j = 0; j < count; ++j) {
        const auto pick = j + static_cast<std::uint32_t>(rng.below(population_ - j));
        std::swap(scratch_[j], scratch_[pick]);
        selected[j] = scratch_[j];
    }
    std::sort(selected.begin(), selected.end());
    return selected;
}

std::vector<std::uint32_t> ClassState::select_round_robin(std::uint32_t count)
{
    if (count > population_)
        raise(ErrorCode::count_exceeds_population,
              "cannot activate " + std::to_string(count) + " of " +
                  std::to_string(population_) + " users");

    std::vector<std::uint32_t> selected;
    selected.reserve(count);
    std::vector<std::uint8_t> in_selection(population_, 0);

    const std::size_t from_pending = std::min<std::size_t>(pending_failures_.size(), count);
    for (std::size_t i = 0; i < from_pending; ++i) {
        selected.push_back(pending_failures_[i]);
        in_selection[pending_failures_[i]] = 1;
    }

    std::uint32_t need = count - static_cast<std::uint32_t>(from_pending);
    std::size_t steps = 0;
    while (need > 0 && steps < population_) {
        const std::uint32_t user = queue_[head_];
        head_ = (head_ + 1) % population_;
        ++steps;
        if (in_selection[user])
            continue; // already retransmitting as a failure; its turn is spent
        in_selection[user] = 1;
        selected.push_back(user);
        --need;
    }

    std::sort(selected.begin(), selected.end());
    return selected;
}

void ClassState::record_outcome(std::span<const std::uint32_t> activated,
                                std::span<const std::uint32_t> decoded,
                                std::int64_t frame_index, DelayAccumulator& stats)
{
    if (!std::includes(activated.begin(), activated.end(), decoded.begin(), decoded.end()))
        raise(ErrorCode::decoded_not_activated,
              "decoded set contains a user that was not activated");

    if (policy_ == Policy::random_selection) {
        for (std::uint32_t user : activated)
            if (pending_since_[user] < 0)
                pending_since_[user] = frame_index;
    }

    bool pending_shrunk = false;
    for (std::uint32_t user : decoded) {
        const auto delay = static_cast<std::uint64_t>(frame_index - pending_since_[user] + 1);
        stats.add(delay);
        pending_since_[user] = frame_index + 1;
        if (in_pending_[user]) {
            in_pending_[user] = 0;
            pending_shrunk = true;
        }
    }
    if (pending_shrunk) {
        std::erase_if(pending_failures_,
                      [&](std::uint32_t user) { return in_pending_[user] == 0; });
    }

    if (policy_ == Policy::round_robin) {
        // activated \ decoded, both ascending; new failures append in index
        // order behind older ones.
        std::size_t d = 0;
        for (std::uint32_t user : activated) {
            if (d < decoded.size() && decoded[d] == user) {
                ++d;
                continue;
            }
            if (!in_pending_[user]) {
                in_pending_[user] = 1;
                pending_failures_.push_back(user);
            }
        }
    }
}

} // namespace irsa
