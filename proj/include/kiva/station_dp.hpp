#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "kiva/model.hpp"

namespace kiva {

/// DP state of one station: the residual SKU set of every bench position, the
/// 1-based pointer to the next pending order, and the number of racks
/// dispatched so far.
struct BenchState {
    std::vector<SkuSet> residuals;
    std::size_t psi = 1;
    std::size_t stage = 0;

    bool terminal(std::size_t sequence_length) const;
    friend bool operator==(const BenchState&, const BenchState&) = default;
};

BenchState initial_state(std::span<const OrderIdx> sequence, const Instance& instance);

/// Applies a rack to a state. Every residual loses the rack's SKUs; emptied
/// positions are refilled from the sequence (the newcomer already picks from
/// the rack, cascading). Empty when the rack shrinks no residual.
std::optional<BenchState> transition(const BenchState& state, RackIdx rack, std::span<const OrderIdx> sequence,
                                     const Instance& instance);

/// Beam filtering order: fewer unprocessed orders first, then fewer distinct
/// SKUs left on the bench, then original position. Returns a permutation of
/// indices into `nodes`.
std::vector<std::size_t> rank_states(std::span<const BenchState> nodes, std::size_t sequence_length);

/// Rack sequencing for one station with a fixed order sequence.
///
/// Holds the instance-wide rack bitsets and search buffers so repeated calls
/// (as issued by the annealer) do not reallocate. Not thread-safe; use one
/// searcher per thread.
class BeamSearcher {
public:
    explicit BeamSearcher(const Instance& instance);
    ~BeamSearcher();
    BeamSearcher(BeamSearcher&&) noexcept;
    BeamSearcher& operator=(BeamSearcher&&) noexcept;

    /// Breadth-first beam search over bench states with deduplication. Returns
    /// a rack sequence shorter than `upper_bound`, or nothing. With an
    /// unbounded width the result is a minimum-length sequence.
    /// Throws infeasible when some demanded SKU is stocked by no rack.
    std::optional<RackSequence> search(std::span<const OrderIdx> sequence, std::size_t beam_width,
                                       std::size_t upper_bound = unbounded_width);

    /// Iterated beam search: one search per width in `gamma`, each bounded by
    /// the best length found so far.
    RackSequence iterate(std::span<const OrderIdx> sequence, std::span<const std::size_t> gamma);

    /// Number of states generated by the last search call.
    std::size_t last_generated() const noexcept;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

std::optional<RackSequence> beam_search(std::span<const OrderIdx> sequence, const Instance& instance,
                                        std::size_t beam_width, std::size_t upper_bound = unbounded_width);

RackSequence iterated_beam_search(std::span<const OrderIdx> sequence, const Instance& instance,
                                  std::span<const std::size_t> gamma);

/// Stage cap for one station: |sequence| * max order size * |R|.
std::size_t station_stage_bound(std::span<const OrderIdx> sequence, const Instance& instance);

} // namespace kiva
