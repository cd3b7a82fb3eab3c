#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "kiva/model.hpp"

namespace kiva {

/// Orders and racks allotted to one station by the rack selection model.
struct StationCover {
    std::vector<OrderIdx> orders;  // ascending
    std::vector<RackIdx> racks;    // ascending
};

struct RspAssignment {
    std::vector<StationCover> stations;
    std::size_t solves = 0;         // optimisation runs spent so far
    bool used_fallback = false;     // some solve fell back to the greedy surrogate

    std::size_t total_racks() const;
    /// Union of all station rack sets, ascending.
    std::vector<RackIdx> rack_pool() const;
};

/// Chooses `k` of the candidate orders and a rack set covering all of their
/// SKUs, minimising the number of racks.
///
/// exact: branch and bound over rack subsets, bounded by a greedy cover; no
/// node limit. automatic: the same search under `node_budget`, falling back
/// to greedy when the budget runs out. greedy: orders are clustered by SKU
/// overlap starting from the lowest index, then covered greedily (largest
/// number of uncovered SKUs first, lowest rack index on ties).
///
/// Throws invalid_input when k exceeds the candidate count and infeasible when
/// a demanded SKU is on none of the racks.
StationCover solve_single_station_rsp(const Instance& instance, std::span<const OrderIdx> candidates,
                                      std::span<const RackIdx> racks, std::size_t k, RspMode mode,
                                      std::size_t node_budget = 1'000'000, bool* fell_back = nullptr);

/// Minimum number of racks from `racks` covering `demand`; empty optional when
/// the budget runs out. Throws infeasible if no cover exists.
std::optional<std::vector<RackIdx>> exact_cover(const SkuSet& demand, std::span<const RackIdx> racks,
                                                const Instance& instance, std::size_t node_budget);
std::vector<RackIdx> greedy_cover(const SkuSet& demand, std::span<const RackIdx> racks, const Instance& instance);

/// Stations solved one after another in index order, each taking its
/// balance_counts share from the orders left over by its predecessors.
RspAssignment rsp_sequential(const Instance& instance, RspMode mode, std::size_t node_budget = 1'000'000);

/// Joint re-solve over all stations restricted to the racks chosen so far.
/// Returns the input (with the solve counted) unless the total rack count
/// strictly drops.
RspAssignment rsp_consolidate(const Instance& instance, const RspAssignment& assignment, RspMode mode,
                              std::size_t node_budget = 1'000'000);

/// Joint balanced assignment over all stations using only `pool`. exact mode
/// searches exhaustively (with bounding); otherwise a swap-based local search
/// starting from `start`. Empty when the exact search exceeds the budget.
std::optional<RspAssignment> rsp_joint(const Instance& instance, std::span<const RackIdx> pool, RspMode mode,
                                       std::size_t node_budget, const RspAssignment* start = nullptr);

/// rsp_sequential followed by rsp_consolidate: m + 1 solves.
RspAssignment rsp_reduce(const Instance& instance, RspMode mode, std::size_t node_budget = 1'000'000);

/// Encodes an assignment as an order schedule; each station's orders become a
/// uniformly random permutation.
OrderSchedule theta_from_rsp(const RspAssignment& assignment, std::mt19937_64& rng);

} // namespace kiva
