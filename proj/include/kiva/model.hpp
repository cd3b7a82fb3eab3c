#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "kiva/sku_set.hpp"

namespace kiva {

using OrderIdx = std::uint32_t;
using RackIdx = std::uint32_t;

/// One warehouse batch: the SKU universe, the orders to pick, the racks that can
/// be brought to a station, the number of stations and the bench capacity.
/// Orders and racks are referenced by dense index everywhere.
struct Instance {
    std::size_t sku_count = 0;
    std::size_t stations = 0;
    std::size_t capacity = 0;
    std::vector<SkuSet> orders;
    std::vector<SkuSet> racks;

    /// Builds an instance from SKU id lists. Throws invalid_instance when an id
    /// lies outside [0, sku_count).
    static Instance from_lists(std::size_t sku_count, std::size_t stations, std::size_t capacity,
                               const std::vector<std::vector<SkuId>>& orders,
                               const std::vector<std::vector<SkuId>>& racks);

    std::size_t order_count() const noexcept { return orders.size(); }
    std::size_t rack_count() const noexcept { return racks.size(); }
    std::size_t max_order_size() const noexcept;
    std::vector<std::vector<SkuId>> order_lists() const;
    std::vector<std::vector<SkuId>> rack_lists() const;
};

using OrderSequence = std::vector<OrderIdx>;
using RackSequence = std::vector<RackIdx>;

/// theta: per-station processing sequences of orders.
struct OrderSchedule {
    std::vector<OrderSequence> stations;

    std::size_t token_count() const noexcept;
    OrderSequence flatten() const;
    std::vector<std::size_t> segment_sizes() const;
    static OrderSchedule split(const OrderSequence& tokens, const std::vector<std::size_t>& sizes);
    friend bool operator==(const OrderSchedule&, const OrderSchedule&) = default;
};

/// mu: per-station rack arrival sequences. Racks may repeat within and
/// across stations.
struct RackSchedule {
    std::vector<RackSequence> stations;
    friend bool operator==(const RackSchedule&, const RackSchedule&) = default;
};

struct Solution {
    OrderSchedule theta;
    RackSchedule mu;
    friend bool operator==(const Solution&, const Solution&) = default;
};

inline constexpr std::size_t unbounded_width = std::numeric_limits<std::size_t>::max();

enum class RspMode { exact, greedy, automatic };

/// How the epoch-local fitness extremes feeding the epoch-length update are
/// collected.
enum class EpochTracking {
    all_observed,  ///< min/max over every fitness seen in the epoch
    branchwise,    ///< min from improving moves, max from non-improving moves only
};

struct SolverParams {
    double w = 0.05;
    double alpha = 0.95;
    std::size_t k0 = 10;
    std::size_t max_iterations = 5000;
    double tau_floor = 0.01;
    double time_limit_seconds = 600.0;
    std::vector<std::size_t> gamma{1, 4, 16, 64};
    std::uint64_t rng_seed = 1;
    std::size_t restarts = 1;
    RspMode rsp_mode = RspMode::automatic;
    std::size_t rsp_node_budget = 1'000'000;
    /// Rack sequencing during annealing only draws on the racks picked by the
    /// per-station selection solves.
    bool rack_reduction = true;
    EpochTracking epoch_tracking = EpochTracking::all_observed;
    /// Bit i enables operator i (swap, shift, inversion). Zero disables the search.
    unsigned operator_mask = 0b111;

    /// Throws invalid_input on out-of-range values.
    void validate() const;
};

/// Station workload sizes: the first n % m stations get ceil(n/m) orders, the
/// rest floor(n/m).
std::vector<std::size_t> balance_counts(std::size_t n, std::size_t m);

/// Trivial bound on the number of time slots: ceil(n/m) * max|o| * |R|.
std::size_t time_slot_upper_bound(const Instance& instance);

/// Empty when the instance is well formed; otherwise one message per problem.
std::vector<std::string> validate_instance(const Instance& instance);

/// Empty when theta partitions all orders with balanced segment sizes.
std::vector<std::string> validate_order_schedule(const Instance& instance, const OrderSchedule& theta);

} // namespace kiva
