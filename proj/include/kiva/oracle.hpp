#pragma once

#include <cstddef>
#include <span>

#include "kiva/model.hpp"

namespace kiva {

/// Size guard for the exhaustive solvers; requests beyond it are refused.
struct OracleLimits {
    std::size_t max_orders = 6;
    std::size_t max_racks = 5;
    std::size_t max_capacity = 3;
    std::size_t max_stations = 2;
};

struct StationOptimum {
    std::size_t visits = 0;
    OrderSequence sequence;
    RackSequence racks;
};

/// Minimum rack visits for one station holding `orders`, by enumerating every
/// processing order and every rack sequence up to the slot bound (replayed with
/// the bench semantics, never through the DP). Throws limit_exceeded beyond
/// `limits`.
StationOptimum exact_station_optimum(const Instance& instance, std::span<const OrderIdx> orders,
                                     const OracleLimits& limits = {});

struct OracleResult {
    Solution solution;
    std::size_t objective = 0;
};

/// Exhaustive optimum over every balanced partition of the orders.
OracleResult brute_force_solve(const Instance& instance, const OracleLimits& limits = {});

/// Single-station worked example: SKUs A..G are ids 0..6, orders in
/// processing order {E},{G},{C},{F},{A,B}, racks r1={A,B}, r2={C,F}, r3={D},
/// r4={E,G} at indices 0..3, bench capacity 3. Calling r4, r2, r1 finishes all
/// orders. Only the rack contents, the capacity and the three-visit outcome
/// come from the source example; the order contents are reconstructed and r3
/// is a placeholder so rack names line up with indices.
Instance reference_instance();
Solution reference_solution();

} // namespace kiva
